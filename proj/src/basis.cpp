#include "landau/basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace landau {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void check_params(const BasisParams& p) {
  require(p.B > 0.0, "BasisParams: B must be positive");
}

void check_index(const SpectralIndex& xi) {
  require(xi.j >= 0 && xi.n >= 0, "SpectralIndex: j, n must be nonnegative");
}

// Scaled Laguerre function l_n(x) = e^{-x/2} L_n(x); same recurrence as L_n,
// stays within double range out to the largest Gauss-Laguerre node.
double laguerre_scaled(int n, double x, double* scaled_next = nullptr) {
  double p0 = std::exp(-0.5 * x);
  double p1 = (1.0 - x) * p0;
  if (n == 0) {
    if (scaled_next) *scaled_next = p1;
    return p0;
  }
  for (int k = 1; k < n; ++k) {
    const double p2 = ((2.0 * k + 1.0 - x) * p1 - k * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
  }
  if (scaled_next) {
    *scaled_next = ((2.0 * n + 1.0 - x) * p1 - n * p0) / (n + 1.0);
  }
  return p1;
}

}  // namespace

namespace {

// Double-double compensated arithmetic. The alternating Laguerre sum loses up
// to ~12 digits to cancellation near n = 20, t = 25; accumulating terms at
// roughly 32 digits keeps the summed value accurate to well below 1e-10.
struct DD {
  double hi = 0.0;
  double lo = 0.0;
};

DD quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

DD two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

DD two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

DD dd_add(const DD& a, const DD& b) {
  DD s = two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  return quick_two_sum(s.hi, s.lo);
}

DD dd_mul(const DD& a, const DD& b) {
  DD p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

DD dd_div_double(const DD& a, double b) {
  const double q1 = a.hi / b;
  const DD r = dd_add(a, {-q1 * b, -std::fma(q1, b, -q1 * b)});
  const double q2 = (r.hi + r.lo) / b;
  return quick_two_sum(q1, q2);
}

}  // namespace

double laguerre_eval_series(int n, double alpha, double t) {
  require(n >= 0, "laguerre: n must be nonnegative");
  if (alpha <= -1.0) throw std::domain_error("laguerre: alpha must be > -1");
  // L_n^{(a)}(t) = sum_k (-1)^k binom(n+a, n-k) t^k / k!.  All terms share the
  // factor binom(n+a, n); the remaining term ratio
  //   term_{k+1} / term_k = -(n-k) t / ((a+k+1)(k+1))
  // is carried in double-double so cancellation does not eat the result.
  DD term{1.0, 0.0};
  DD sum = term;
  for (int k = 0; k < n; ++k) {
    const DD numer = two_prod(-(static_cast<double>(n) - k), t);
    DD ratio = dd_div_double(numer, alpha + k + 1.0);
    ratio = dd_div_double(ratio, k + 1.0);
    term = dd_mul(term, ratio);
    sum = dd_add(sum, term);
  }
  // Overall scale binom(n+a, n): a uniform factor, immune to cancellation.
  const double scale = std::exp(std::lgamma(n + alpha + 1.0) -
                                std::lgamma(alpha + 1.0) -
                                std::lgamma(n + 1.0));
  return scale * (sum.hi + sum.lo);
}

double laguerre_eval_recurrence(int n, double alpha, double t) {
  require(n >= 0, "laguerre: n must be nonnegative");
  if (alpha <= -1.0) throw std::domain_error("laguerre: alpha must be > -1");
  if (n == 0) return 1.0;
  double p0 = 1.0;
  double p1 = 1.0 + alpha - t;
  for (int k = 1; k < n; ++k) {
    const double p2 = ((2.0 * k + 1.0 + alpha - t) * p1 - (k + alpha) * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double laguerre_eval(int n, double alpha, double t) {
  // The alternating sum loses precision for large n; switch to the recurrence.
  if (n <= 12) return laguerre_eval_series(n, alpha, t);
  return laguerre_eval_recurrence(n, alpha, t);
}

double eigenvalue(int n, const BasisParams& params) {
  require(n >= 0, "eigenvalue: n must be nonnegative");
  check_params(params);
  return (2.0 * n + 1.0) * params.B;
}

double nu_squared(const SpectralIndex& xi, const BasisParams& params) {
  check_index(xi);
  return eigenvalue(xi.n, params);
}

QuadratureGrid QuadratureGrid::build(const BasisParams& params, int n_radial,
                                     int n_angular) {
  check_params(params);
  require(n_radial >= 1 && n_angular >= 1,
          "QuadratureGrid: node counts must be >= 1");

  // Gauss-Laguerre nodes u_i (roots of L_n) by Newton iteration on the scaled
  // Laguerre function; initial guesses as in Stroud & Secrest.
  const int n = n_radial;
  QuadratureGrid g;
  g.B_ = params.B;
  g.n_angular_ = n_angular;
  g.nodes_.resize(n);
  g.weights_.resize(n);

  double z = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      z = 3.0 / (1.0 + 2.4 * n);
    } else if (i == 1) {
      z += 15.0 / (1.0 + 2.5 * n);
    } else {
      const double ai = i - 1;
      z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - g.nodes_[i - 2] * g.nodes_[i - 2] * params.B);
    }
    // Newton: z <- z - l_n(z) / l_n'(z), with x l_n' = n(l_n - l_{n-1}) - x l_n / 2.
    double p_next = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double pn = laguerre_scaled(n, z, &p_next);
      const double pnm1 = laguerre_scaled(n - 1, z);
      const double deriv = n * (pn - pnm1) / z - 0.5 * pn;
      const double dz = pn / deriv;
      z -= dz;
      if (std::abs(dz) <= 1e-14 * std::max(1.0, z)) break;
    }
    laguerre_scaled(n, z, &p_next);
    // w = v_i e^{u_i} / (2B), with v_i e^{u_i} = u_i / ((n+1)^2 l_{n+1}(u_i)^2).
    const double scaled_weight = z / ((n + 1.0) * (n + 1.0) * p_next * p_next);
    g.nodes_[i] = std::sqrt(z / params.B);
    g.weights_[i] = scaled_weight / (2.0 * params.B);
  }
  return g;
}

complex QuadratureGrid::integrate(
    const std::function<complex(double, double)>& g) const {
  const double dtheta = 2.0 * M_PI / n_angular_;
  complex total = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const double r = nodes_[i];
    complex ring = 0.0;
    for (int k = 0; k < n_angular_; ++k) {
      const double theta = dtheta * k;
      ring += g(r * std::cos(theta), r * std::sin(theta));
    }
    total += weights_[i] * ring;
  }
  return total * dtheta;
}

complex basis_eval_raw(int component, const SpectralIndex& xi,
                       const BasisParams& params, double x, double y) {
  check_index(xi);
  check_params(params);
  require(component == 1 || component == 2, "basis: component must be 1 or 2");
  const double r2 = x * x + y * y;
  const double gauss = std::exp(-0.5 * params.B * r2);
  if (component == 1) {
    const int k = xi.j;
    const int n = xi.n;
    // sqrt(n!/(n-k)!) is undefined for k > n; replaced by 1 there (the constant
    // is absorbed by self-normalization).
    const double pref =
        (k <= n) ? std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(n - k + 1.0)))
                 : 1.0;
    const complex angular = std::pow(complex(x, y), k);
    return pref * angular * laguerre_eval(n, static_cast<double>(k), params.B * r2) * gauss;
  }
  const int j = xi.j;
  const int n = xi.n;
  const double pref =
      std::exp(0.5 * (std::lgamma(j + 1.0) - std::lgamma(j + n + 1.0)));
  const complex angular = std::pow(complex(x, -y), n);
  return pref * angular * laguerre_eval(j, static_cast<double>(n), params.B * r2) * gauss;
}

std::vector<complex> sample_basis(int component, const SpectralIndex& xi,
                                  const BasisParams& params,
                                  const QuadratureGrid& grid, bool normalized) {
  const auto& rs = grid.radial_nodes();
  const int m = grid.angular_count();
  const double dtheta = 2.0 * M_PI / m;
  std::vector<complex> values(rs.size() * m);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    for (int k = 0; k < m; ++k) {
      const double theta = dtheta * k;
      values[i * m + k] = basis_eval_raw(component, xi, params,
                                         rs[i] * std::cos(theta),
                                         rs[i] * std::sin(theta));
    }
  }
  if (normalized) {
    const complex ip = sampled_inner_product(values, values, grid);
    const double norm = std::sqrt(ip.real());
    for (auto& v : values) v /= norm;
  }
  return values;
}

complex sampled_inner_product(const std::vector<complex>& f,
                              const std::vector<complex>& g,
                              const QuadratureGrid& grid) {
  require(f.size() == g.size(), "sampled_inner_product: size mismatch");
  const auto& ws = grid.radial_weights();
  const int m = grid.angular_count();
  require(f.size() == ws.size() * static_cast<std::size_t>(m),
          "sampled_inner_product: samples do not match grid");
  const double dtheta = 2.0 * M_PI / m;
  complex total = 0.0;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    complex ring = 0.0;
    for (int k = 0; k < m; ++k) {
      const std::size_t idx = i * m + k;
      ring += f[idx] * std::conj(g[idx]);
    }
    total += ws[i] * ring;
  }
  return total * dtheta;
}

double basis_norm(int component, const SpectralIndex& xi,
                  const BasisParams& params, const QuadratureGrid& grid) {
  check_index(xi);
  // Product of two basis factors has radial degree 2(n+j)+2 in u = B r^2.
  if (2 * (xi.n + xi.j) + 2 > grid.max_radial_degree()) {
    throw std::invalid_argument(
        "basis_norm: quadrature grid cannot resolve radial degree " +
        std::to_string(2 * (xi.n + xi.j) + 2));
  }
  const auto samples = sample_basis(component, xi, params, grid, false);
  const complex ip = sampled_inner_product(samples, samples, grid);
  return std::sqrt(ip.real());
}

complex basis_eval(int component, const SpectralIndex& xi,
                   const BasisParams& params, double x, double y,
                   const QuadratureGrid& grid) {
  return basis_eval_raw(component, xi, params, x, y) /
         basis_norm(component, xi, params, grid);
}

double eigen_residual(int component, const SpectralIndex& xi,
                      const BasisParams& params, const QuadratureGrid& grid,
                      double stencil_h) {
  check_index(xi);
  check_params(params);
  require(stencil_h > 0.0, "eigen_residual: stencil spacing must be positive");
  const double B = params.B;
  const double lambda = eigenvalue(xi.n, params);
  const double h = stencil_h;

  // Effective support: keep nodes where the Gaussian envelope is above 1e-12.
  const double r_cut = std::sqrt(2.0 * 12.0 * std::log(10.0) / B);

  auto f = [&](double x, double y) {
    return basis_eval_raw(component, xi, params, x, y);
  };
  // H f = (1/2)[-f_xx - f_yy - 2iBy f_x + 2iBx f_y + B^2(x^2+y^2) f]
  auto apply_h = [&](double x, double y) {
    const complex fc = f(x, y);
    const complex fxp = f(x + h, y), fxm = f(x - h, y);
    const complex fyp = f(x, y + h), fym = f(x, y - h);
    const complex fx = (fxp - fxm) / (2.0 * h);
    const complex fy = (fyp - fym) / (2.0 * h);
    const complex fxx = (fxp - 2.0 * fc + fxm) / (h * h);
    const complex fyy = (fyp - 2.0 * fc + fym) / (h * h);
    const complex i2B(0.0, 2.0 * B);
    return 0.5 * (-fxx - fyy - i2B * y * fx + i2B * x * fy +
                  B * B * (x * x + y * y) * fc);
  };

  const auto& rs = grid.radial_nodes();
  const auto& ws = grid.radial_weights();
  const int m = grid.angular_count();
  const double dtheta = 2.0 * M_PI / m;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (rs[i] > r_cut) break;
    double ring_num = 0.0, ring_den = 0.0;
    for (int k = 0; k < m; ++k) {
      const double theta = dtheta * k;
      const double x = rs[i] * std::cos(theta);
      const double y = rs[i] * std::sin(theta);
      const complex val = f(x, y);
      const complex res = apply_h(x, y) - lambda * val;
      ring_num += std::norm(res);
      ring_den += std::norm(val);
    }
    num += ws[i] * ring_num;
    den += ws[i] * ring_den;
  }
  return std::sqrt(num / den);
}

}  // namespace landau
