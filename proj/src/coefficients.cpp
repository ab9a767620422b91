#include "landau/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace landau {

namespace {

constexpr int kGaussOrder = 20;

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Legendre nodes by Newton iteration from the Chebyshev guess.
const GaussRule& gauss_rule() {
  static const GaussRule rule = [] {
    GaussRule r;
    const int n = kGaussOrder;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 1; k < n; ++k) {
          const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      r.nodes[i] = -x;
      r.weights[i] = w;
      r.nodes[n - 1 - i] = x;
      r.weights[n - 1 - i] = w;
    }
    return r;
  }();
  return rule;
}

double gauss_panel(const std::function<double(double)>& f, double a, double b) {
  const auto& rule = gauss_rule();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < kGaussOrder; ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return sum * half;
}

// Integrate f over [a, b] splitting at the sorted cut points, with each piece
// subdivided into base panels for the bump's sake.
double integrate_with_cuts(const std::function<double(double)>& f, double a,
                           double b, std::span<const double> cuts,
                           int base_panels) {
  std::vector<double> pts{a, b};
  for (double c : cuts) {
    if (c > a && c < b) pts.push_back(c);
  }
  std::sort(pts.begin(), pts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double lo = pts[i], hi = pts[i + 1];
    if (hi <= lo) continue;
    const int panels = base_panels;
    const double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      total += gauss_panel(f, lo + p * h, lo + (p + 1) * h);
    }
  }
  return total;
}

double bump_raw(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s * s));
}

double bump_raw_derivative(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double d = 1.0 - s * s;
  return bump_raw(s) * (-2.0 * s / (d * d));
}

double bump_mass() {
  static const double mass = detail::gauss_legendre(
      [](double s) { return bump_raw(s); }, -1.0, 1.0, 32);
  return mass;
}

}  // namespace

namespace detail {

double gauss_legendre(const std::function<double(double)>& f, double a,
                      double b, int panels) {
  double total = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    total += gauss_panel(f, a + p * h, a + (p + 1) * h);
  }
  return total;
}

}  // namespace detail

double PolySegment::value(double t) const {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = acc * t + *it;
  }
  return acc;
}

double PolySegment::derivative(double t) const {
  double acc = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 1;) {
    acc = acc * t + static_cast<double>(k) * coeffs[k];
  }
  return acc;
}

TimeDistribution TimeDistribution::piecewise(std::vector<PolySegment> segments,
                                             std::vector<DiracDelta> deltas,
                                             std::optional<double> lower_bound,
                                             double horizon) {
  if (!(horizon > 0.0)) {
    throw std::invalid_argument("TimeDistribution: horizon must be positive");
  }
  if (!segments.empty()) {
    if (std::abs(segments.front().t_start) > 1e-12 ||
        std::abs(segments.back().t_end - horizon) > 1e-12) {
      throw std::invalid_argument("TimeDistribution: segments must cover [0, T]");
    }
    for (std::size_t i = 0; i < segments.size(); ++i) {
      if (!(segments[i].t_end > segments[i].t_start)) {
        throw std::invalid_argument(
            "TimeDistribution: breakpoints must be strictly increasing");
      }
      if (i + 1 < segments.size() &&
          std::abs(segments[i].t_end - segments[i + 1].t_start) > 1e-12) {
        throw std::invalid_argument("TimeDistribution: segments must be contiguous");
      }
    }
  }
  for (const auto& d : deltas) {
    if (!(d.location > 0.0 && d.location < horizon)) {
      throw std::invalid_argument(
          "TimeDistribution: delta locations must lie in the open interval (0, T)");
    }
  }
  if (lower_bound) {
    for (const auto& d : deltas) {
      if (d.weight < 0.0) {
        throw std::invalid_argument(
            "TimeDistribution: marked distribution requires nonnegative delta weights");
      }
    }
    for (const auto& seg : segments) {
      for (int i = 0; i <= 256; ++i) {
        const double t = seg.t_start + (seg.t_end - seg.t_start) * i / 256.0;
        if (seg.value(t) < *lower_bound - 1e-12 * std::max(1.0, std::abs(*lower_bound))) {
          throw std::invalid_argument(
              "TimeDistribution: segment violates the declared lower bound");
        }
      }
    }
  }
  TimeDistribution dist;
  dist.segments_ = std::move(segments);
  dist.deltas_ = std::move(deltas);
  std::sort(dist.deltas_.begin(), dist.deltas_.end(),
            [](const DiracDelta& a, const DiracDelta& b) {
              return a.location < b.location;
            });
  dist.lower_bound_ = lower_bound;
  dist.horizon_ = horizon;
  return dist;
}

TimeDistribution TimeDistribution::constant(double value, double horizon,
                                            std::optional<double> lower_bound) {
  return piecewise({PolySegment{0.0, horizon, {value}}}, {}, lower_bound, horizon);
}

TimeDistribution TimeDistribution::from_function(
    const std::function<double(double)>& fn, double horizon, int n_segments,
    int degree, std::optional<double> lower_bound) {
  if (n_segments < 1 || degree < 1 || degree > 32) {
    throw std::invalid_argument("from_function: bad segment count or degree");
  }
  std::vector<PolySegment> segments;
  for (int seg = 0; seg < n_segments; ++seg) {
    const double a = horizon * seg / n_segments;
    const double b = horizon * (seg + 1) / n_segments;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const int m = degree + 1;
    std::vector<double> ts(m), fs(m);
    for (int k = 0; k < m; ++k) {
      ts[k] = mid + half * std::cos(M_PI * (2.0 * k + 1.0) / (2.0 * m));
      fs[k] = fn(ts[k]);
    }
    // Newton divided differences, then expansion to global-t monomials.
    std::vector<double> dd = fs;
    for (int level = 1; level < m; ++level) {
      for (int k = m - 1; k >= level; --k) {
        dd[k] = (dd[k] - dd[k - 1]) / (ts[k] - ts[k - level]);
      }
    }
    std::vector<double> mono{dd[m - 1]};
    for (int k = m - 2; k >= 0; --k) {
      // mono <- mono * (t - ts[k]) + dd[k]
      std::vector<double> next(mono.size() + 1, 0.0);
      for (std::size_t c = 0; c < mono.size(); ++c) {
        next[c + 1] += mono[c];
        next[c] -= ts[k] * mono[c];
      }
      next[0] += dd[k];
      mono = std::move(next);
    }
    segments.push_back(PolySegment{a, b, std::move(mono)});
  }
  return piecewise(std::move(segments), {}, lower_bound, horizon);
}

namespace {

const PolySegment* find_segment(const std::vector<PolySegment>& segments,
                                double t) {
  if (segments.empty()) return nullptr;
  // Convention: t in [t_start, t_end) selects a segment; the final segment
  // also owns its right endpoint.
  for (const auto& seg : segments) {
    if (t < seg.t_end) return &seg;
  }
  return &segments.back();
}

}  // namespace

double TimeDistribution::smooth_value(double t) const {
  if (segments_.empty()) return 0.0;
  // Constant extension beyond [0, T].
  const double tc = std::clamp(t, segments_.front().t_start, segments_.back().t_end);
  const PolySegment* seg = find_segment(segments_, tc);
  return seg ? seg->value(tc) : 0.0;
}

double TimeDistribution::smooth_derivative(double t) const {
  if (segments_.empty()) return 0.0;
  if (t < segments_.front().t_start || t > segments_.back().t_end) return 0.0;
  const PolySegment* seg = find_segment(segments_, t);
  return seg ? seg->derivative(t) : 0.0;
}

std::vector<double> TimeDistribution::interior_breakpoints() const {
  std::vector<double> pts;
  for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
    pts.push_back(segments_[i].t_end);
  }
  return pts;
}

MollifierSpec MollifierSpec::standard_bump() {
  MollifierSpec psi;
  psi.normalization_ = 1.0 / bump_mass();
  return psi;
}

MollifierSpec MollifierSpec::shifted_bump(double offset) {
  if (!(std::abs(offset) < 1.0)) {
    throw std::invalid_argument("shifted_bump: |offset| must be < 1");
  }
  MollifierSpec psi;
  psi.shifted_ = true;
  psi.offset_ = offset;
  psi.half_width_ = 1.0 - std::abs(offset);
  psi.lo_ = offset - psi.half_width_;
  psi.hi_ = offset + psi.half_width_;
  psi.normalization_ = 1.0 / (bump_mass() * psi.half_width_);
  return psi;
}

double mollifier_eval(const MollifierSpec& psi, double t) {
  if (!psi.shifted_) return psi.normalization_ * bump_raw(t);
  return psi.normalization_ * bump_raw((t - psi.offset_) / psi.half_width_);
}

double mollifier_derivative(const MollifierSpec& psi, double t) {
  if (!psi.shifted_) return psi.normalization_ * bump_raw_derivative(t);
  return psi.normalization_ *
         bump_raw_derivative((t - psi.offset_) / psi.half_width_) /
         psi.half_width_;
}

double mollifier_antiderivative(const MollifierSpec& psi, double t) {
  if (t <= psi.support_lo()) return 0.0;
  if (t >= psi.support_hi()) return 1.0;
  const double v = detail::gauss_legendre(
      [&](double s) { return mollifier_eval(psi, s); }, psi.support_lo(), t, 12);
  return std::clamp(v, 0.0, 1.0);
}

double omega(const OmegaSchedule& schedule, double eps) {
  if (schedule.kind == OmegaSchedule::Kind::constant_for_test) {
    return schedule.value;
  }
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::domain_error("omega: eps must lie in (0, 1)");
  }
  switch (schedule.kind) {
    case OmegaSchedule::Kind::log:
      return 1.0 / std::log(1.0 / eps);
    case OmegaSchedule::Kind::power:
      return std::pow(eps, schedule.p);
    default:
      return schedule.value;
  }
}

RegularizedCoefficient::RegularizedCoefficient(TimeDistribution source,
                                               MollifierSpec psi, double w)
    : source_(std::move(source)), psi_(psi), w_(w) {
  if (!(w > 0.0)) {
    throw std::invalid_argument("RegularizedCoefficient: width must be positive");
  }
  cuts_ = source_.interior_breakpoints();
  cuts_.push_back(0.0);
  cuts_.push_back(source_.horizon());
  std::sort(cuts_.begin(), cuts_.end());
  // A globally constant smooth part convolves to itself exactly (unit kernel
  // mass plus constant extension); skip the quadrature in that case.
  if (!source_.segments().empty()) {
    bool all_const = true;
    const auto first_value = source_.segments().front().value(0.0);
    for (const auto& seg : source_.segments()) {
      if (seg.coeffs.size() > 1 || seg.value(seg.t_start) != first_value) {
        all_const = false;
        break;
      }
    }
    if (all_const) constant_smooth_ = first_value;
  }
}

double RegularizedCoefficient::value(double t) const {
  double acc = 0.0;
  for (const auto& d : source_.deltas()) {
    acc += d.weight * mollifier_eval(psi_, (t - d.location) / w_) / w_;
  }
  if (constant_smooth_) {
    acc += *constant_smooth_;
  } else if (!source_.segments().empty()) {
    // int psi(s) f_ext(t - w s) ds over the support, split where t - w s
    // crosses a breakpoint or an extension boundary.
    std::vector<double> cuts;
    for (double b : cuts_) {
      cuts.push_back((t - b) / w_);
    }
    acc += integrate_with_cuts(
        [&](double s) {
          return mollifier_eval(psi_, s) * source_.smooth_value(t - w_ * s);
        },
        psi_.support_lo(), psi_.support_hi(), cuts, 16);
  }
  return acc;
}

double RegularizedCoefficient::derivative(double t) const {
  double acc = 0.0;
  for (const auto& d : source_.deltas()) {
    acc += d.weight * mollifier_derivative(psi_, (t - d.location) / w_) / (w_ * w_);
  }
  if (constant_smooth_) {
    // derivative of the constant part vanishes identically
  } else if (!source_.segments().empty()) {
    // (f * psi_w)'(t) = (1/w) int psi'(s) f_ext(t - w s) ds, which captures
    // jump contributions without differentiating f.
    std::vector<double> cuts;
    for (double b : cuts_) {
      cuts.push_back((t - b) / w_);
    }
    acc += integrate_with_cuts(
               [&](double s) {
                 return mollifier_derivative(psi_, s) *
                        source_.smooth_value(t - w_ * s);
               },
               psi_.support_lo(), psi_.support_hi(), cuts, 16) /
           w_;
  }
  return acc;
}

RegularizedCoefficient regularize(const TimeDistribution& dist,
                                  const MollifierSpec& psi, double w) {
  return RegularizedCoefficient(dist, psi, w);
}

bool verify_lower_bound(const RegularizedCoefficient& reg, double a0,
                        std::span<const double> t_samples) {
  if (!reg.source().lower_bound()) {
    throw std::invalid_argument(
        "verify_lower_bound: source carries no lower-bound marking");
  }
  const double slack = 1e-9 * std::max(1.0, std::abs(a0));
  for (double t : t_samples) {
    if (reg.value(t) < a0 - slack) return false;
  }
  return true;
}

namespace {

struct Fit {
  double slope = 0.0;
  double residual = 0.0;
};

Fit fit_loglog(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  Fit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - f.slope * sx) / n;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (intercept + f.slope * x[i]);
    rss += r * r;
  }
  f.residual = std::sqrt(rss / n);
  return f;
}

}  // namespace

ModeratenessFit moderateness_bound_estimate(const TimeDistribution& dist,
                                            const MollifierSpec& psi,
                                            const OmegaSchedule& schedule,
                                            std::span<const double> eps_grid,
                                            int k_max) {
  if (eps_grid.size() < 4) {
    throw std::invalid_argument("moderateness_bound_estimate: need >= 4 eps points");
  }
  if (k_max < 0 || k_max > 1) {
    throw std::invalid_argument(
        "moderateness_bound_estimate: only k <= 1 derivatives are formed directly");
  }
  const double T = dist.horizon();
  ModeratenessFit out;
  double value_scale = 1.0;  // k = 0 sup sets the magnitude scale for k = 1
  for (int k = 0; k <= k_max; ++k) {
    std::vector<double> xs, ys;
    for (double eps : eps_grid) {
      const double w = omega(schedule, eps);
      RegularizedCoefficient reg(dist, psi, w);
      // Uniform samples plus a refined local grid around each delta so the
      // kernel peak is captured for any mollifier shape.
      std::vector<double> samples;
      for (int i = 0; i <= 2000; ++i) samples.push_back(T * i / 2000.0);
      std::vector<double> singular_points = dist.interior_breakpoints();
      for (const auto& d : dist.deltas()) singular_points.push_back(d.location);
      for (double loc : singular_points) {
        for (int i = 0; i <= 80; ++i) {
          const double s = psi.support_lo() +
                           (psi.support_hi() - psi.support_lo()) * i / 80.0;
          const double t = loc + w * s;
          if (t >= 0.0 && t <= T) samples.push_back(t);
        }
      }
      double sup = 0.0;
      for (double t : samples) {
        const double v = (k == 0) ? reg.value(t) : reg.derivative(t);
        sup = std::max(sup, std::abs(v));
      }
      xs.push_back(std::log(1.0 / w));
      ys.push_back(sup);
    }
    ModeratenessFit::PerOrder per;
    per.k = k;
    const double hi = *std::max_element(ys.begin(), ys.end());
    const double lo = *std::min_element(ys.begin(), ys.end());
    if (k == 0) value_scale = std::max(1.0, hi);
    // Profiles that are constant, or pure quadrature noise far below the
    // coefficient's own magnitude, fit slope 0.
    if (hi - lo <= 1e-10 * std::max(1.0, hi) || hi <= 1e-8 * value_scale) {
      per.exponent = 0.0;
      per.residual = 0.0;
    } else {
      for (double& y : ys) y = std::log(y);
      const Fit f = fit_loglog(xs, ys);
      per.exponent = f.slope;
      per.residual = f.residual;
    }
    out.orders.push_back(per);
  }
  return out;
}

}  // namespace landau
