#include "landau/mode_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace landau {

CoefficientFn CoefficientFn::constant(double c) {
  return {[c](double) { return c; }, [](double) { return 0.0; }, {}};
}

CoefficientFn CoefficientFn::from(const TimeDistribution& dist) {
  if (dist.has_deltas()) {
    throw std::invalid_argument(
        "CoefficientFn: distribution with deltas has no pointwise values; regularize first");
  }
  CoefficientFn fn;
  fn.value = [dist](double t) { return dist.smooth_value(t); };
  fn.derivative = [dist](double t) { return dist.smooth_derivative(t); };
  fn.breakpoints = dist.interior_breakpoints();
  return fn;
}

CoefficientFn CoefficientFn::from(const RegularizedCoefficient& reg) {
  CoefficientFn fn;
  fn.value = [reg](double t) { return reg.value(t); };
  fn.derivative = [reg](double t) { return reg.derivative(t); };
  return fn;
}

double ModeODE::kappa(double t) const {
  const double at = a.value(t);
  const double qt = q.value(t);
  return variant == Variant::CPa ? at * (1.0 + qt / nu2) : at + qt / nu2;
}

double ModeODE::kappa_derivative(double t) const {
  const double at = a.value(t);
  const double qt = q.value(t);
  const double dat = a.derivative(t);
  const double dqt = q.derivative(t);
  return variant == Variant::CPa ? dat * (1.0 + qt / nu2) + at * dqt / nu2
                                 : dat + dqt / nu2;
}

SystemMatrices assemble_system(const ModeODE& ode, double t) {
  SystemMatrices m;
  m.A[0][0] = 0.0;
  m.A[0][1] = 1.0;
  m.A[1][0] = ode.kappa(t);
  m.A[1][1] = 0.0;
  m.F2 = ode.forcing ? ode.forcing->value(t) : complex{0.0, 0.0};
  return m;
}

Symmetriser symmetriser_eval(const ModeODE& ode, double t) {
  return Symmetriser{ode.kappa(t)};
}

double energy(const ModeState& state, const Symmetriser& sym) {
  return sym.s11 * std::norm(state.V1) + std::norm(state.V2);
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

using State4 = std::array<double, 4>;  // (Re V1, Im V1, Re V2, Im V2)

State4 axpy(const State4& y, double h, const State4& d) {
  return {y[0] + h * d[0], y[1] + h * d[1], y[2] + h * d[2], y[3] + h * d[3]};
}

}  // namespace

ModeSolveResult integrate_mode(const ModeODE& ode, complex v0, complex v1,
                               std::span<const double> out_times,
                               const IntegratorConfig& cfg) {
  if (!(ode.nu2 > 0.0)) {
    throw std::invalid_argument("integrate_mode: nu^2 must be positive");
  }
  if (!(cfg.rel_tol > 0.0 && cfg.rel_tol <= 1e-2 && cfg.abs_tol > 0.0 &&
        cfg.abs_tol <= 1e-2)) {
    throw std::invalid_argument("integrate_mode: tolerances must lie in (0, 1e-2]");
  }
  if (!(cfg.max_step_fraction > 0.0 && cfg.max_step_fraction <= 0.1)) {
    throw std::invalid_argument("integrate_mode: max_step_fraction must be <= 0.1");
  }
  if (out_times.empty()) {
    throw std::invalid_argument("integrate_mode: no output times");
  }
  for (std::size_t i = 0; i + 1 < out_times.size(); ++i) {
    if (!(out_times[i] < out_times[i + 1])) {
      throw std::invalid_argument("integrate_mode: output times must increase");
    }
  }
  const double nu = std::sqrt(ode.nu2);
  const double t_begin = out_times.front();
  const double t_final = out_times.back();

  // Landing points: output times plus coefficient/forcing jump locations.
  std::vector<double> landings(out_times.begin(), out_times.end());
  auto add_breaks = [&](const std::vector<double>& bs) {
    for (double b : bs) {
      if (b > t_begin && b < t_final) landings.push_back(b);
    }
  };
  add_breaks(ode.a.breakpoints);
  add_breaks(ode.q.breakpoints);
  if (ode.forcing) add_breaks(ode.forcing->breakpoints);
  std::sort(landings.begin(), landings.end());
  landings.erase(std::unique(landings.begin(), landings.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-15; }),
                 landings.end());

  auto rhs = [&](double t, const State4& y) {
    const double kap = ode.kappa(t);
    State4 d;
    // V1' = i nu V2, V2' = i nu kappa V1 + f(t)
    d[0] = -nu * y[3];
    d[1] = nu * y[2];
    d[2] = -nu * kap * y[1];
    d[3] = nu * kap * y[0];
    if (ode.forcing) {
      const complex f = ode.forcing->value(t);
      d[2] += f.real();
      d[3] += f.imag();
    }
    return d;
  };

  ModeSolveResult result;
  result.states.reserve(out_times.size());

  const complex V1_0 = complex(0.0, nu) * v0;
  State4 y{V1_0.real(), V1_0.imag(), v1.real(), v1.imag()};
  double t = t_begin;

  auto record_energy = [&](double at, const State4& state) {
    const Symmetriser sym = symmetriser_eval(ode, at);
    const ModeState ms{complex(state[0], state[1]), complex(state[2], state[3]), at};
    result.trace.samples.emplace_back(at, energy(ms, sym));
  };
  auto maybe_output = [&](double at, const State4& state) {
    for (double ot : out_times) {
      if (std::abs(ot - at) < 1e-14 * std::max(1.0, std::abs(at)) + 1e-300) {
        result.states.push_back(
            ModeState{complex(state[0], state[1]), complex(state[2], state[3]), at});
      }
    }
  };

  record_energy(t, y);
  maybe_output(t, y);

  State4 k1 = rhs(t, y);
  std::size_t next_landing = 0;
  while (next_landing < landings.size() &&
         std::abs(landings[next_landing] - t_begin) < 1e-15) {
    ++next_landing;
  }

  double h = 0.0;
  const double safety = 0.9;
  for (; next_landing < landings.size(); ++next_landing) {
    const double t_stop = landings[next_landing];
    bool segment_done = false;
    int consecutive_rejects = 0;
    while (!segment_done) {
      const double kap = std::max(ode.kappa(t), 1e-300);
      const double period = 2.0 * M_PI / (nu * std::sqrt(kap));
      const double h_cap = cfg.max_step_fraction * period;
      if (h <= 0.0) h = h_cap * 1e-2;
      h = std::min(h, h_cap);
      if (t + h >= t_stop) {
        h = t_stop - t;
        segment_done = true;
      }
      if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
        throw std::runtime_error("integrate_mode: step-size underflow at t = " +
                                 std::to_string(t));
      }

      const State4 k2 = rhs(t + c2 * h, axpy(y, h, {a21 * k1[0], a21 * k1[1], a21 * k1[2], a21 * k1[3]}));
      State4 tmp;
      for (int i = 0; i < 4; ++i) tmp[i] = a31 * k1[i] + a32 * k2[i];
      const State4 k3 = rhs(t + c3 * h, axpy(y, h, tmp));
      for (int i = 0; i < 4; ++i) tmp[i] = a41 * k1[i] + a42 * k2[i] + a43 * k3[i];
      const State4 k4 = rhs(t + c4 * h, axpy(y, h, tmp));
      for (int i = 0; i < 4; ++i) {
        tmp[i] = a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i];
      }
      const State4 k5 = rhs(t + c5 * h, axpy(y, h, tmp));
      for (int i = 0; i < 4; ++i) {
        tmp[i] = a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i];
      }
      const State4 k6 = rhs(t + h, axpy(y, h, tmp));
      State4 y_new;
      for (int i = 0; i < 4; ++i) {
        y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                               b5 * k5[i] + b6 * k6[i]);
      }
      const State4 k7 = rhs(t + h, y_new);  // FSAL

      double err = 0.0;
      for (int i = 0; i < 4; ++i) {
        const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                               e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double scale =
            cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        err += (ei / scale) * (ei / scale);
      }
      err = std::sqrt(err / 4.0);

      if (err <= 1.0) {
        t = segment_done ? t_stop : t + h;
        y = y_new;
        k1 = k7;
        ++result.accepted_steps;
        consecutive_rejects = 0;
        record_energy(t, y);
        if (segment_done) {
          maybe_output(t, y);
          // Re-evaluate the FSAL stage on the far side of a jump.
          k1 = rhs(t, y);
        }
        const double fac = std::clamp(
            safety * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
        h *= fac;
      } else {
        segment_done = false;
        ++result.rejected_steps;
        if (++consecutive_rejects > 30) {
          throw std::runtime_error(
              "integrate_mode: error control failed to meet tolerance at t = " +
              std::to_string(t));
        }
        h *= std::clamp(safety * std::pow(err, -0.2), 0.1, 0.5);
      }
    }
  }
  if (result.states.size() != out_times.size()) {
    throw std::logic_error("integrate_mode: missed an output time");
  }
  return result;
}

namespace {

struct ForcedParts {
  complex particular_amp{0.0, 0.0};
  double sigma = 0.0;
};

}  // namespace

complex closed_form_constant(double a0, double q0, double nu2, complex v0,
                             complex v1, double t,
                             std::optional<std::pair<complex, double>> forcing) {
  const double mu2 = a0 * (q0 + nu2);
  const double mu = std::sqrt(mu2);
  complex amp_cos = v0;
  complex amp_sin = v1 / mu;
  complex particular{0.0, 0.0};
  if (forcing) {
    const auto& [F0, sigma] = *forcing;
    if (std::abs(mu2 - sigma * sigma) <=
        1e-12 * std::max(1.0, mu2 + sigma * sigma)) {
      throw std::domain_error("closed_form_constant: resonant forcing sigma^2 == mu^2");
    }
    const complex p = F0 / (mu2 - sigma * sigma);
    particular = p * std::exp(complex(0.0, sigma * t));
    amp_cos -= p;                                   // v(0) matches v0
    amp_sin -= complex(0.0, sigma) * p / mu;        // v'(0) matches v1
  }
  return amp_cos * std::cos(mu * t) + amp_sin * std::sin(mu * t) + particular;
}

complex closed_form_constant_derivative(
    double a0, double q0, double nu2, complex v0, complex v1, double t,
    std::optional<std::pair<complex, double>> forcing) {
  const double mu2 = a0 * (q0 + nu2);
  const double mu = std::sqrt(mu2);
  complex amp_cos = v0;
  complex amp_sin = v1 / mu;
  complex dparticular{0.0, 0.0};
  if (forcing) {
    const auto& [F0, sigma] = *forcing;
    const complex p = F0 / (mu2 - sigma * sigma);
    dparticular = complex(0.0, sigma) * p * std::exp(complex(0.0, sigma * t));
    amp_cos -= p;
    amp_sin -= complex(0.0, sigma) * p / mu;
  }
  return -mu * amp_cos * std::sin(mu * t) + mu * amp_sin * std::cos(mu * t) +
         dparticular;
}

namespace {

// int_a^b |kappa'(s)| / min(kappa(s), 1) ds by per-interval Gauss points; the
// integrand is continuous between trace samples (kinks at sign changes only
// cost a locally lower quadrature order).
double gronwall_rate_integral(const ModeODE& ode, double a, double b) {
  auto rate = [&](double s) {
    const double s11 = ode.kappa(s);
    return std::abs(ode.kappa_derivative(s)) / std::min(s11, 1.0);
  };
  return detail::gauss_legendre(rate, a, b, 2);
}

}  // namespace

bool gronwall_bound_check(const EnergyTrace& trace, const ModeODE& ode) {
  if (trace.samples.empty()) {
    throw std::invalid_argument("gronwall_bound_check: empty trace");
  }
  const double E0 = trace.samples.front().second;
  const double tol = 1e-6;
  const double abs_slack = 1e-14 * std::max(1.0, E0);
  double integral = 0.0;
  double prev_t = trace.samples.front().first;
  for (std::size_t i = 1; i < trace.samples.size(); ++i) {
    const auto& [t, E] = trace.samples[i];
    integral += gronwall_rate_integral(ode, prev_t, t);
    prev_t = t;
    const double bound = E0 * std::exp(integral) * (1.0 + tol) + abs_slack;
    if (E > bound) return false;
  }
  return true;
}

ModeEstimate mode_estimate_check(const ModeODE& ode, complex v0, complex v1,
                                 std::span<const ModeState> out_states,
                                 double s) {
  ModeEstimate est;
  if (out_states.empty()) {
    throw std::invalid_argument("mode_estimate_check: no states");
  }
  const double t_end = out_states.back().t;
  const double t_begin = out_states.front().t;

  // Gronwall constants from a dense sample of s11 = kappa.
  double s11_min = std::numeric_limits<double>::infinity();
  double s11_max = 0.0;
  const int n_samples = 2000;
  for (int i = 0; i <= n_samples; ++i) {
    const double t = t_begin + (t_end - t_begin) * i / n_samples;
    const double s11 = ode.kappa(t);
    s11_min = std::min(s11_min, s11);
    s11_max = std::max(s11_max, s11);
  }
  const double c1 = std::min(s11_min, 1.0);
  const double c2 = std::max(s11_max, 1.0);
  const double rate = gronwall_rate_integral(ode, t_begin, t_end);
  est.bound = (c2 / c1) * std::exp(rate) * (1.0 + 1e-6);

  const double weight = std::pow(ode.nu2, s);
  const double rhs = weight * (ode.nu2 * std::norm(v0) + std::norm(v1));
  if (rhs == 0.0) {
    est.passed = true;
    est.measured_ratio = 0.0;
    return est;
  }
  const double nu = std::sqrt(ode.nu2);
  double worst = 0.0;
  for (const auto& st : out_states) {
    const double lhs =
        weight * (ode.nu2 * std::norm(st.v_hat(nu)) + std::norm(st.dv_hat()));
    worst = std::max(worst, lhs / rhs);
  }
  est.measured_ratio = worst;
  est.passed = worst <= est.bound;
  return est;
}

}  // namespace landau
