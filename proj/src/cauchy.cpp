#include "landau/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <stdexcept>

namespace landau {

void CauchyProblem::validate() const {
  if (!(T > 0.0)) throw std::invalid_argument("CauchyProblem: T must be positive");
  if (!(params.B > 0.0)) throw std::invalid_argument("CauchyProblem: B must be positive");
  if (!a.lower_bound() || !(*a.lower_bound() > 0.0)) {
    throw std::invalid_argument(
        "CauchyProblem: a must be marked with a positive lower bound a0");
  }
  if (!q.lower_bound() || *q.lower_bound() < 0.0) {
    throw std::invalid_argument("CauchyProblem: q must be marked nonnegative");
  }
  if (std::abs(a.horizon() - T) > 1e-12 || std::abs(q.horizon() - T) > 1e-12) {
    throw std::invalid_argument("CauchyProblem: coefficient horizons must equal T");
  }
  for (const auto& [key, spec] : forcing) {
    if (!trunc.contains(key.first)) {
      throw std::invalid_argument("CauchyProblem: forcing outside truncation");
    }
    if (key.second != 1 && key.second != 2) {
      throw std::invalid_argument("CauchyProblem: forcing component must be 1 or 2");
    }
  }
  for (const auto& [xi, mc] : u0.coefficients()) {
    if (!trunc.contains(xi)) {
      throw std::invalid_argument("CauchyProblem: u0 outside truncation");
    }
  }
  for (const auto& [xi, mc] : u1.coefficients()) {
    if (!trunc.contains(xi)) {
      throw std::invalid_argument("CauchyProblem: u1 outside truncation");
    }
  }
}

bool CauchyProblem::classical_regime() const {
  if (a.has_deltas() || q.has_deltas()) return false;
  for (const auto& [key, spec] : forcing) {
    if (spec.envelope && spec.envelope->has_deltas()) return false;
  }
  return true;
}

std::vector<double> uniform_times(double T, int count) {
  if (count < 2) throw std::invalid_argument("uniform_times: need >= 2 samples");
  std::vector<double> ts(count);
  for (int i = 0; i < count; ++i) ts[i] = T * i / (count - 1);
  ts.back() = T;
  return ts;
}

namespace {

struct SolvedModes {
  // (xi, component) -> per-output-time (v, dv)
  std::map<ForcingKey, std::vector<ModeState>> states;
  std::map<ForcingKey, EnergyTrace> traces;
  long accepted = 0;
  long rejected = 0;
};

ModeForcingFn make_forcing_fn(const ModeForcingSpec& spec,
                              const MollifierSpec* psi, double w) {
  ModeForcingFn fn;
  const complex amp = spec.amplitude;
  const double freq = spec.frequency;
  if (!spec.envelope) {
    fn.value = [amp, freq](double t) { return amp * std::exp(complex(0.0, freq * t)); };
  } else if (spec.envelope->has_deltas()) {
    // Distributional envelope: only valid regularised.
    RegularizedCoefficient reg(*spec.envelope, *psi, w);
    fn.value = [amp, freq, reg](double t) {
      return amp * reg.value(t) * std::exp(complex(0.0, freq * t));
    };
  } else {
    const TimeDistribution env = *spec.envelope;
    fn.value = [amp, freq, env](double t) {
      return amp * env.smooth_value(t) * std::exp(complex(0.0, freq * t));
    };
    fn.breakpoints = env.interior_breakpoints();
  }
  return fn;
}

// Solves every (mode, component) that carries data or forcing; all other
// modes are identically zero by decoupling and are left unstored.
SolvedModes solve_modes(const CauchyProblem& p, const CoefficientFn& a_fn,
                        const CoefficientFn& q_fn, const MollifierSpec* psi,
                        double w, const IntegratorConfig& cfg,
                        std::span<const double> out_times) {
  std::set<ForcingKey> active;
  auto collect = [&](const SpectralField& field) {
    for (const auto& [xi, mc] : field.coefficients()) {
      if (mc.c1 != complex{0.0, 0.0}) active.insert({xi, 1});
      if (mc.c2 != complex{0.0, 0.0}) active.insert({xi, 2});
    }
  };
  collect(p.u0);
  collect(p.u1);
  for (const auto& [key, spec] : p.forcing) {
    if (spec.amplitude != complex{0.0, 0.0}) active.insert(key);
  }

  SolvedModes out;
  for (const auto& key : active) {
    const auto& [xi, component] = key;
    ModeODE ode;
    ode.nu2 = nu_squared(xi, p.params);
    ode.a = a_fn;
    ode.q = q_fn;
    ode.variant = p.variant;
    auto fit = p.forcing.find(key);
    if (fit != p.forcing.end() && fit->second.amplitude != complex{0.0, 0.0}) {
      ode.forcing = make_forcing_fn(fit->second, psi, w);
    }
    const complex v0 = p.u0.get(xi, component);
    const complex v1 = p.u1.get(xi, component);
    ModeSolveResult r;
    try {
      r = integrate_mode(ode, v0, v1, out_times, cfg);
    } catch (const std::exception& e) {
      throw std::runtime_error("mode (j=" + std::to_string(xi.j) +
                               ", n=" + std::to_string(xi.n) + ", component " +
                               std::to_string(component) + "): " + e.what());
    }
    out.accepted += r.accepted_steps;
    out.rejected += r.rejected_steps;
    out.traces.emplace(key, std::move(r.trace));
    out.states.emplace(key, std::move(r.states));
  }
  return out;
}

Solution assemble(const CauchyProblem& p, SolvedModes&& modes,
                  std::span<const double> out_times,
                  const std::function<double(double)>& a_at,
                  const std::function<double(double)>& q_at) {
  Solution sol;
  sol.times.assign(out_times.begin(), out_times.end());
  sol.total_accepted_steps = modes.accepted;
  sol.total_rejected_steps = modes.rejected;
  TruncationSpec full = p.trunc;
  full.use_c1 = true;
  full.use_c2 = true;
  for (std::size_t ti = 0; ti < sol.times.size(); ++ti) {
    SpectralField ut(p.params, full);
    SpectralField dut(p.params, full);
    for (const auto& [key, states] : modes.states) {
      const auto& [xi, component] = key;
      const double nu = std::sqrt(nu_squared(xi, p.params));
      const ModeState& st = states[ti];
      ut.set(xi, component, st.v_hat(nu));
      dut.set(xi, component, st.dv_hat());
    }
    sol.u.push_back(std::move(ut));
    sol.du.push_back(std::move(dut));
  }
  // Initial samples are the data, exactly.
  if (!sol.times.empty() && sol.times.front() == 0.0) {
    SpectralField ut(p.params, full), dut(p.params, full);
    for (const auto& [xi, mc] : p.u0.coefficients()) {
      if (mc.c1 != complex{0.0, 0.0}) ut.set(xi, 1, mc.c1);
      if (mc.c2 != complex{0.0, 0.0}) ut.set(xi, 2, mc.c2);
    }
    for (const auto& [xi, mc] : p.u1.coefficients()) {
      if (mc.c1 != complex{0.0, 0.0}) dut.set(xi, 1, mc.c1);
      if (mc.c2 != complex{0.0, 0.0}) dut.set(xi, 2, mc.c2);
    }
    sol.u.front() = std::move(ut);
    sol.du.front() = std::move(dut);
  }
  sol.traces = std::move(modes.traces);
  for (double t : sol.times) {
    sol.a_values.push_back(a_at(t));
    sol.q_values.push_back(q_at(t));
  }
  // Truncation diagnostic: mass fraction in the top shell n = n_max.
  double worst = 0.0;
  for (const auto& field : sol.u) {
    double top = 0.0, total = 0.0;
    for (const auto& [xi, mc] : field.coefficients()) {
      const double m = std::norm(mc.c1) + std::norm(mc.c2);
      total += m;
      if (xi.n == p.trunc.n_max) top += m;
    }
    if (total > 0.0) worst = std::max(worst, top / total);
  }
  sol.top_shell_fraction = worst;
  return sol;
}

}  // namespace

Solution solve_classical(const CauchyProblem& p, const IntegratorConfig& cfg,
                         std::span<const double> out_times) {
  p.validate();
  if (!p.classical_regime()) {
    throw std::invalid_argument(
        "solve_classical: coefficients carry deltas; use solve_regularized");
  }
  const CoefficientFn a_fn = CoefficientFn::from(p.a);
  const CoefficientFn q_fn = CoefficientFn::from(p.q);
  SolvedModes modes = solve_modes(p, a_fn, q_fn, nullptr, 0.0, cfg, out_times);
  return assemble(p, std::move(modes), out_times,
                  [&p](double t) { return p.a.smooth_value(t); },
                  [&p](double t) { return p.q.smooth_value(t); });
}

Solution solve_regularized(const CauchyProblem& p, const MollifierSpec& psi,
                           const OmegaSchedule& schedule, double eps,
                           const IntegratorConfig& cfg,
                           std::span<const double> out_times) {
  p.validate();
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("solve_regularized: eps must lie in (0, 1)");
  }
  const double w = omega(schedule, eps);
  std::vector<std::string> warnings;
  if (w > 0.5 * std::min(p.T, 1.0)) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "omega(eps=%.6g) = %.6g exceeds half the interval scale",
                  eps, w);
    warnings.emplace_back(buf);
  }
  if (w > 1.0) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "omega(eps=%.6g) = %.6g exceeds 1", eps, w);
    warnings.emplace_back(buf);
  }
  RegularizedCoefficient a_reg = regularize(p.a, psi, w);
  RegularizedCoefficient q_reg = regularize(p.q, psi, w);
  const CoefficientFn a_fn = CoefficientFn::from(a_reg);
  const CoefficientFn q_fn = CoefficientFn::from(q_reg);
  SolvedModes modes = solve_modes(p, a_fn, q_fn, &psi, w, cfg, out_times);
  Solution sol = assemble(p, std::move(modes), out_times,
                          [a_reg](double t) { return a_reg.value(t); },
                          [q_reg](double t) { return q_reg.value(t); });
  sol.warnings = std::move(warnings);
  return sol;
}

NormTrace solution_norms(const Solution& sol, double s) {
  NormTrace nt;
  nt.t = sol.times;
  nt.u_norm.reserve(sol.times.size());
  nt.du_norm.reserve(sol.times.size());
  for (std::size_t i = 0; i < sol.times.size(); ++i) {
    nt.u_norm.push_back(sobolev_norm(sol.u[i], 1.0 + s));
    nt.du_norm.push_back(sobolev_norm(sol.du[i], s));
  }
  return nt;
}

EstimateReport estimate_check(const Solution& sol, const CauchyProblem& p) {
  p.validate();
  if (!p.classical_regime()) {
    throw std::invalid_argument("estimate_check: classical regime required");
  }
  const double B = p.params.B;
  // Uniform-in-mode Gronwall constants: nu^2 >= B makes q/nu^2 largest at the
  // bottom shell, and s11 >= min_t a (CPa) since 1 + q/nu^2 >= 1.
  const int n_samples = 4000;
  double a_min = std::numeric_limits<double>::infinity();
  double a_max = 0.0, q_max = 0.0;
  for (int i = 0; i <= n_samples; ++i) {
    const double t = p.T * i / n_samples;
    a_min = std::min(a_min, p.a.smooth_value(t));
    a_max = std::max(a_max, p.a.smooth_value(t));
    q_max = std::max(q_max, p.q.smooth_value(t));
  }
  double c1, c2;
  std::function<double(double)> rate;
  if (p.variant == Variant::CPa) {
    c1 = std::min(a_min, 1.0);
    c2 = std::max(a_max * (1.0 + q_max / B), 1.0);
    rate = [&](double t) {
      const double da = std::abs(p.a.smooth_derivative(t));
      const double dq = std::abs(p.q.smooth_derivative(t));
      return (da * (1.0 + p.q.smooth_value(t) / B) +
              p.a.smooth_value(t) * dq / B) /
             std::min(a_min, 1.0);
    };
  } else {
    c1 = std::min(a_min, 1.0);
    c2 = std::max(a_max + q_max / B, 1.0);
    rate = [&](double t) {
      const double da = std::abs(p.a.smooth_derivative(t));
      const double dq = std::abs(p.q.smooth_derivative(t));
      return (da + dq / B) / std::min(a_min, 1.0);
    };
  }
  const double rate_integral = detail::gauss_legendre(rate, 0.0, p.T, 64);

  EstimateReport rep;
  const NormTrace nt = solution_norms(sol, p.s);
  double sup_f2 = 0.0;
  const bool forced = !p.forcing.empty();
  if (forced) {
    for (double t : sol.times) {
      double sum = 0.0;
      for (const auto& [key, spec] : p.forcing) {
        const double w = std::pow(nu_squared(key.first, p.params), p.s);
        double env = 1.0;
        if (spec.envelope) env = spec.envelope->smooth_value(t);
        sum += w * std::norm(spec.amplitude) * env * env;
      }
      sup_f2 = std::max(sup_f2, sum);
    }
  }
  const double rhs = sobolev_norm(p.u0, 1.0 + p.s) * sobolev_norm(p.u0, 1.0 + p.s) +
                     sobolev_norm(p.u1, p.s) * sobolev_norm(p.u1, p.s) + sup_f2;
  double lhs_max = 0.0;
  for (std::size_t i = 0; i < nt.t.size(); ++i) {
    lhs_max = std::max(lhs_max,
                       nt.u_norm[i] * nt.u_norm[i] + nt.du_norm[i] * nt.du_norm[i]);
  }
  if (rhs == 0.0) {
    rep.passed = true;
    rep.measured_C = 0.0;
    rep.bound = 1.0;
    return rep;
  }
  rep.measured_C = lhs_max / rhs;
  if (!forced) {
    rep.bound = (c2 / c1) * std::exp(rate_integral);
  } else {
    // d E <= M/c1 E + M |F|^2 with M = max(|d s11| + 1, max(s11, 1)^2), so
    // E(T) <= e^{M T / c1} (c2 |V0|^2 + M T sup |F|^2).
    double m_sup = 0.0;
    for (int i = 0; i <= n_samples; ++i) {
      const double t = p.T * i / n_samples;
      const double ds11 = rate(t) * std::min(a_min, 1.0);
      m_sup = std::max(m_sup, std::max(ds11 + 1.0, c2 * c2));
    }
    rep.bound = std::exp(m_sup * p.T / c1) * std::max(c2, m_sup * p.T) / c1;
  }
  rep.passed = rep.measured_C <= rep.bound * 1.1;
  return rep;
}

void write_solution_csv(const Solution& sol, std::ostream& out) {
  out << "t,j,n,component,re_u,im_u,re_du,im_du\n";
  char buf[256];
  for (std::size_t ti = 0; ti < sol.times.size(); ++ti) {
    const auto& ut = sol.u[ti];
    const auto& dut = sol.du[ti];
    std::set<SpectralIndex> keys;
    for (const auto& [xi, mc] : ut.coefficients()) keys.insert(xi);
    for (const auto& [xi, mc] : dut.coefficients()) keys.insert(xi);
    for (const auto& xi : keys) {
      for (int comp : {1, 2}) {
        const complex cu = ut.get(xi, comp);
        const complex cdu = dut.get(xi, comp);
        if (cu == complex{0.0, 0.0} && cdu == complex{0.0, 0.0}) continue;
        std::snprintf(buf, sizeof(buf), "%.17g,%d,%d,%d,%.17g,%.17g,%.17g,%.17g\n",
                      sol.times[ti], xi.j, xi.n, comp, cu.real(), cu.imag(),
                      cdu.real(), cdu.imag());
        out << buf;
      }
    }
  }
}

void write_norms_csv(const NormTrace& norms, std::ostream& out) {
  out << "t,h_norm_1plus_s,h_norm_s\n";
  char buf[128];
  for (std::size_t i = 0; i < norms.t.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", norms.t[i],
                  norms.u_norm[i], norms.du_norm[i]);
    out << buf;
  }
}

}  // namespace landau
