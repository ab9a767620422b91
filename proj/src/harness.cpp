#include "landau/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace landau {

using ordered_json = nlohmann::ordered_json;

EpsilonGrid EpsilonGrid::dyadic(int k_min, int k_max) {
  if (k_min < 1 || k_max < k_min) {
    throw std::invalid_argument("EpsilonGrid: need 1 <= k_min <= k_max");
  }
  EpsilonGrid g;
  for (int k = k_min; k <= k_max; ++k) g.values.push_back(std::ldexp(1.0, -k));
  return g;
}

void EpsilonGrid::validate() const {
  if (values.empty()) throw std::invalid_argument("EpsilonGrid: empty grid");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0 && values[i] < 1.0)) {
      throw std::invalid_argument("EpsilonGrid: values must lie in (0, 1)");
    }
    if (i > 0 && !(values[i] < values[i - 1])) {
      throw std::invalid_argument("EpsilonGrid: values must be strictly decreasing");
    }
  }
}

namespace {

// H^{s-1} norm of d2u computed mode-wise from the solved equation.
double equation_second_derivative_norm(const Solution& sol, std::size_t ti,
                                       const CauchyProblem& p) {
  const double B = p.params.B;
  const double at = sol.a_values[ti];
  const double qt = sol.q_values[ti];
  double sum = 0.0;
  for (const auto& [xi, mc] : sol.u[ti].coefficients()) {
    const double nu2 = B * (1.0 + 2.0 * xi.n);
    const double factor =
        p.variant == Variant::CPa ? at * (qt + nu2) : at * nu2 + qt;
    const double w = std::pow(nu2, p.s - 1.0);
    sum += w * factor * factor * (std::norm(mc.c1) + std::norm(mc.c2));
  }
  return std::sqrt(sum);
}

double sup_norm_over_times(const Solution& sol, double order,
                           bool of_derivative) {
  double sup = 0.0;
  for (std::size_t i = 0; i < sol.times.size(); ++i) {
    sup = std::max(sup, sobolev_norm(of_derivative ? sol.du[i] : sol.u[i], order));
  }
  return sup;
}

struct SlopeFit {
  double slope = 0.0;
  double residual = 0.0;
};

SlopeFit fit_line(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  SlopeFit f;
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

// Error between two solutions on a shared time grid:
// sup_t ||u_a - u_b||_{H^{1+s}} + ||du_a - du_b||_{H^s}.
double solution_difference(const Solution& sa, const Solution& sb, double s) {
  if (sa.times.size() != sb.times.size()) {
    throw std::invalid_argument("solution_difference: mismatched time grids");
  }
  double sup_u = 0.0, sup_du = 0.0;
  for (std::size_t i = 0; i < sa.times.size(); ++i) {
    SpectralField diff_u(sa.u[i].params(), sa.u[i].truncation());
    SpectralField diff_du(sa.du[i].params(), sa.du[i].truncation());
    auto subtract = [](const SpectralField& f, const SpectralField& g,
                       SpectralField& out) {
      for (const auto& [xi, mc] : f.coefficients()) {
        const complex d1 = mc.c1 - g.get(xi, 1);
        const complex d2 = mc.c2 - g.get(xi, 2);
        if (d1 != complex{0.0, 0.0}) out.set(xi, 1, d1);
        if (d2 != complex{0.0, 0.0}) out.set(xi, 2, d2);
      }
      for (const auto& [xi, mc] : g.coefficients()) {
        if (f.coefficients().count(xi)) continue;
        if (mc.c1 != complex{0.0, 0.0}) out.set(xi, 1, -mc.c1);
        if (mc.c2 != complex{0.0, 0.0}) out.set(xi, 2, -mc.c2);
      }
    };
    subtract(sa.u[i], sb.u[i], diff_u);
    subtract(sa.du[i], sb.du[i], diff_du);
    sup_u = std::max(sup_u, sobolev_norm(diff_u, 1.0 + s));
    sup_du = std::max(sup_du, sobolev_norm(diff_du, s));
  }
  return sup_u + sup_du;
}

int count_inversions(std::span<const double> values) {
  int inversions = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[i - 1] * (1.0 + 1e-9)) ++inversions;
  }
  return inversions;
}

constexpr double kNoiseFloor = 1e-10;

}  // namespace

NetResult run_net(const CauchyProblem& p, const MollifierSpec& psi,
                  const OmegaSchedule& schedule, const EpsilonGrid& grid,
                  const IntegratorConfig& cfg) {
  grid.validate();
  p.validate();
  const auto out_times = uniform_times(p.T);
  NetResult result;
  result.diagnostics.eps = grid.values;
  std::size_t failed = 0;
  for (double eps : grid.values) {
    try {
      Solution sol = solve_regularized(p, psi, schedule, eps, cfg, out_times);
      double sup2 = 0.0;
      for (std::size_t ti = 0; ti < sol.times.size(); ++ti) {
        sup2 = std::max(sup2, equation_second_derivative_norm(sol, ti, p));
      }
      result.diagnostics.sup_k0.push_back(sup_norm_over_times(sol, 1.0 + p.s, false));
      result.diagnostics.sup_k1.push_back(sup_norm_over_times(sol, p.s, true));
      result.diagnostics.sup_k2.push_back(sup2);
      result.diagnostics.solved.push_back(true);
      result.solutions.emplace_back(std::move(sol));
    } catch (const std::exception& e) {
      ++failed;
      result.diagnostics.sup_k0.push_back(std::nan(""));
      result.diagnostics.sup_k1.push_back(std::nan(""));
      result.diagnostics.sup_k2.push_back(std::nan(""));
      result.diagnostics.solved.push_back(false);
      char buf[256];
      std::snprintf(buf, sizeof(buf), "eps=%.6g: %s", eps, e.what());
      result.diagnostics.failures.emplace_back(buf);
      result.solutions.emplace_back(std::nullopt);
    }
  }
  if (2 * failed > grid.values.size()) {
    throw std::runtime_error("run_net: more than half of the epsilon grid failed");
  }
  return result;
}

ModeratenessReport fit_moderateness(const NetDiagnostics& diag) {
  std::vector<double> eps, k0, k1, k2;
  for (std::size_t i = 0; i < diag.eps.size(); ++i) {
    if (!diag.solved[i]) continue;
    eps.push_back(diag.eps[i]);
    k0.push_back(diag.sup_k0[i]);
    k1.push_back(diag.sup_k1[i]);
    k2.push_back(diag.sup_k2[i]);
  }
  if (eps.size() < 4) {
    throw std::invalid_argument("fit_moderateness: need >= 4 solved epsilon points");
  }
  std::vector<double> x;
  for (double e : eps) x.push_back(std::log(1.0 / e));

  ModeratenessReport report;
  report.pass = true;
  const std::vector<const std::vector<double>*> rows{&k0, &k1, &k2};
  for (int k = 0; k < 3; ++k) {
    const auto& sup = *rows[k];
    ModeratenessReport::PerOrder per;
    per.k = k;
    double lo = sup[0], hi = sup[0];
    for (double v : sup) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi <= 0.0 || (hi - lo) <= 1e-13 * std::max(1.0, hi)) {
      // Constant net: moderate with exponent 0.
      per.exponent = 0.0;
      per.pass = true;
      report.orders.push_back(per);
      continue;
    }
    std::vector<double> y;
    for (double v : sup) y.push_back(std::log(v));
    const SlopeFit full = fit_line(x, y);
    const std::size_t half = x.size() / 2;
    const SlopeFit first = fit_line(std::span(x).subspan(0, half),
                                    std::span(y).subspan(0, half));
    const SlopeFit second = fit_line(std::span(x).subspan(half),
                                     std::span(y).subspan(half));
    // sup-norm ~ eps^{-N} means log sup = N log(1/eps): N is the slope itself.
    per.exponent = full.slope;
    per.residual = full.residual;
    per.half_slope_gap = std::abs(first.slope - second.slope);
    per.pass = std::isfinite(per.exponent) && per.half_slope_gap < 0.5;
    report.orders.push_back(per);
    report.pass = report.pass && per.pass;
  }
  return report;
}

ConsistencyReport check_consistency(const CauchyProblem& p_regular,
                                    const MollifierSpec& psi,
                                    const OmegaSchedule& schedule,
                                    const EpsilonGrid& grid,
                                    const IntegratorConfig& cfg) {
  grid.validate();
  if (!p_regular.classical_regime()) {
    throw std::invalid_argument("check_consistency: classical regime required");
  }
  const auto out_times = uniform_times(p_regular.T);
  const Solution classical = solve_classical(p_regular, cfg, out_times);
  ConsistencyReport report;
  report.eps = grid.values;
  report.ratio_threshold =
      schedule.kind == OmegaSchedule::Kind::log ? 0.5 : 0.2;
  for (double eps : grid.values) {
    const Solution reg = solve_regularized(p_regular, psi, schedule, eps, cfg, out_times);
    report.errors.push_back(solution_difference(reg, classical, p_regular.s));
  }
  report.inversions = count_inversions(report.errors);
  const double data_scale =
      1.0 + sobolev_norm(p_regular.u0, 1.0 + p_regular.s) +
      sobolev_norm(p_regular.u1, p_regular.s);
  report.at_noise_floor =
      *std::max_element(report.errors.begin(), report.errors.end()) <=
      kNoiseFloor * data_scale;
  report.final_over_initial =
      report.errors.front() > 0.0 ? report.errors.back() / report.errors.front()
                                  : 0.0;
  report.consistent =
      report.at_noise_floor ||
      (report.inversions <= 1 &&
       report.final_over_initial <= report.ratio_threshold);
  return report;
}

NegligibilityReport check_uniqueness_stability(const CauchyProblem& p,
                                               const MollifierSpec& psi_a,
                                               const MollifierSpec& psi_b,
                                               const OmegaSchedule& schedule,
                                               const EpsilonGrid& grid,
                                               const IntegratorConfig& cfg) {
  grid.validate();
  const auto out_times = uniform_times(p.T);
  NegligibilityReport report;
  report.eps = grid.values;
  for (double eps : grid.values) {
    const Solution sa = solve_regularized(p, psi_a, schedule, eps, cfg, out_times);
    const Solution sb = solve_regularized(p, psi_b, schedule, eps, cfg, out_times);
    report.differences.push_back(solution_difference(sa, sb, p.s));
  }
  report.inversions = count_inversions(report.differences);
  report.at_noise_floor =
      *std::max_element(report.differences.begin(), report.differences.end()) <=
      kNoiseFloor;
  report.decreasing = report.at_noise_floor || report.inversions <= 1;
  return report;
}

namespace {

SpectralField single_mode_field(const BasisParams& params,
                                const TruncationSpec& trunc,
                                const SpectralIndex& xi, int component,
                                complex value) {
  SpectralField f(params, trunc);
  f.set(xi, component, value);
  return f;
}

}  // namespace

CauchyProblem scenario(const std::string& name) {
  const double T = 2.0;
  CauchyProblem p;
  p.params = BasisParams{1.0};
  p.T = T;
  p.s = 0.0;
  p.trunc = TruncationSpec{3, 3, true, true};
  p.u0 = single_mode_field(p.params, p.trunc, {0, 0}, 1, complex{1.0, 0.0});
  p.u1 = SpectralField(p.params, p.trunc);

  if (name == "ex1") {
    // Printed form has a = delta_1, below the hyperbolicity floor; the unit
    // background keeps the preset inside the standing hypotheses.
    p.a = TimeDistribution::piecewise({PolySegment{0.0, T, {1.0}}},
                                      {DiracDelta{1.0, 1.0}}, 1.0, T);
    p.q = TimeDistribution::piecewise({}, {DiracDelta{1.0, 1.0}}, 0.0, T);
  } else if (name == "ex2") {
    const std::vector<PolySegment> jump{PolySegment{0.0, 1.0, {1.0}},
                                        PolySegment{1.0, T, {2.0}}};
    p.a = TimeDistribution::piecewise(jump, {}, 1.0, T);
    p.q = TimeDistribution::piecewise(jump, {DiracDelta{1.0, 1.0}}, 0.0, T);
  } else if (name == "regular") {
    p.a = TimeDistribution::from_function(
        [](double t) { return 2.0 + std::sin(t); }, T, 4, 12, 1.0);
    p.q = TimeDistribution::piecewise({PolySegment{0.0, T, {1.0, 1.0}}}, {}, 0.0, T);
  } else if (name == "inhomogeneous") {
    p.a = TimeDistribution::constant(1.0, T, 1.0);
    p.q = TimeDistribution::constant(0.0, T, 0.0);
    // Non-resonant drive on the data mode: mu = sqrt(a0 (q0 + nu^2)) = 1.
    p.forcing[{SpectralIndex{0, 0}, 1}] = ModeForcingSpec{complex{1.0, 0.0}, 3.0, {}};
    p.u0 = SpectralField(p.params, p.trunc);
  } else {
    throw std::invalid_argument("scenario: unknown scenario name '" + name + "'");
  }
  return p;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("export_reports: cannot open " + path.string());
  }
  out << content;
  if (!out) {
    throw std::runtime_error("export_reports: write failed for " + path.string());
  }
}

}  // namespace

void export_reports(const ExportBundle& bundle, const std::string& out_dir) {
  namespace fs = std::filesystem;
  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("export_reports: cannot create " + dir.string() +
                             ": " + ec.message());
  }
  const double s = bundle.problem ? bundle.problem->s : 0.0;

  // norms.csv
  {
    std::string csv;
    if (bundle.net) {
      csv = "eps,t,h_norm_1plus_s,h_norm_s\n";
      for (std::size_t i = 0; i < bundle.net->solutions.size(); ++i) {
        const auto& maybe_sol = bundle.net->solutions[i];
        if (!maybe_sol) continue;
        const double eps = bundle.net->diagnostics.eps[i];
        const NormTrace nt = solution_norms(*maybe_sol, s);
        for (std::size_t ti = 0; ti < nt.t.size(); ++ti) {
          csv += format_double(eps) + "," + format_double(nt.t[ti]) + "," +
                 format_double(nt.u_norm[ti]) + "," +
                 format_double(nt.du_norm[ti]) + "\n";
        }
      }
    } else if (bundle.classical_solution) {
      std::ostringstream ss;
      write_norms_csv(solution_norms(*bundle.classical_solution, s), ss);
      csv = ss.str();
    } else {
      csv = "eps,t,h_norm_1plus_s,h_norm_s\n";
    }
    write_file(dir / "norms.csv", csv);
  }

  // net_diagnostics.csv
  {
    std::string csv = "eps,k,sup_norm\n";
    if (bundle.net) {
      const auto& d = bundle.net->diagnostics;
      for (std::size_t i = 0; i < d.eps.size(); ++i) {
        if (!d.solved[i]) continue;
        csv += format_double(d.eps[i]) + ",0," + format_double(d.sup_k0[i]) + "\n";
        csv += format_double(d.eps[i]) + ",1," + format_double(d.sup_k1[i]) + "\n";
        csv += format_double(d.eps[i]) + ",2," + format_double(d.sup_k2[i]) + "\n";
      }
    }
    write_file(dir / "net_diagnostics.csv", csv);
  }

  // summary.json -- deterministic: no wall-clock content, ordered keys.
  ordered_json summary;
  summary["command"] = bundle.command;
  if (bundle.problem) {
    summary["parameters"] = {
        {"variant", bundle.problem->variant == Variant::CPa ? "CPa" : "CPb"},
        {"B", bundle.problem->params.B},
        {"T", bundle.problem->T},
        {"s", bundle.problem->s},
        {"truncation",
         {{"j_max", bundle.problem->trunc.j_max},
          {"n_max", bundle.problem->trunc.n_max}}},
    };
  }
  if (!bundle.schedule_label.empty()) summary["schedule"] = bundle.schedule_label;
  summary["seed"] = bundle.seed;
  if (bundle.grid) summary["eps_grid"] = bundle.grid->values;
  if (bundle.moderateness) {
    ordered_json m;
    for (const auto& per : bundle.moderateness->orders) {
      m["k" + std::to_string(per.k)] = per.exponent;
      m["k" + std::to_string(per.k) + "_residual"] = per.residual;
      m["k" + std::to_string(per.k) + "_half_slope_gap"] = per.half_slope_gap;
    }
    m["pass"] = bundle.moderateness->pass;
    summary["moderateness"] = m;
  }
  if (bundle.consistency) {
    summary["consistency"] = {
        {"errors", bundle.consistency->errors},
        {"inversions", bundle.consistency->inversions},
        {"final_over_initial", bundle.consistency->final_over_initial},
        {"ratio_threshold", bundle.consistency->ratio_threshold},
        {"at_noise_floor", bundle.consistency->at_noise_floor},
        {"consistent", bundle.consistency->consistent},
    };
  }
  if (bundle.negligibility) {
    summary["uniqueness"] = {
        {"differences", bundle.negligibility->differences},
        {"inversions", bundle.negligibility->inversions},
        {"decreasing", bundle.negligibility->decreasing},
        {"at_noise_floor", bundle.negligibility->at_noise_floor},
    };
  }
  if (bundle.net) {
    long accepted = 0;
    std::vector<std::string> warnings;
    for (const auto& maybe_sol : bundle.net->solutions) {
      if (!maybe_sol) continue;
      accepted += maybe_sol->total_accepted_steps;
      for (const auto& w : maybe_sol->warnings) warnings.push_back(w);
    }
    summary["net"] = {
        {"solved", bundle.net->diagnostics.failures.empty()},
        {"failures", bundle.net->diagnostics.failures},
        {"total_accepted_steps", accepted},
        {"warnings", warnings},
    };
  }
  if (bundle.classical_solution) {
    summary["classical"] = {
        {"top_shell_fraction", bundle.classical_solution->top_shell_fraction},
        {"total_accepted_steps", bundle.classical_solution->total_accepted_steps},
    };
  }
  write_file(dir / "summary.json", summary.dump(2) + "\n");
}

namespace {

CauchyProblem apply_overrides(CauchyProblem p, const RunOptions& opts) {
  if (opts.truncation_override) {
    p.trunc.j_max = opts.truncation_override->j_max;
    p.trunc.n_max = opts.truncation_override->n_max;
  }
  return p;
}

IntegratorConfig config_from(const RunOptions& opts) {
  IntegratorConfig cfg;
  cfg.rel_tol = opts.rel_tol;
  cfg.abs_tol = opts.rel_tol;
  return cfg;
}

std::string schedule_label(const OmegaSchedule& schedule) {
  switch (schedule.kind) {
    case OmegaSchedule::Kind::log:
      return "log";
    case OmegaSchedule::Kind::power:
      return "power:" + format_double(schedule.p);
    default:
      return "constant:" + format_double(schedule.value);
  }
}

}  // namespace

void run_solve_command(const CauchyProblem& problem, const RunOptions& opts) {
  const CauchyProblem p = apply_overrides(problem, opts);
  const auto out_times = uniform_times(p.T, opts.out_time_count);
  const Solution sol = solve_classical(p, config_from(opts), out_times);
  namespace fs = std::filesystem;
  fs::create_directories(opts.out_dir);
  {
    std::ofstream out(fs::path(opts.out_dir) / "solution.csv", std::ios::binary);
    write_solution_csv(sol, out);
  }
  ExportBundle bundle;
  bundle.classical_solution = &sol;
  bundle.problem = &p;
  bundle.command = "solve";
  bundle.seed = opts.seed;
  export_reports(bundle, opts.out_dir);
}

void run_net_command(const CauchyProblem& problem, const RunOptions& opts) {
  const CauchyProblem p = apply_overrides(problem, opts);
  const MollifierSpec psi = MollifierSpec::standard_bump();
  const NetResult net = run_net(p, psi, opts.schedule, opts.grid, config_from(opts));
  const ModeratenessReport mod = fit_moderateness(net.diagnostics);
  ExportBundle bundle;
  bundle.net = &net;
  bundle.moderateness = &mod;
  bundle.grid = &opts.grid;
  bundle.problem = &p;
  bundle.command = "net";
  bundle.schedule_label = schedule_label(opts.schedule);
  bundle.seed = opts.seed;
  export_reports(bundle, opts.out_dir);
}

void run_consistency_command(const CauchyProblem& problem, const RunOptions& opts) {
  const CauchyProblem p = apply_overrides(problem, opts);
  const MollifierSpec psi = MollifierSpec::standard_bump();
  const ConsistencyReport report =
      check_consistency(p, psi, opts.schedule, opts.grid, config_from(opts));
  ExportBundle bundle;
  bundle.consistency = &report;
  bundle.grid = &opts.grid;
  bundle.problem = &p;
  bundle.command = "consistency";
  bundle.schedule_label = schedule_label(opts.schedule);
  bundle.seed = opts.seed;
  export_reports(bundle, opts.out_dir);
}

void run_uniqueness_command(const CauchyProblem& problem, const RunOptions& opts) {
  const CauchyProblem p = apply_overrides(problem, opts);
  const MollifierSpec psi_a = MollifierSpec::standard_bump();
  const MollifierSpec psi_b = MollifierSpec::shifted_bump(0.3);
  const NegligibilityReport report = check_uniqueness_stability(
      p, psi_a, psi_b, opts.schedule, opts.grid, config_from(opts));
  ExportBundle bundle;
  bundle.negligibility = &report;
  bundle.grid = &opts.grid;
  bundle.problem = &p;
  bundle.command = "uniqueness";
  bundle.schedule_label = schedule_label(opts.schedule);
  bundle.seed = opts.seed;
  export_reports(bundle, opts.out_dir);
}

void run_scenario_command(const std::string& name, const RunOptions& opts) {
  const CauchyProblem p = apply_overrides(scenario(name), opts);
  const MollifierSpec psi = MollifierSpec::standard_bump();
  const NetResult net = run_net(p, psi, opts.schedule, opts.grid, config_from(opts));
  const ModeratenessReport mod = fit_moderateness(net.diagnostics);
  ExportBundle bundle;
  bundle.net = &net;
  bundle.moderateness = &mod;
  bundle.grid = &opts.grid;
  bundle.problem = &p;
  bundle.command = "scenario " + name;
  bundle.schedule_label = schedule_label(opts.schedule);
  bundle.seed = opts.seed;
  export_reports(bundle, opts.out_dir);
}

}  // namespace landau
