#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "landau/fourier.hpp"
#include "landau/mode_solver.hpp"

// Full Cauchy problems over a truncated spectral set: classical solves for
// regular coefficients and regularised solves u_eps for distributional ones.
// The per-mode equations decouple exactly, so assembly is a per-mode loop.

namespace landau {

// Forcing of one (mode, component): amplitude * exp(i frequency t), optionally
// shaped by a real time envelope (which may carry deltas; those are
// regularised alongside the coefficients in regularised solves).
struct ModeForcingSpec {
  complex amplitude{0.0, 0.0};
  double frequency = 0.0;
  std::optional<TimeDistribution> envelope;
};

using ForcingKey = std::pair<SpectralIndex, int>;  // (xi, component)

struct CauchyProblem {
  Variant variant = Variant::CPa;
  BasisParams params{};
  double T = 1.0;
  TimeDistribution a;  // must carry lower_bound a0 > 0
  TimeDistribution q;  // must carry lower_bound >= 0 (positivity)
  std::map<ForcingKey, ModeForcingSpec> forcing;
  SpectralField u0;
  SpectralField u1;
  double s = 0.0;
  TruncationSpec trunc{};

  void validate() const;
  bool classical_regime() const;  // no deltas anywhere
};

struct Solution {
  std::vector<double> times;
  std::vector<SpectralField> u;   // one field per time
  std::vector<SpectralField> du;  // time derivative per time
  std::map<ForcingKey, EnergyTrace> traces;
  std::vector<std::string> warnings;
  // Coefficient values at the output times (the regularised ones for nets);
  // used by the equation-based second-derivative diagnostics.
  std::vector<double> a_values;
  std::vector<double> q_values;
  // Fraction of spectral mass sitting in the top shell n = n_max, maximised
  // over output times; a truncation diagnostic, not an error bound.
  double top_shell_fraction = 0.0;
  long total_accepted_steps = 0;
  long total_rejected_steps = 0;
};

// Uniform output grid of `count` times on [0, T].
std::vector<double> uniform_times(double T, int count = 201);

// Classical solve (Thm-2.1 regime): coefficients must be delta-free.
Solution solve_classical(const CauchyProblem& p, const IntegratorConfig& cfg,
                         std::span<const double> out_times);

// Regularised solve: a, q (and delta-carrying forcing envelopes) are replaced
// by their mollifications of width omega(eps); data enter exactly.
Solution solve_regularized(const CauchyProblem& p, const MollifierSpec& psi,
                           const OmegaSchedule& schedule, double eps,
                           const IntegratorConfig& cfg,
                           std::span<const double> out_times);

struct NormTrace {
  std::vector<double> t;
  std::vector<double> u_norm;   // ||u(t)||_{H^{1+s}}
  std::vector<double> du_norm;  // ||du(t)||_{H^s}
};

NormTrace solution_norms(const Solution& sol, double s);

struct EstimateReport {
  bool passed = false;
  double measured_C = 0.0;
  double bound = 0.0;
};

// Checks the a-priori estimate: max_t (||u||_{H^{1+s}}^2 + ||du||_{H^s}^2)
// against C * (||u0||^2 + ||u1||^2 [+ sup_t ||f||_{H^s}^2]) with C derived
// from the Gronwall constants of the problem (10% slack).
EstimateReport estimate_check(const Solution& sol, const CauchyProblem& p);

// CSV exports. Solution schema: t,j,n,component,re_u,im_u,re_du,im_du.
// Norm schema: t,h_norm_1plus_s,h_norm_s.
void write_solution_csv(const Solution& sol, std::ostream& out);
void write_norms_csv(const NormTrace& norms, std::ostream& out);

}  // namespace landau
