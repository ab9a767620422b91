#pragma once

#include <optional>
#include <string>
#include <vector>

#include "landau/cauchy.hpp"

// Experiment driver: solution nets over an epsilon grid, moderateness
// exponents, consistency against classical solutions, and mollifier-stability
// (uniqueness proxy) reports, plus the preset scenarios and file exports.

namespace landau {

struct EpsilonGrid {
  std::vector<double> values;  // strictly decreasing, all in (0, 1)

  // {2^-k : k = k_min..k_max}; the default experiment grid is dyadic(2, 12).
  static EpsilonGrid dyadic(int k_min, int k_max);
  void validate() const;
};

struct NetDiagnostics {
  std::vector<double> eps;
  // Grid suprema over the output times, per epsilon: k = 0 is the H^{1+s}
  // norm of u, k = 1 the H^s norm of du, k = 2 the H^{s-1} norm of d2u
  // computed from the equation d2u = -a_eps (H + q_eps) u (CPa form).
  std::vector<double> sup_k0;
  std::vector<double> sup_k1;
  std::vector<double> sup_k2;
  std::vector<bool> solved;
  std::vector<std::string> failures;  // one message per failed epsilon
};

struct ModeratenessReport {
  struct PerOrder {
    int k = 0;
    double exponent = 0.0;  // fitted N_k: sup-norm ~ eps^{-N_k}
    double residual = 0.0;
    double half_slope_gap = 0.0;
    bool pass = false;  // finite slope, stable across grid halves (< 0.5)
  };
  std::vector<PerOrder> orders;
  bool pass = false;
};

struct ConsistencyReport {
  std::vector<double> eps;
  std::vector<double> errors;  // sup_t ||u_eps - u_cl||_{H^{1+s}} + ||du_eps - du_cl||_{H^s}
  int inversions = 0;
  double final_over_initial = 0.0;
  double ratio_threshold = 0.2;
  bool consistent = false;
  bool at_noise_floor = false;  // every error below 1e-10: already converged
};

struct NegligibilityReport {
  std::vector<double> eps;
  std::vector<double> differences;  // sup_t difference norm between the two nets
  int inversions = 0;
  bool decreasing = false;
  bool at_noise_floor = false;
};

struct NetResult {
  std::vector<std::optional<Solution>> solutions;  // aligned with grid order
  NetDiagnostics diagnostics;
};

// One solve_regularized per epsilon; a failed epsilon is recorded, and the net
// as a whole throws only when more than half the grid fails.
NetResult run_net(const CauchyProblem& p, const MollifierSpec& psi,
                  const OmegaSchedule& schedule, const EpsilonGrid& grid,
                  const IntegratorConfig& cfg);

// Least-squares slope of log sup-norm against log(1/eps) per derivative
// order; pass requires the slopes fitted on the two grid halves to agree
// within 0.5. Constant profiles are moderate with exponent 0.
ModeratenessReport fit_moderateness(const NetDiagnostics& diag);

ConsistencyReport check_consistency(const CauchyProblem& p_regular,
                                    const MollifierSpec& psi,
                                    const OmegaSchedule& schedule,
                                    const EpsilonGrid& grid,
                                    const IntegratorConfig& cfg);

NegligibilityReport check_uniqueness_stability(const CauchyProblem& p,
                                               const MollifierSpec& psi_a,
                                               const MollifierSpec& psi_b,
                                               const OmegaSchedule& schedule,
                                               const EpsilonGrid& grid,
                                               const IntegratorConfig& cfg);

// Presets: "ex1" (a = 1 + delta_1, q = delta_1 -- the printed a = delta_1
// violates the standing bound a >= a0 > 0, so the unit background is added),
// "ex2" (a = unit jump 1 -> 2 at t = 1, q = delta_1 + the same jump),
// "regular" (a = 2 + sin t, q = 1 + t), "inhomogeneous" (constant
// coefficients, sinusoidal single-mode source). All use T = 2, B = 1, s = 0,
// data u0 = mode (0,0) component 1, u1 = 0.
CauchyProblem scenario(const std::string& name);

struct ExportBundle {
  const NetResult* net = nullptr;
  const ModeratenessReport* moderateness = nullptr;
  const ConsistencyReport* consistency = nullptr;
  const NegligibilityReport* negligibility = nullptr;
  const Solution* classical_solution = nullptr;
  const EpsilonGrid* grid = nullptr;
  const CauchyProblem* problem = nullptr;
  std::string command;
  std::string schedule_label;
  long seed = 0;
};

// Writes norms.csv, net_diagnostics.csv and summary.json under out_dir.
// Output is byte-deterministic for fixed inputs (no wall-clock content).
void export_reports(const ExportBundle& bundle, const std::string& out_dir);

// Command-level runners shared by the CLI and the acceptance suite.
struct RunOptions {
  std::string out_dir = ".";
  EpsilonGrid grid = EpsilonGrid::dyadic(2, 12);
  OmegaSchedule schedule = OmegaSchedule::log_schedule();
  double rel_tol = 1e-10;
  std::optional<TruncationSpec> truncation_override;
  int out_time_count = 201;
  long seed = 0;
};

void run_solve_command(const CauchyProblem& p, const RunOptions& opts);
void run_net_command(const CauchyProblem& p, const RunOptions& opts);
void run_consistency_command(const CauchyProblem& p, const RunOptions& opts);
void run_uniqueness_command(const CauchyProblem& p, const RunOptions& opts);
void run_scenario_command(const std::string& name, const RunOptions& opts);

}  // namespace landau
