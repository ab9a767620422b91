#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "landau/basis.hpp"
#include "landau/coefficients.hpp"

// Per-mode scalar Cauchy problem d2v + a(t)(q(t) + nu^2) v = f(t) (variant
// CPa; CPb uses a(t) nu^2 + q(t)), integrated as the first-order system
// dV = i nu A(t) V + F(t) with V = (i nu v, dv), tracking the symmetriser
// energy E = s11 |V1|^2 + |V2|^2.

namespace landau {

enum class Variant { CPa, CPb };

// Time coefficient with derivative and known jump locations; built from a
// TimeDistribution (classical runs), a RegularizedCoefficient (nets), or any
// pair of callables (tests).
struct CoefficientFn {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::vector<double> breakpoints;

  static CoefficientFn constant(double c);
  static CoefficientFn from(const TimeDistribution& dist);
  static CoefficientFn from(const RegularizedCoefficient& reg);
};

struct ModeForcingFn {
  std::function<complex(double)> value;
  std::vector<double> breakpoints;
};

struct ModeODE {
  double nu2 = 1.0;
  CoefficientFn a;
  CoefficientFn q;
  Variant variant = Variant::CPa;
  std::optional<ModeForcingFn> forcing;

  // kappa(t): the A21 entry of the system matrix and the s11 symmetriser entry.
  double kappa(double t) const;
  double kappa_derivative(double t) const;
};

struct ModeState {
  complex V1{0.0, 0.0};  // i nu * v
  complex V2{0.0, 0.0};  // dv/dt
  double t = 0.0;

  complex v_hat(double nu) const { return V1 / complex(0.0, nu); }
  complex dv_hat() const { return V2; }
};

struct Symmetriser {
  double s11 = 1.0;  // s22 = 1
};

struct EnergyTrace {
  std::vector<std::pair<double, double>> samples;  // (t, E), t increasing
};

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  double max_step_fraction = 0.1;  // of the local oscillation period
};

struct SystemMatrices {
  double A[2][2];  // dV = i nu A V + F
  complex F2;      // F = (0, f_hat(t))
};

SystemMatrices assemble_system(const ModeODE& ode, double t);
Symmetriser symmetriser_eval(const ModeODE& ode, double t);
double energy(const ModeState& state, const Symmetriser& sym);

struct ModeSolveResult {
  std::vector<ModeState> states;  // at the requested output times
  EnergyTrace trace;              // at every accepted step
  long accepted_steps = 0;
  long rejected_steps = 0;
};

// Adaptive Dormand-Prince 5(4) on the real 4-dimensional form of the system,
// landing exactly on output times and coefficient breakpoints. Steps never
// exceed max_step_fraction of the local period 2 pi / (nu sqrt(kappa)).
// Throws on step-size underflow or persistent error-control failure.
ModeSolveResult integrate_mode(const ModeODE& ode, complex v0, complex v1,
                               std::span<const double> out_times,
                               const IntegratorConfig& cfg);

// Constant-coefficient oracle (CPa form, mu^2 = a0 (q0 + nu2)):
//   homogeneous  v(t) = v0 cos(mu t) + v1 sin(mu t) / mu,
//   forced       adds F0 e^{i sigma t} / (mu^2 - sigma^2) with matched data.
// Throws on resonance sigma^2 == mu^2.
complex closed_form_constant(
    double a0, double q0, double nu2, complex v0, complex v1, double t,
    std::optional<std::pair<complex, double>> forcing = {});
// Time derivative of the same closed form (for oracle comparisons of dv).
complex closed_form_constant_derivative(
    double a0, double q0, double nu2, complex v0, complex v1, double t,
    std::optional<std::pair<complex, double>> forcing = {});

// E(t) <= E(0) exp(int_0^t c'(s) ds) (1 + 1e-6) with the computable rate
// c'(s) = |d s11| / min(s11, 1); meaningful for homogeneous traces.
bool gronwall_bound_check(const EnergyTrace& trace, const ModeODE& ode);

struct ModeEstimate {
  bool passed = false;
  double measured_ratio = 0.0;
  double bound = 0.0;
};

// Checks nu^2 |v|^2 + |dv|^2 <= C (nu^2 |v0|^2 + |v1|^2) with C from the
// Gronwall constants; the Sobolev weight (nu^2)^s scales both sides alike.
ModeEstimate mode_estimate_check(const ModeODE& ode, complex v0, complex v1,
                                 std::span<const ModeState> out_states,
                                 double s);

}  // namespace landau
