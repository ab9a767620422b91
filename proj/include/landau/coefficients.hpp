#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

// Distributional time coefficients a(t), q(t) as piecewise polynomials plus
// Dirac deltas, Friedrichs mollifiers, epsilon schedules omega(eps), and the
// regularised nets a_eps = a * psi_{omega(eps)}.

namespace landau {

// One polynomial piece, coefficients in global t: value = sum c_k t^k.
struct PolySegment {
  double t_start = 0.0;
  double t_end = 0.0;
  std::vector<double> coeffs;

  double value(double t) const;
  double derivative(double t) const;
};

struct DiracDelta {
  double location = 0.0;
  double weight = 0.0;
};

class TimeDistribution {
 public:
  // Segments must tile [0, horizon] contiguously with strictly increasing
  // breakpoints (an empty list means the smooth part is identically zero);
  // delta locations must lie in the open interval (0, horizon). When
  // lower_bound is set, every segment is checked against it on a dense sample
  // and all delta weights must be nonnegative.
  static TimeDistribution piecewise(std::vector<PolySegment> segments,
                                    std::vector<DiracDelta> deltas,
                                    std::optional<double> lower_bound,
                                    double horizon);

  static TimeDistribution constant(double value, double horizon,
                                   std::optional<double> lower_bound = {});

  // Piecewise-Chebyshev interpolation of a smooth function, converted to
  // monomial segments; machine precision for the coefficient profiles used
  // here (degree <= 16, horizon of a few units).
  static TimeDistribution from_function(const std::function<double(double)>& fn,
                                        double horizon, int n_segments,
                                        int degree,
                                        std::optional<double> lower_bound = {});

  double smooth_value(double t) const;
  double smooth_derivative(double t) const;

  const std::vector<PolySegment>& segments() const { return segments_; }
  const std::vector<DiracDelta>& deltas() const { return deltas_; }
  bool has_deltas() const { return !deltas_.empty(); }
  std::optional<double> lower_bound() const { return lower_bound_; }
  double horizon() const { return horizon_; }

  // Segment boundaries strictly inside (0, horizon): the value or one of its
  // derivatives may jump there.
  std::vector<double> interior_breakpoints() const;

 private:
  std::vector<PolySegment> segments_;
  std::vector<DiracDelta> deltas_;
  std::optional<double> lower_bound_;
  double horizon_ = 0.0;
};

// Friedrichs mollifier: nonnegative, C_0^inf, unit integral, supported in
// [-1, 1]. The shifted variant recentres the bump inside the support so the
// kernel is asymmetric (used by the uniqueness experiments).
class MollifierSpec {
 public:
  static MollifierSpec standard_bump();
  static MollifierSpec shifted_bump(double offset);  // |offset| < 1

  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  double normalization() const { return normalization_; }
  double offset() const { return offset_; }
  bool is_shifted() const { return shifted_; }

 private:
  double lo_ = -1.0, hi_ = 1.0;
  double normalization_ = 0.0;
  double offset_ = 0.0;
  double half_width_ = 1.0;
  bool shifted_ = false;

  friend double mollifier_eval(const MollifierSpec&, double);
  friend double mollifier_derivative(const MollifierSpec&, double);
};

double mollifier_eval(const MollifierSpec& psi, double t);
double mollifier_derivative(const MollifierSpec& psi, double t);
// Psi(t) = int_{-inf}^t psi; 0 below the support, 1 above it, monotone.
double mollifier_antiderivative(const MollifierSpec& psi, double t);

struct OmegaSchedule {
  enum class Kind { log, power, constant_for_test };
  Kind kind = Kind::log;
  double p = 1.0;      // exponent for power schedules
  double value = 0.1;  // fixed width for constant_for_test

  static OmegaSchedule log_schedule() { return {Kind::log, 1.0, 0.0}; }
  static OmegaSchedule power(double p) { return {Kind::power, p, 0.0}; }
  static OmegaSchedule constant(double w) {
    return {Kind::constant_for_test, 1.0, w};
  }
};

// omega(eps): 1/log(1/eps) for the log schedule, eps^p for power. Values above
// 1 are legal (callers surface a warning). Requires 0 < eps < 1.
double omega(const OmegaSchedule& schedule, double eps);

// Smooth net a_eps = a * psi_w: delta terms convolve in closed form, the
// piecewise part by Gauss-Legendre panels split at breakpoint crossings, with
// the smooth part extended constantly outside [0, horizon].
class RegularizedCoefficient {
 public:
  RegularizedCoefficient(TimeDistribution source, MollifierSpec psi, double w);

  double value(double t) const;
  double derivative(double t) const;

  const TimeDistribution& source() const { return source_; }
  const MollifierSpec& mollifier() const { return psi_; }
  double width() const { return w_; }

 private:
  TimeDistribution source_;
  MollifierSpec psi_;
  double w_;
  std::vector<double> cuts_;  // extension boundaries + interior breakpoints
  std::optional<double> constant_smooth_;  // exact value when the smooth part is constant
};

RegularizedCoefficient regularize(const TimeDistribution& dist,
                                  const MollifierSpec& psi, double w);

// True iff value(t) >= a0 (up to a 1e-9 relative slack) at every sample; with
// constant extension the boundary-mass correction is zero.
bool verify_lower_bound(const RegularizedCoefficient& reg, double a0,
                        std::span<const double> t_samples);

struct ModeratenessFit {
  struct PerOrder {
    int k = 0;
    double exponent = 0.0;  // fitted L_k: sup |d^k a_eps| ~ omega^{-L_k}
    double residual = 0.0;  // rms residual of the log-log fit
  };
  std::vector<PerOrder> orders;
};

// Fits log sup_t |d^k a_eps(t)| against log(1/omega(eps)) for k = 0..k_max
// (k_max <= 1; higher t-derivatives are never formed directly). Constant
// profiles fit slope 0.
ModeratenessFit moderateness_bound_estimate(const TimeDistribution& dist,
                                            const MollifierSpec& psi,
                                            const OmegaSchedule& schedule,
                                            std::span<const double> eps_grid,
                                            int k_max);

namespace detail {
// Composite Gauss-Legendre integration; shared by the mollifier machinery.
double gauss_legendre(const std::function<double(double)>& f, double a,
                      double b, int panels);
}  // namespace detail

}  // namespace landau
