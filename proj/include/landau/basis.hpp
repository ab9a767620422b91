#pragma once

#include <complex>
#include <compare>
#include <functional>
#include <vector>

// Landau-level spectral basis on the plane: Laguerre polynomials, eigenvalues
// lambda_n = (2n+1)B, the two eigenfunction families, and a product quadrature
// rule (Gauss-Laguerre in r, trapezoid in theta) matched to integrands of the
// form polynomial(r^2) * exp(-B r^2) * exp(i m theta).

namespace landau {

using complex = std::complex<double>;

struct BasisParams {
  double B = 1.0;  // magnetic strength, field strength 2B; must be > 0
};

// Mode index xi = (j, n) in N0^2. Ordering is lexicographic in (j, n); all
// deterministic reductions over mode sets use this order.
struct SpectralIndex {
  int j = 0;
  int n = 0;
  friend auto operator<=>(const SpectralIndex&, const SpectralIndex&) = default;
};

// Product rule: sum_i w_i F(r_i) ~ int_0^inf F(r) r dr for F = p(r^2) e^{-B r^2},
// exact when deg p <= 2*n_radial - 1 (in u = B r^2); uniform angular rule with
// angular_count nodes, exact for e^{i m theta} unless m % angular_count == 0.
class QuadratureGrid {
 public:
  static QuadratureGrid build(const BasisParams& params, int n_radial = 200,
                              int n_angular = 256);

  const std::vector<double>& radial_nodes() const { return nodes_; }
  const std::vector<double>& radial_weights() const { return weights_; }
  int angular_count() const { return n_angular_; }
  double B() const { return B_; }
  int max_radial_degree() const { return 2 * static_cast<int>(nodes_.size()) - 1; }

  // Full-plane integral of g(x, y) against this rule.
  complex integrate(const std::function<complex(double, double)>& g) const;

 private:
  std::vector<double> nodes_;    // r_i
  std::vector<double> weights_;  // w_i, absorbs e^{+u_i}/(2B)
  int n_angular_ = 0;
  double B_ = 0.0;
};

// Associated Laguerre polynomial L_n^{(alpha)}(t), alpha > -1.
// Dispatches between the explicit alternating sum (n <= 12) and the
// three-term recurrence (n > 12); both are exposed for cross-validation.
double laguerre_eval(int n, double alpha, double t);
double laguerre_eval_series(int n, double alpha, double t);
double laguerre_eval_recurrence(int n, double alpha, double t);

// Euclidean Landau levels lambda_n = (2n+1) B.
double eigenvalue(int n, const BasisParams& params);

// nu^2(xi) = B (1 + 2 xi.n); depends on xi only through n.
double nu_squared(const SpectralIndex& xi, const BasisParams& params);

// Unnormalized eigenfunction value. Component 1 carries (x+iy)^j, component 2
// carries (x-iy)^n; both include the factorial prefactor (replaced by 1 for
// component 1 when j > n, where it is undefined) and the Gaussian factor.
// Constant B-powers are dropped; downstream use is always self-normalized.
complex basis_eval_raw(int component, const SpectralIndex& xi,
                       const BasisParams& params, double x, double y);

// L2(R^2) norm of basis_eval_raw by quadrature.
double basis_norm(int component, const SpectralIndex& xi,
                  const BasisParams& params, const QuadratureGrid& grid);

// Unit-normalized eigenfunction basis_eval_raw / basis_norm.
complex basis_eval(int component, const SpectralIndex& xi,
                   const BasisParams& params, double x, double y,
                   const QuadratureGrid& grid);

// Relative residual ||H e - lambda e|| / ||e|| with H applied by second-order
// central finite differences of spacing stencil_h, sampled on grid nodes where
// the Gaussian envelope exceeds 1e-12. Diagnostic: large values are reported,
// not thrown.
double eigen_residual(int component, const SpectralIndex& xi,
                      const BasisParams& params, const QuadratureGrid& grid,
                      double stencil_h);

// Samples of one (possibly normalized) eigenfunction on all grid points,
// radial-major: index i * angular_count + k at (r_i, theta_k). Shared by the
// transform layer and the Gram-matrix tests.
std::vector<complex> sample_basis(int component, const SpectralIndex& xi,
                                  const BasisParams& params,
                                  const QuadratureGrid& grid, bool normalized);

// Weighted inner product <f, g> = int f conj(g) of two sample vectors.
complex sampled_inner_product(const std::vector<complex>& f,
                              const std::vector<complex>& g,
                              const QuadratureGrid& grid);

}  // namespace landau
