#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "landau/basis.hpp"

// Forward/inverse expansion in the Landau eigenbasis over a truncated index
// set, with Plancherel and spectral Sobolev norms and coefficient-decay fits.

namespace landau {

struct TruncationSpec {
  int j_max = 0;
  int n_max = 0;
  bool use_c1 = true;   // component subset; must be nonempty
  bool use_c2 = false;  // physical-space layer defaults to component 1

  bool contains(const SpectralIndex& xi) const {
    return xi.j >= 0 && xi.n >= 0 && xi.j <= j_max && xi.n <= n_max;
  }
};

// Diagonal Fourier coefficient of one mode; off-diagonal entries of the
// matrix-valued coefficient are identically zero and never stored.
struct ModeCoefficient {
  complex c1{0.0, 0.0};
  complex c2{0.0, 0.0};
};

class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(BasisParams params, TruncationSpec trunc)
      : params_(params), trunc_(trunc) {}

  const BasisParams& params() const { return params_; }
  const TruncationSpec& truncation() const { return trunc_; }
  const std::map<SpectralIndex, ModeCoefficient>& coefficients() const {
    return coeffs_;
  }

  // Inserting outside the truncation violates the field invariant and throws.
  void set(const SpectralIndex& xi, int component, complex value);
  complex get(const SpectralIndex& xi, int component) const;
  bool empty() const { return coeffs_.empty(); }

 private:
  BasisParams params_{};
  TruncationSpec trunc_{};
  std::map<SpectralIndex, ModeCoefficient> coeffs_;
};

struct PhysicalField {
  std::function<complex(double, double)> eval;
};

// f_hat(xi)_cc = int f conj(e^c_xi) by quadrature, for every mode in the
// truncation and every enabled component.
SpectralField forward_transform(const PhysicalField& f,
                                const TruncationSpec& trunc,
                                const BasisParams& params,
                                const QuadratureGrid& grid);

// sum_xi [c1 e^1_xi + c2 e^2_xi](x, y), ascending index order.
complex inverse_transform(const SpectralField& fh, double x, double y);
complex inverse_transform(const SpectralField& fh, double x, double y,
                          const QuadratureGrid& grid);

// Hilbert-Schmidt (l2) norm of the coefficient family.
double plancherel_norm(const SpectralField& fh);

// (sum (B + 2 B n)^s (|c1|^2 + |c2|^2))^{1/2}.
double sobolev_norm(const SpectralField& fh, double s);

// Spectral multiplier (B + 2 B n)^{s/2} applied to every mode. The s and -s
// multipliers are exact reciprocals of each other.
SpectralField hs_apply(const SpectralField& fh, double s);

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Least-squares fit of log(max coefficient magnitude per shell) against
// log<xi>, <xi> = sqrt((2n+1)B); shells are indexed by n. Requires at least
// three populated shells.
DecayFit decay_profile(const SpectralField& fh);

// Default grid for the params (200 x 256), shared and cached per B.
const QuadratureGrid& default_grid(const BasisParams& params);

// Quadrature-normalized basis norm with a per-(grid, mode) cache; all
// transform paths use this so that self-normalization is consistent.
double cached_basis_norm(int component, const SpectralIndex& xi,
                         const BasisParams& params, const QuadratureGrid& grid);

// CSV schema: header `j,n,component,re,im`, one row per nonzero entry,
// ascending (j, n) then component, 17 significant digits, LF endings.
void write_spectral_csv(const SpectralField& fh, std::ostream& out);
SpectralField read_spectral_csv(std::istream& in, const BasisParams& params);

}  // namespace landau
