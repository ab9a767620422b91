#include "landau/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace landau {

namespace {

struct NormKey {
  double B;
  int component;
  int j, n;
  int n_radial, n_angular;
  friend auto operator<=>(const NormKey&, const NormKey&) = default;
};

std::mutex cache_mutex;

}  // namespace

double cached_basis_norm(int component, const SpectralIndex& xi,
                         const BasisParams& params,
                         const QuadratureGrid& grid) {
  static std::map<NormKey, double> cache;
  const NormKey key{params.B, component, xi.j, xi.n,
                    static_cast<int>(grid.radial_nodes().size()),
                    grid.angular_count()};
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const double norm = basis_norm(component, xi, params, grid);
  std::lock_guard<std::mutex> lock(cache_mutex);
  return cache.emplace(key, norm).first->second;
}

const QuadratureGrid& default_grid(const BasisParams& params) {
  static std::map<double, QuadratureGrid> grids;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = grids.find(params.B);
  if (it == grids.end()) {
    it = grids.emplace(params.B, QuadratureGrid::build(params)).first;
  }
  return it->second;
}

void SpectralField::set(const SpectralIndex& xi, int component, complex value) {
  if (!trunc_.contains(xi)) {
    throw std::invalid_argument("SpectralField: index outside truncation");
  }
  if (component == 1) {
    if (!trunc_.use_c1) throw std::invalid_argument("SpectralField: component 1 disabled");
    coeffs_[xi].c1 = value;
  } else if (component == 2) {
    if (!trunc_.use_c2) throw std::invalid_argument("SpectralField: component 2 disabled");
    coeffs_[xi].c2 = value;
  } else {
    throw std::invalid_argument("SpectralField: component must be 1 or 2");
  }
}

complex SpectralField::get(const SpectralIndex& xi, int component) const {
  auto it = coeffs_.find(xi);
  if (it == coeffs_.end()) return {0.0, 0.0};
  return component == 1 ? it->second.c1 : it->second.c2;
}

SpectralField forward_transform(const PhysicalField& f,
                                const TruncationSpec& trunc,
                                const BasisParams& params,
                                const QuadratureGrid& grid) {
  if (!trunc.use_c1 && !trunc.use_c2) {
    throw std::invalid_argument("forward_transform: empty component set");
  }
  if (2 * (trunc.n_max + trunc.j_max) + 2 > grid.max_radial_degree()) {
    throw std::invalid_argument(
        "forward_transform: truncation degree exceeds grid resolution");
  }
  // Sample f once on the grid, then take weighted dots against each mode.
  const auto& rs = grid.radial_nodes();
  const int m = grid.angular_count();
  const double dtheta = 2.0 * M_PI / m;
  std::vector<complex> fs(rs.size() * m);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    for (int k = 0; k < m; ++k) {
      const double theta = dtheta * k;
      fs[i * m + k] = f.eval(rs[i] * std::cos(theta), rs[i] * std::sin(theta));
    }
  }
  SpectralField out(params, trunc);
  for (int j = 0; j <= trunc.j_max; ++j) {
    for (int n = 0; n <= trunc.n_max; ++n) {
      const SpectralIndex xi{j, n};
      for (int comp : {1, 2}) {
        if ((comp == 1 && !trunc.use_c1) || (comp == 2 && !trunc.use_c2)) continue;
        const auto es = sample_basis(comp, xi, params, grid, false);
        const double norm = cached_basis_norm(comp, xi, params, grid);
        const complex c = sampled_inner_product(fs, es, grid) / norm;
        if (c != complex{0.0, 0.0}) out.set(xi, comp, c);
      }
    }
  }
  return out;
}

complex inverse_transform(const SpectralField& fh, double x, double y,
                          const QuadratureGrid& grid) {
  complex total = 0.0;
  for (const auto& [xi, mc] : fh.coefficients()) {
    if (mc.c1 != complex{0.0, 0.0}) {
      total += mc.c1 * basis_eval_raw(1, xi, fh.params(), x, y) /
               cached_basis_norm(1, xi, fh.params(), grid);
    }
    if (mc.c2 != complex{0.0, 0.0}) {
      total += mc.c2 * basis_eval_raw(2, xi, fh.params(), x, y) /
               cached_basis_norm(2, xi, fh.params(), grid);
    }
  }
  return total;
}

complex inverse_transform(const SpectralField& fh, double x, double y) {
  return inverse_transform(fh, x, y, default_grid(fh.params()));
}

double plancherel_norm(const SpectralField& fh) {
  double sum = 0.0;
  for (const auto& [xi, mc] : fh.coefficients()) {
    sum += std::norm(mc.c1) + std::norm(mc.c2);
  }
  return std::sqrt(sum);
}

double sobolev_norm(const SpectralField& fh, double s) {
  const double B = fh.params().B;
  double sum = 0.0;
  for (const auto& [xi, mc] : fh.coefficients()) {
    const double w = std::pow(B * (1.0 + 2.0 * xi.n), s);
    sum += w * (std::norm(mc.c1) + std::norm(mc.c2));
  }
  return std::sqrt(sum);
}

namespace {

// s >= 0 and s < 0 multipliers are exact reciprocals, so hs_apply(., s)
// followed by hs_apply(., -s) inverts up to one rounding per entry.
double hs_multiplier(double weight, double s) {
  if (s >= 0.0) return std::pow(weight, 0.5 * s);
  return 1.0 / std::pow(weight, -0.5 * s);
}

}  // namespace

SpectralField hs_apply(const SpectralField& fh, double s) {
  SpectralField out(fh.params(), fh.truncation());
  const double B = fh.params().B;
  for (const auto& [xi, mc] : fh.coefficients()) {
    const double mult = hs_multiplier(B * (1.0 + 2.0 * xi.n), s);
    if (mc.c1 != complex{0.0, 0.0}) out.set(xi, 1, mc.c1 * mult);
    if (mc.c2 != complex{0.0, 0.0}) out.set(xi, 2, mc.c2 * mult);
  }
  return out;
}

DecayFit decay_profile(const SpectralField& fh) {
  const double B = fh.params().B;
  std::map<int, double> shell_max;  // n -> max coefficient magnitude
  for (const auto& [xi, mc] : fh.coefficients()) {
    const double mag = std::max(std::abs(mc.c1), std::abs(mc.c2));
    if (mag > 0.0) {
      auto [it, inserted] = shell_max.emplace(xi.n, mag);
      if (!inserted) it->second = std::max(it->second, mag);
    }
  }
  if (shell_max.size() < 3) {
    throw std::invalid_argument(
        "decay_profile: needs at least 3 populated shells");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double count = static_cast<double>(shell_max.size());
  for (const auto& [n, mag] : shell_max) {
    const double x = 0.5 * std::log((2.0 * n + 1.0) * B);
    const double y = std::log(mag);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = count * sxx - sx * sx;
  DecayFit fit;
  fit.slope = (count * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / count;
  return fit;
}

void write_spectral_csv(const SpectralField& fh, std::ostream& out) {
  out << "j,n,component,re,im\n";
  char buf[128];
  for (const auto& [xi, mc] : fh.coefficients()) {
    if (mc.c1 != complex{0.0, 0.0}) {
      std::snprintf(buf, sizeof(buf), "%d,%d,1,%.17g,%.17g\n", xi.j, xi.n,
                    mc.c1.real(), mc.c1.imag());
      out << buf;
    }
    if (mc.c2 != complex{0.0, 0.0}) {
      std::snprintf(buf, sizeof(buf), "%d,%d,2,%.17g,%.17g\n", xi.j, xi.n,
                    mc.c2.real(), mc.c2.imag());
      out << buf;
    }
  }
}

SpectralField read_spectral_csv(std::istream& in, const BasisParams& params) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("j,n,component", 0) != 0) {
    throw std::runtime_error("read_spectral_csv: missing header");
  }
  struct Row {
    SpectralIndex xi;
    int comp;
    complex value;
  };
  std::vector<Row> rows;
  int j_max = 0, n_max = 0;
  bool any_c2 = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    Row row;
    char comma;
    double re, im;
    if (!(ss >> row.xi.j >> comma >> row.xi.n >> comma >> row.comp >> comma >>
          re >> comma >> im)) {
      throw std::runtime_error("read_spectral_csv: malformed row: " + line);
    }
    row.value = complex(re, im);
    j_max = std::max(j_max, row.xi.j);
    n_max = std::max(n_max, row.xi.n);
    any_c2 |= (row.comp == 2);
    rows.push_back(row);
  }
  TruncationSpec trunc{j_max, n_max, true, any_c2};
  SpectralField out(params, trunc);
  for (const auto& row : rows) out.set(row.xi, row.comp, row.value);
  return out;
}

}  // namespace landau
