#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "landau/fourier.hpp"

using namespace landau;

namespace {

const BasisParams kParams{1.0};

PhysicalField field_from_modes(
    const std::vector<std::tuple<SpectralIndex, complex>>& modes,
    const QuadratureGrid& grid) {
  return PhysicalField{[modes, &grid](double x, double y) {
    complex v = 0.0;
    for (const auto& [xi, c] : modes) {
      v += c * basis_eval_raw(1, xi, kParams, x, y) /
           cached_basis_norm(1, xi, kParams, grid);
    }
    return v;
  }};
}

SpectralField random_band_limited(std::mt19937& rng, int j_max, int n_max) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  SpectralField f(kParams, TruncationSpec{j_max, n_max, true, false});
  for (int j = 0; j <= j_max; ++j) {
    for (int n = 0; n <= n_max; ++n) {
      f.set({j, n}, 1, complex(unit(rng), unit(rng)));
    }
  }
  return f;
}

}  // namespace

TEST_CASE("forward transform recovers orthonormal coefficients") {
  const auto& grid = default_grid(kParams);
  const TruncationSpec trunc{2, 2, true, false};

  SUBCASE("single basis function") {
    const auto f = field_from_modes({{{0, 0}, 1.0}}, grid);
    const SpectralField fh = forward_transform(f, trunc, kParams, grid);
    CHECK(std::abs(fh.get({0, 0}, 1) - 1.0) < 1e-6);
    for (int j = 0; j <= 2; ++j) {
      for (int n = 0; n <= 2; ++n) {
        if (j == 0 && n == 0) continue;
        CHECK(std::abs(fh.get({j, n}, 1)) < 1e-6);
      }
    }
  }
  SUBCASE("linear combination") {
    const auto f = field_from_modes({{{1, 2}, 2.0}, {{0, 1}, complex(0.0, 1.0)}},
                                    grid);
    const SpectralField fh = forward_transform(f, trunc, kParams, grid);
    CHECK(std::abs(fh.get({1, 2}, 1) - 2.0) < 1e-6);
    CHECK(std::abs(fh.get({0, 1}, 1) - complex(0.0, 1.0)) < 1e-6);
  }
  SUBCASE("zero field") {
    const SpectralField fh = forward_transform(
        PhysicalField{[](double, double) { return complex{0.0, 0.0}; }}, trunc,
        kParams, grid);
    CHECK(plancherel_norm(fh) == 0.0);
  }
}

TEST_CASE("inverse transform evaluates the expansion") {
  SpectralField fh(kParams, {0, 0, true, false});
  fh.set({0, 0}, 1, 1.0);
  CHECK(std::abs(inverse_transform(fh, 0.0, 0.0) -
                 complex(1.0 / std::sqrt(M_PI), 0.0)) < 1e-10);
  const SpectralField zero(kParams, {0, 0, true, false});
  CHECK(inverse_transform(zero, 0.3, -0.2) == complex{0.0, 0.0});
}

TEST_CASE("round trip and Plancherel on random band-limited fields") {
  const auto& grid = default_grid(kParams);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 3; ++trial) {
    const SpectralField fh = random_band_limited(rng, 3, 3);
    const PhysicalField f{[&fh](double x, double y) {
      return inverse_transform(fh, x, y);
    }};
    const SpectralField back = forward_transform(f, fh.truncation(), kParams, grid);
    for (const auto& [xi, mc] : fh.coefficients()) {
      CHECK(std::abs(back.get(xi, 1) - mc.c1) < 1e-6);
    }
    // Plancherel: coefficient norm equals the quadrature L2 norm.
    const complex l2 = grid.integrate([&f](double x, double y) {
      const complex v = f.eval(x, y);
      return v * std::conj(v);
    });
    CHECK(std::abs(std::sqrt(l2.real()) - plancherel_norm(fh)) < 1e-6);
  }
}

TEST_CASE("pointwise round trip on a band-limited function") {
  const auto& grid = default_grid(kParams);
  const auto f = field_from_modes(
      {{{0, 0}, complex(0.5, 0.0)}, {{2, 1}, complex(-1.0, 0.3)}, {{1, 3}, 2.0}},
      grid);
  const SpectralField fh = forward_transform(f, {4, 4, true, false}, kParams, grid);
  for (auto [x, y] : {std::pair{0.0, 0.0}, {0.7, -0.4}, {1.5, 1.1}}) {
    CHECK(std::abs(inverse_transform(fh, x, y) - f.eval(x, y)) < 1e-6);
  }
}

TEST_CASE("transform is linear") {
  const auto& grid = default_grid(kParams);
  const TruncationSpec trunc{1, 1, true, false};
  const PhysicalField f{[](double x, double y) {
    return complex(std::exp(-0.5 * (x * x + y * y)), 0.0);
  }};
  const PhysicalField g{[](double x, double y) {
    return complex(x * std::exp(-0.6 * (x * x + y * y)), 0.1);
  }};
  const complex alpha(2.0, -1.0), beta(0.5, 0.25);
  const PhysicalField combo{[&](double x, double y) {
    return alpha * f.eval(x, y) + beta * g.eval(x, y);
  }};
  const auto fh = forward_transform(f, trunc, kParams, grid);
  const auto gh = forward_transform(g, trunc, kParams, grid);
  const auto ch = forward_transform(combo, trunc, kParams, grid);
  for (int j = 0; j <= 1; ++j) {
    for (int n = 0; n <= 1; ++n) {
      const complex want = alpha * fh.get({j, n}, 1) + beta * gh.get({j, n}, 1);
      CHECK(std::abs(ch.get({j, n}, 1) - want) < 1e-10);
    }
  }
}

TEST_CASE("plancherel norm basics") {
  SpectralField fh(kParams, {0, 0, true, false});
  fh.set({0, 0}, 1, 3.0);
  CHECK(plancherel_norm(fh) == doctest::Approx(3.0));
  CHECK(plancherel_norm(SpectralField(kParams, {0, 0, true, false})) == 0.0);
}

TEST_CASE("sobolev norm weights (B + 2Bn)^s") {
  SpectralField fh(kParams, {0, 2, true, false});
  fh.set({0, 0}, 1, 1.0);
  CHECK(sobolev_norm(fh, 2.0) == doctest::Approx(1.0));
  CHECK(sobolev_norm(fh, -3.7) == doctest::Approx(1.0));

  SpectralField g(kParams, {0, 2, true, false});
  g.set({0, 2}, 1, 1.0);
  CHECK(sobolev_norm(g, 2.0) == doctest::Approx(5.0));  // weight 25, sqrt

  std::mt19937 rng(3);
  const SpectralField h = random_band_limited(rng, 2, 2);
  CHECK(sobolev_norm(h, 0.0) == doctest::Approx(plancherel_norm(h)));
  // Monotone in s when all weights >= 1 (B = 1).
  CHECK(sobolev_norm(h, 1.0) <= sobolev_norm(h, 2.0));
  CHECK(sobolev_norm(h, 0.0) <= sobolev_norm(h, 1.0));
}

TEST_CASE("hs_apply is the diagonal multiplier") {
  std::mt19937 rng(11);
  const SpectralField f = random_band_limited(rng, 2, 3);
  SUBCASE("s = 0 is the identity") {
    const SpectralField g = hs_apply(f, 0.0);
    for (const auto& [xi, mc] : f.coefficients()) {
      CHECK(g.get(xi, 1) == mc.c1);
    }
  }
  SUBCASE("inverse multiplier round trip") {
    const SpectralField g = hs_apply(hs_apply(f, 1.7), -1.7);
    for (const auto& [xi, mc] : f.coefficients()) {
      CHECK(std::abs(g.get(xi, 1) - mc.c1) <= 4e-16 * std::abs(mc.c1));
    }
  }
  SUBCASE("plancherel of hs_apply equals sobolev norm") {
    CHECK(plancherel_norm(hs_apply(f, 2.4)) ==
          doctest::Approx(sobolev_norm(f, 2.4)).epsilon(1e-13));
  }
}

TEST_CASE("decay profile slope") {
  SUBCASE("exact power law") {
    SpectralField f(kParams, {0, 6, true, false});
    for (int n = 0; n <= 6; ++n) {
      const double xi_mag = std::sqrt(2.0 * n + 1.0);
      f.set({0, n}, 1, std::pow(xi_mag, -4.0));
    }
    const DecayFit fit = decay_profile(f);
    CHECK(fit.slope == doctest::Approx(-4.0).epsilon(1e-8));
  }
  SUBCASE("constant coefficients") {
    SpectralField f(kParams, {0, 4, true, false});
    for (int n = 0; n <= 4; ++n) f.set({0, n}, 1, 0.7);
    CHECK(std::abs(decay_profile(f).slope) < 1e-8);
  }
  SUBCASE("single mode is degenerate") {
    SpectralField f(kParams, {0, 4, true, false});
    f.set({0, 1}, 1, 1.0);
    CHECK_THROWS_AS(decay_profile(f), std::invalid_argument);
  }
}

TEST_CASE("csv round trip is exact and deterministic") {
  std::mt19937 rng(5);
  const SpectralField f = random_band_limited(rng, 2, 2);
  std::ostringstream out1, out2;
  write_spectral_csv(f, out1);
  write_spectral_csv(f, out2);
  CHECK(out1.str() == out2.str());
  CHECK(out1.str().rfind("j,n,component,re,im\n", 0) == 0);

  std::istringstream in(out1.str());
  const SpectralField g = read_spectral_csv(in, kParams);
  for (const auto& [xi, mc] : f.coefficients()) {
    CHECK(g.get(xi, 1) == mc.c1);  // 17 significant digits round-trip doubles
  }
}

TEST_CASE("truncation is enforced on insertion") {
  SpectralField f(kParams, {1, 1, true, false});
  CHECK_THROWS_AS(f.set({2, 0}, 1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(f.set({0, 0}, 2, 1.0), std::invalid_argument);
}

TEST_CASE("forward transform refuses an unresolvable truncation") {
  const auto tiny = QuadratureGrid::build(kParams, 4, 16);
  const PhysicalField f{[](double, double) { return complex{0.0, 0.0}; }};
  CHECK_THROWS_AS(forward_transform(f, {4, 4, true, false}, kParams, tiny),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      forward_transform(f, {1, 1, false, false}, kParams, default_grid(kParams)),
      std::invalid_argument);
}
