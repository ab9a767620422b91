#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "landau/config_io.hpp"
#include "landau/harness.hpp"

using namespace landau;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

NetDiagnostics synthetic_diagnostics(const std::vector<double>& eps,
                                     double exponent, double scale) {
  NetDiagnostics d;
  d.eps = eps;
  for (double e : eps) {
    const double v = scale * std::pow(e, -exponent);
    d.sup_k0.push_back(v);
    d.sup_k1.push_back(v * 2.0);
    d.sup_k2.push_back(v * 3.0);
    d.solved.push_back(true);
  }
  return d;
}

}  // namespace

TEST_CASE("epsilon grid construction and validation") {
  const EpsilonGrid g = EpsilonGrid::dyadic(2, 12);
  CHECK(g.values.size() == 11);
  CHECK(g.values.front() == doctest::Approx(0.25));
  CHECK(g.values.back() == doctest::Approx(std::ldexp(1.0, -12)));
  g.validate();
  EpsilonGrid bad;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.values = {0.5, 0.5};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("moderateness fit recovers synthetic exponents") {
  const std::vector<double> eps{0.25, 0.125, 0.0625, 0.03125, 0.015625,
                                0.0078125, 0.00390625, 0.001953125};
  SUBCASE("exact power law") {
    const auto report = fit_moderateness(synthetic_diagnostics(eps, 2.0, 1.3));
    CHECK(report.orders[0].exponent == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(report.orders[1].exponent == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(report.orders[0].pass);
    CHECK(report.pass);
  }
  SUBCASE("constant diagnostics are moderate with exponent 0") {
    const auto report = fit_moderateness(synthetic_diagnostics(eps, 0.0, 4.2));
    CHECK(report.orders[0].exponent == 0.0);
    CHECK(report.orders[0].pass);
  }
  SUBCASE("needs at least four points") {
    const std::vector<double> short_eps{0.5, 0.25, 0.125};
    CHECK_THROWS_AS(fit_moderateness(synthetic_diagnostics(short_eps, 1.0, 1.0)),
                    std::invalid_argument);
  }
}

TEST_CASE("scenario presets") {
  SUBCASE("ex1 carries the unit background plus deltas") {
    const CauchyProblem p = scenario("ex1");
    CHECK(p.T == 2.0);
    CHECK(p.params.B == 1.0);
    CHECK(p.a.deltas().size() == 1);
    CHECK(p.a.smooth_value(0.5) == 1.0);
    CHECK(*p.a.lower_bound() == 1.0);
    CHECK(p.q.deltas().size() == 1);
    CHECK(p.u0.get({0, 0}, 1) == complex{1.0, 0.0});
  }
  SUBCASE("ex2 has the jump and the delta") {
    const CauchyProblem p = scenario("ex2");
    CHECK(p.a.smooth_value(0.5) == 1.0);
    CHECK(p.a.smooth_value(1.5) == 2.0);
    CHECK(p.a.deltas().empty());
    CHECK(p.q.smooth_value(1.5) == 2.0);
    CHECK(p.q.deltas().size() == 1);
    CHECK(p.q.deltas()[0].location == 1.0);
  }
  SUBCASE("regular is a classical-regime preset") {
    const CauchyProblem p = scenario("regular");
    CHECK(p.classical_regime());
    CHECK(p.a.smooth_value(1.0) == doctest::Approx(2.0 + std::sin(1.0)).epsilon(1e-12));
    CHECK(p.q.smooth_value(0.5) == doctest::Approx(1.5));
  }
  SUBCASE("inhomogeneous drives the ground mode off resonance") {
    const CauchyProblem p = scenario("inhomogeneous");
    CHECK(p.forcing.size() == 1);
    CHECK(p.classical_regime());
  }
  SUBCASE("unknown names are rejected") {
    CHECK_THROWS_AS(scenario("bogus"), std::invalid_argument);
  }
}

TEST_CASE("run_net produces finite diagnostics for a delta potential") {
  CauchyProblem p = scenario("ex1");
  p.a = TimeDistribution::constant(2.0, p.T, 2.0);  // a = 2, q = delta_1
  const EpsilonGrid grid = EpsilonGrid::dyadic(2, 6);
  IntegratorConfig cfg;
  cfg.rel_tol = cfg.abs_tol = 1e-8;
  const NetResult net =
      run_net(p, MollifierSpec::standard_bump(), OmegaSchedule::log_schedule(),
              grid, cfg);
  CHECK(net.diagnostics.failures.empty());
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    CHECK(net.diagnostics.solved[i]);
    CHECK(std::isfinite(net.diagnostics.sup_k0[i]));
    CHECK(std::isfinite(net.diagnostics.sup_k1[i]));
    CHECK(std::isfinite(net.diagnostics.sup_k2[i]));
  }
  const auto report = fit_moderateness(net.diagnostics);
  CHECK(std::isfinite(report.orders[0].exponent));
}

TEST_CASE("run_net rejects an empty grid") {
  const CauchyProblem p = scenario("ex1");
  EpsilonGrid empty;
  CHECK_THROWS_AS(run_net(p, MollifierSpec::standard_bump(),
                          OmegaSchedule::log_schedule(), empty, IntegratorConfig{}),
                  std::invalid_argument);
}

TEST_CASE("run_net gives up only when the majority of the grid fails") {
  const CauchyProblem p = scenario("ex1");
  IntegratorConfig bad;
  bad.rel_tol = bad.abs_tol = 0.5;  // rejected by every per-mode solve
  CHECK_THROWS_AS(run_net(p, MollifierSpec::standard_bump(),
                          OmegaSchedule::log_schedule(), EpsilonGrid::dyadic(2, 5),
                          bad),
                  std::runtime_error);
}

TEST_CASE("uniqueness report on a delta scenario is recorded, not asserted") {
  IntegratorConfig cfg;
  cfg.rel_tol = cfg.abs_tol = 1e-8;
  const NegligibilityReport rep = check_uniqueness_stability(
      scenario("ex1"), MollifierSpec::standard_bump(),
      MollifierSpec::shifted_bump(0.3), OmegaSchedule::log_schedule(),
      EpsilonGrid::dyadic(2, 5), cfg);
  CHECK(rep.differences.size() == 4);
  for (double d : rep.differences) CHECK(std::isfinite(d));
}

TEST_CASE("equation-based second derivative matches a finite difference") {
  // Solve with a refined triplet around t = 1 and difference du in time; the
  // equation-based value -a (q + nu^2) u must match to ~1e-6.
  CauchyProblem p = scenario("regular");
  const double t0 = 1.0, dt = 3e-4;
  const std::vector<double> times{0.0, t0 - dt, t0, t0 + dt, p.T};
  IntegratorConfig cfg;
  cfg.rel_tol = cfg.abs_tol = 1e-11;
  const Solution sol = solve_regularized(p, MollifierSpec::standard_bump(),
                                         OmegaSchedule::log_schedule(), 0.0625,
                                         cfg, times);
  const complex fd =
      (sol.du[3].get({0, 0}, 1) - sol.du[1].get({0, 0}, 1)) / (2.0 * dt);
  const double nu2 = 1.0;
  const complex eq = -sol.a_values[2] * (sol.q_values[2] + nu2) *
                     sol.u[2].get({0, 0}, 1);
  CHECK(std::abs(fd - eq) <= 1e-6 * std::max(1.0, std::abs(eq)));
}

TEST_CASE("consistency report on smooth coefficients") {
  const CauchyProblem p = scenario("regular");
  IntegratorConfig cfg;
  cfg.rel_tol = cfg.abs_tol = 1e-10;
  SUBCASE("constant coefficients sit at the noise floor") {
    CauchyProblem pc = p;
    pc.a = TimeDistribution::constant(1.0, p.T, 1.0);
    pc.q = TimeDistribution::constant(2.0, p.T, 0.0);
    const ConsistencyReport rep =
        check_consistency(pc, MollifierSpec::standard_bump(),
                          OmegaSchedule::power(1.0), EpsilonGrid::dyadic(2, 6), cfg);
    CHECK(rep.at_noise_floor);
    CHECK(rep.consistent);
    for (double e : rep.errors) CHECK(e <= 1e-10);
  }
  SUBCASE("power schedule converges at first order") {
    const ConsistencyReport rep =
        check_consistency(p, MollifierSpec::standard_bump(),
                          OmegaSchedule::power(1.0), EpsilonGrid::dyadic(2, 8), cfg);
    CHECK(rep.consistent);
    CHECK(rep.inversions <= 1);
    CHECK(rep.final_over_initial <= 0.2);
  }
  SUBCASE("deltas are rejected") {
    CHECK_THROWS_AS(
        check_consistency(scenario("ex1"), MollifierSpec::standard_bump(),
                          OmegaSchedule::power(1.0), EpsilonGrid::dyadic(2, 4),
                          cfg),
        std::invalid_argument);
  }
}

TEST_CASE("uniqueness proxy: identical mollifiers give identical nets") {
  const CauchyProblem p = scenario("regular");
  IntegratorConfig cfg;
  cfg.rel_tol = cfg.abs_tol = 1e-10;
  const auto psi = MollifierSpec::standard_bump();
  const NegligibilityReport rep = check_uniqueness_stability(
      p, psi, psi, OmegaSchedule::log_schedule(), EpsilonGrid::dyadic(2, 5), cfg);
  for (double d : rep.differences) CHECK(d <= 1e-10);
  CHECK(rep.decreasing);
  CHECK(rep.at_noise_floor);
}

TEST_CASE("export bundle writes deterministic files") {
  namespace fs = std::filesystem;
  const fs::path dir1 = fs::temp_directory_path() / "lhwave_export_a";
  const fs::path dir2 = fs::temp_directory_path() / "lhwave_export_b";
  fs::remove_all(dir1);
  fs::remove_all(dir2);

  CauchyProblem p = scenario("ex1");
  const EpsilonGrid grid = EpsilonGrid::dyadic(2, 5);
  IntegratorConfig cfg;
  cfg.rel_tol = cfg.abs_tol = 1e-8;
  const NetResult net = run_net(p, MollifierSpec::standard_bump(),
                                OmegaSchedule::log_schedule(), grid, cfg);
  const ModeratenessReport mod = fit_moderateness(net.diagnostics);
  ExportBundle bundle;
  bundle.net = &net;
  bundle.moderateness = &mod;
  bundle.grid = &grid;
  bundle.problem = &p;
  bundle.command = "net";
  bundle.schedule_label = "log";
  export_reports(bundle, dir1.string());
  export_reports(bundle, dir2.string());

  for (const char* name : {"norms.csv", "net_diagnostics.csv", "summary.json"}) {
    const std::string a = slurp(dir1 / name);
    const std::string b = slurp(dir2 / name);
    CHECK(a == b);
    CHECK(!a.empty());
    CHECK(a.find('\r') == std::string::npos);
  }
  CHECK(slurp(dir1 / "norms.csv").rfind("eps,t,h_norm_1plus_s,h_norm_s\n", 0) == 0);
  CHECK(slurp(dir1 / "net_diagnostics.csv").rfind("eps,k,sup_norm\n", 0) == 0);
}

TEST_CASE("empty export still carries the schema headers") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "lhwave_export_empty";
  fs::remove_all(dir);
  ExportBundle bundle;
  bundle.command = "net";
  export_reports(bundle, dir.string());
  CHECK(slurp(dir / "norms.csv") == "eps,t,h_norm_1plus_s,h_norm_s\n");
  CHECK(slurp(dir / "net_diagnostics.csv") == "eps,k,sup_norm\n");
  CHECK(slurp(dir / "summary.json").find("\"command\"") != std::string::npos);
}

TEST_CASE("config parsing") {
  const std::string text = R"({
    "variant": "CPa",
    "B": 1.0, "T": 2.0, "s": 0.0,
    "truncation": {"j_max": 2, "n_max": 2},
    "a": {"segments": [{"t_start": 0, "t_end": 2, "poly_coeffs": [2, 1]}],
          "lower_bound": 1.0},
    "q": {"segments": [{"t_start": 0, "t_end": 2, "poly_coeffs": [0]}],
          "deltas": [{"t": 1, "weight": 0.5}], "lower_bound": 0},
    "forcing": [{"j": 0, "n": 1, "component": 1,
                 "amplitude_re": 1, "amplitude_im": -1, "frequency": 2.5}],
    "data": [{"j": 0, "n": 0, "component": 1, "u0_re": 1, "u1_im": 0.25}]
  })";
  const CauchyProblem p = parse_problem_json(text);
  CHECK(p.variant == Variant::CPa);
  CHECK(p.a.smooth_value(1.0) == doctest::Approx(3.0));
  CHECK(p.q.deltas().size() == 1);
  CHECK(p.u0.get({0, 0}, 1) == complex{1.0, 0.0});
  CHECK(p.u1.get({0, 0}, 1) == complex{0.0, 0.25});
  const auto it = p.forcing.find({SpectralIndex{0, 1}, 1});
  REQUIRE(it != p.forcing.end());
  CHECK(it->second.amplitude == complex{1.0, -1.0});
  CHECK(it->second.frequency == 2.5);

  CHECK_THROWS(parse_problem_json("{\"variant\": \"CPx\"}"));
  CHECK_THROWS(parse_problem_json("not json"));
}

TEST_CASE("scenario command writes the full report set") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "lhwave_scenario_smoke";
  fs::remove_all(dir);
  RunOptions opts;
  opts.out_dir = dir.string();
  opts.grid = EpsilonGrid::dyadic(2, 5);
  opts.rel_tol = 1e-8;
  run_scenario_command("ex1", opts);
  CHECK(fs::exists(dir / "norms.csv"));
  CHECK(fs::exists(dir / "net_diagnostics.csv"));
  CHECK(fs::exists(dir / "summary.json"));
  const std::string summary = slurp(dir / "summary.json");
  CHECK(summary.find("\"moderateness\"") != std::string::npos);
  CHECK(summary.find("\"eps_grid\"") != std::string::npos);
}
