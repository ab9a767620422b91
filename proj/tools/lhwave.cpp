// lhwave: spectral experiments for the wave equation driven by the 2D Landau
// Hamiltonian. Subcommands:
//   solve        classical solve of a config file (regular coefficients)
//   net          regularised solution net over an epsilon grid + moderateness
//   consistency  regularised nets against the classical solution
//   uniqueness   standard vs shifted mollifier difference net
//   scenario     run a named preset (ex1, ex2, regular, inhomogeneous)
// Outputs norms.csv, net_diagnostics.csv and summary.json under --out.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "landau/config_io.hpp"
#include "landau/harness.hpp"

namespace {

struct CliFlags {
  std::string config;
  std::string out_dir = ".";
  std::string eps_range = "2:12";
  std::string schedule = "log";
  double tol = 1e-10;
  std::string truncation;
  long seed = 0;
  int out_times = 201;
};

landau::RunOptions to_run_options(const CliFlags& flags) {
  landau::RunOptions opts;
  opts.out_dir = flags.out_dir;
  opts.rel_tol = flags.tol;
  opts.seed = flags.seed;
  opts.out_time_count = flags.out_times;

  const auto colon = flags.eps_range.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("--eps-grid expects k_min:k_max");
  }
  opts.grid = landau::EpsilonGrid::dyadic(std::stoi(flags.eps_range.substr(0, colon)),
                                          std::stoi(flags.eps_range.substr(colon + 1)));

  if (flags.schedule == "log") {
    opts.schedule = landau::OmegaSchedule::log_schedule();
  } else if (flags.schedule.rfind("power:", 0) == 0) {
    opts.schedule = landau::OmegaSchedule::power(std::stod(flags.schedule.substr(6)));
  } else {
    throw std::invalid_argument("--schedule expects log or power:<p>");
  }

  if (!flags.truncation.empty()) {
    const auto c = flags.truncation.find(':');
    if (c == std::string::npos) {
      throw std::invalid_argument("--truncation expects j_max:n_max");
    }
    landau::TruncationSpec trunc;
    trunc.j_max = std::stoi(flags.truncation.substr(0, c));
    trunc.n_max = std::stoi(flags.truncation.substr(c + 1));
    opts.truncation_override = trunc;
  }
  return opts;
}

void add_common_flags(CLI::App* cmd, CliFlags& flags, bool needs_config) {
  if (needs_config) {
    cmd->add_option("--config", flags.config, "problem configuration (JSON)")
        ->required();
  }
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--eps-grid", flags.eps_range, "dyadic grid k_min:k_max");
  cmd->add_option("--schedule", flags.schedule, "log or power:<p>");
  cmd->add_option("--tol", flags.tol, "integrator relative tolerance");
  cmd->add_option("--truncation", flags.truncation, "override j_max:n_max");
  cmd->add_option("--seed", flags.seed, "seed recorded for randomized suites");
  cmd->add_option("--out-times", flags.out_times, "output grid size on [0, T]");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral wave-equation experiments for the Landau Hamiltonian"};
  app.require_subcommand(1);

  CliFlags flags;
  std::string scenario_name;

  auto* solve = app.add_subcommand("solve", "classical solve (regular coefficients)");
  add_common_flags(solve, flags, true);
  auto* net = app.add_subcommand("net", "regularised net + moderateness fit");
  add_common_flags(net, flags, true);
  auto* consistency = app.add_subcommand("consistency", "net vs classical solution");
  add_common_flags(consistency, flags, true);
  auto* uniqueness = app.add_subcommand("uniqueness", "two-mollifier difference net");
  add_common_flags(uniqueness, flags, true);
  auto* scenario_cmd = app.add_subcommand("scenario", "run a named preset");
  scenario_cmd->add_option("name", scenario_name, "ex1 | ex2 | regular | inhomogeneous")
      ->required();
  add_common_flags(scenario_cmd, flags, false);

  CLI11_PARSE(app, argc, argv);

  try {
    const landau::RunOptions opts = to_run_options(flags);
    if (solve->parsed()) {
      landau::run_solve_command(landau::load_problem_file(flags.config), opts);
    } else if (net->parsed()) {
      landau::run_net_command(landau::load_problem_file(flags.config), opts);
    } else if (consistency->parsed()) {
      landau::run_consistency_command(landau::load_problem_file(flags.config), opts);
    } else if (uniqueness->parsed()) {
      landau::run_uniqueness_command(landau::load_problem_file(flags.config), opts);
    } else if (scenario_cmd->parsed()) {
      landau::run_scenario_command(scenario_name, opts);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
