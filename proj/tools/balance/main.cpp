#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "balance/policy_spec.hpp"
#include "commands.hpp"

using namespace balance;

int main(int argc, char** argv) {
  CLI::App app{"Simulator and verifier for the (S^gamma, B) vector balancing game"};
  app.require_subcommand(1);
  const std::vector<std::string> args(argv, argv + argc);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Play one game and write its trajectory");
  std::string sim_gamma = "pi/4", sim_pusher = "tangent", sim_chooser = "cone";
  std::string sim_alpha = "star", sim_value = "final";
  long sim_n = 10'000;
  std::uint64_t sim_seed = 0;
  bool summary_only = false;
  cli::SimulateOptions sim_opts;
  simulate->add_option("--gamma", sim_gamma, "Offer half-angle: radians, pi/k, or 'full'");
  simulate->add_option("--n", sim_n, "Number of steps");
  simulate->add_option("--pusher", sim_pusher, "Pusher policy spec");
  simulate->add_option("--chooser", sim_chooser, "Chooser policy spec");
  simulate->add_option("--alpha", sim_alpha, "Chooser body parameter, or 'star'");
  simulate->add_option("--seed", sim_seed, "Game RNG seed");
  simulate->add_option("--out", sim_opts.out_csv, "Trajectory CSV path");
  simulate->add_option("--summary", sim_opts.summary_path,
                       "Summary JSON path (default: next to --out, else stdout)");
  simulate->add_option("--manifest", sim_opts.manifest_path, "Manifest path (JSON lines)");
  simulate->add_option("--value", sim_value, "final | maxprefix");
  simulate->add_flag("--summary-only", summary_only, "Skip the trajectory CSV");

  // constants
  auto* constants = app.add_subcommand("constants", "Print the derived constants as JSON");
  std::string const_gamma;
  constants->add_option("--gamma", const_gamma, "Report the (S^gamma, B) constants instead");

  // minimax
  auto* minimax = app.add_subcommand("minimax", "Exact value of the discretized game");
  int mm_n = 2, mm_grid = 17;
  std::string mm_gamma = "pi/4", mm_value = "final";
  minimax->add_option("--n", mm_n, "Game length (1..8)");
  minimax->add_option("--grid", mm_grid, "Odd number of offer angles (1..33)");
  minimax->add_option("--gamma", mm_gamma, "Offer half-angle");
  minimax->add_option("--value", mm_value, "final | maxprefix");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Play a grid of games and tabulate ratios");
  cli::SweepOptions sw;
  std::string sw_gamma = "pi/4", sw_pusher = "tangent", sw_chooser = "greedy-euclid";
  std::string sw_alpha = "star", sw_value = "final";
  long sw_n = 10'000;
  std::uint64_t sw_seed = 0;
  sweep_cmd->add_option("--gamma", sw_gamma, "Base offer half-angle");
  sweep_cmd->add_option("--n", sw_n, "Base game length");
  sweep_cmd->add_option("--pusher", sw_pusher, "Pusher policy spec");
  sweep_cmd->add_option("--chooser", sw_chooser, "Chooser policy spec");
  sweep_cmd->add_option("--alpha", sw_alpha, "Base alpha, or 'star'");
  sweep_cmd->add_option("--seed", sw_seed, "Base seed; cell i uses seed ^ i");
  sweep_cmd->add_option("--value", sw_value, "final | maxprefix");
  sweep_cmd->add_option("--gamma-grid", sw.gamma_grid, "Comma-separated gammas")->delimiter(',');
  sweep_cmd->add_option("--n-grid", sw.n_grid, "Comma-separated lengths")->delimiter(',');
  sweep_cmd->add_option("--alpha-grid", sw.alpha_grid, "Comma-separated alphas")->delimiter(',');
  sweep_cmd->add_option("--reps", sw.repetitions, "Seeds per grid point")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--out", sw.out_csv, "Per-game CSV (default stdout)");
  sweep_cmd->add_option("--aggregate-out", sw.aggregate_csv, "Per-grid-point aggregate CSV");
  sweep_cmd->add_option("--manifest", sw.manifest_path, "Manifest path (JSON lines)");

  // verify
  auto* verify = app.add_subcommand("verify", "Run the acceptance battery");
  bool fast = false, verbose = false;
  std::string verify_manifest;
  verify->add_flag("--fast", fast, "Shorter games and searches, same thresholds");
  verify->add_flag("--verbose", verbose, "Print every check");
  verify->add_option("--manifest", verify_manifest,
                     "Also re-run the first simulate entry of this manifest and diff");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return e.get_exit_code() == 0 ? code : cli::kBadFlags;
  }

  const auto build_config = [](const std::string& gamma, long n, const std::string& pusher,
                               const std::string& chooser, const std::string& alpha,
                               std::uint64_t seed, const std::string& value) {
    GameConfig c;
    c.gamma = cli::parse_gamma(gamma);
    c.n = n;
    c.pusher = parse_pusher_spec(pusher);
    c.chooser = parse_chooser_spec(chooser);
    c.alpha = cli::parse_alpha(alpha);
    c.seed = seed;
    c.value_def = cli::parse_value_def(value);
    return c;
  };

  try {
    if (*simulate) {
      sim_opts.config =
          build_config(sim_gamma, sim_n, sim_pusher, sim_chooser, sim_alpha, sim_seed, sim_value);
      sim_opts.config.record_full = !summary_only;
      return cli::cmd_simulate(sim_opts, args);
    }
    if (*constants) {
      return cli::cmd_constants(const_gamma.empty() ? std::nullopt
                                                    : cli::parse_gamma(const_gamma));
    }
    if (*minimax) {
      const auto gamma = cli::parse_gamma(mm_gamma);
      if (!gamma) throw std::invalid_argument("minimax needs a finite gamma");
      return cli::cmd_minimax(mm_n, mm_grid, *gamma, cli::parse_value_def(mm_value));
    }
    if (*sweep_cmd) {
      sw.base = build_config(sw_gamma, sw_n, sw_pusher, sw_chooser, sw_alpha, sw_seed, sw_value);
      return cli::cmd_sweep(sw, args);
    }
    if (*verify) {
      return cli::cmd_verify(fast, verbose, verify_manifest);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kBadFlags;
  }
  return cli::kBadFlags;
}
