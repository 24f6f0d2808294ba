#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "balance/engine.hpp"

namespace balance::cli {

enum ExitCode : int {
  kOk = 0,
  kCriterionFailed = 1,
  kBadFlags = 2,
  kRuntimeFailure = 3,
};

/// Accepts "full", "pi/<k>", "pi", or a decimal in radians.
std::optional<double> parse_gamma(const std::string& text);
/// Accepts "star" or a positive decimal.
double parse_alpha(const std::string& text);
ValueDef parse_value_def(const std::string& text);

struct SimulateOptions {
  GameConfig config;
  std::string out_csv;       // empty: no CSV
  std::string summary_path;  // empty: summary to stdout
  std::string manifest_path; // empty: next to the outputs, if any
};

struct SimulateOutputs {
  std::string csv;  // empty when the config is summary-only
  std::string summary;
};

SimulateOutputs run_simulate(const GameConfig& config);
int cmd_simulate(const SimulateOptions& options, const std::vector<std::string>& argv);

int cmd_constants(const std::optional<double>& gamma);

int cmd_minimax(int n, int grid, double gamma, ValueDef value_def);

struct SweepOptions {
  GameConfig base;
  std::vector<std::string> gamma_grid;
  std::vector<long> n_grid;
  std::vector<double> alpha_grid;
  int repetitions = 1;
  std::string out_csv;
  std::string aggregate_csv;
  std::string manifest_path;
};
int cmd_sweep(const SweepOptions& options, const std::vector<std::string>& argv);

int cmd_verify(bool fast, bool verbose, const std::string& manifest_path);

/// Serialized config used by manifests; round-trips through config_from_json.
std::string config_to_json(const GameConfig& config);
GameConfig config_from_json(const std::string& json);

}  // namespace balance::cli
