#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "balance/geometry.hpp"
#include "balance/policy_spec.hpp"
#include "balance/strategies.hpp"

namespace balance {

enum class ValueDef { FinalNorm, MaxPrefixNorm };

struct GameConfig {
  /// Offer arc half-angle; nullopt selects the full circle S¹ (baseline game).
  std::optional<double> gamma;
  long n = 1;
  PolicySpec pusher;
  PolicySpec chooser;
  double alpha = 0.0;  // 0 means the closed-form optimum
  std::uint64_t seed = 0;
  bool record_full = true;
  ValueDef value_def = ValueDef::FinalNorm;
};

/// Throws ConfigError on an inconsistent config.
void validate_config(const GameConfig& config);

/// α actually used for D^γ(α): the chooser's own alpha param, else
/// config.alpha, else the closed-form optimum.
double effective_alpha(const GameConfig& config);

/// GameParams for cone games; nullopt for the full circle.
std::optional<GameParams> game_params(const GameConfig& config);

struct Step {
  Point2 offer;  // canonical: x > 0, or y > 0 when x == 0
  int sign;
  Point2 position;
  double euclid_norm;
  double t_pusher;   // |z|_{K^γ}; NaN in the full-circle game
  double t_chooser;  // |z|_{D^γ(α)}; NaN in the full-circle game
};

struct Trajectory {
  std::vector<Step> steps;  // empty unless record_full
  double final_value = 0.0;
  double max_prefix_value = 0.0;
  long argmax_index = 0;  // 1-based step achieving max_prefix_value
  double final_t_pusher = 0.0;
  double final_t_chooser = 0.0;
  Point2 final_position;

  double value(ValueDef def) const {
    return def == ValueDef::FinalNorm ? final_value : max_prefix_value;
  }
};

/// Plays config.n steps from the origin. Deterministic in (config, seed).
/// Throws IllegalOfferError if the pusher leaves the offer arc, BudgetError
/// from lookahead policies.
Trajectory play(const GameConfig& config);

struct ValidationReport {
  double max_replay_deviation = 0.0;  // positions and all stored norms
  long illegal_offers = 0;
  long step_bound_checked = 0;
  long step_bound_breaches = 0;
  double step_bound_worst_excess = -std::numeric_limits<double>::infinity();
  long growth_checked = 0;
  long growth_breaches = 0;
  double growth_worst_slack = std::numeric_limits<double>::infinity();

  bool ok() const {
    return max_replay_deviation <= 1e-12 && illegal_offers == 0 && step_bound_breaches == 0 &&
           growth_breaches == 0;
  }
};

inline constexpr double kStepBoundTolerance = 1e-12;
inline constexpr double kGrowthTolerance = 1e-9;

/// Recomputes the trajectory from offers and signs, and checks the per-step
/// contracts of whichever side plays a certified strategy: t_next ≤ t + 1/(2βt)
/// for the cone chooser above t*, and t_next² ≥ t² + 1 for the tangent pusher.
/// Requires a full trajectory.
ValidationReport validate(const Trajectory& trajectory, const GameConfig& config);

/// Trajectory CSV: header `k,vx,vy,eps,zx,zy,norm2,tK,tD`, %.17g floats.
std::string trajectory_csv(const Trajectory& trajectory);
/// Summary JSON: config echo plus value fields.
std::string summary_json(const Trajectory& trajectory, const GameConfig& config);

struct ConfigOverride {
  std::optional<std::optional<double>> gamma;
  std::optional<long> n;
  std::optional<double> alpha;
  std::optional<PolicySpec> pusher;
  std::optional<PolicySpec> chooser;
};

GameConfig apply_override(GameConfig base, const ConfigOverride& o);

struct SweepCell {
  std::size_t point = 0;  // index into the override grid
  int repetition = 0;
  GameConfig config;
  std::optional<Trajectory> result;  // summary only
  std::string error;
};

struct SweepAggregate {
  std::size_t point = 0;
  GameConfig config;  // seed of repetition 0
  int games = 0;
  int errors = 0;
  double mean_final = 0.0;
  double max_final = 0.0;
  double mean_max_prefix = 0.0;
  double max_max_prefix = 0.0;
  double mean_final_ratio = 0.0;  // final / sqrt(n)
  double max_final_ratio = 0.0;
  double mean_max_prefix_ratio = 0.0;
  double max_max_prefix_ratio = 0.0;
};

struct SweepTable {
  std::vector<SweepCell> cells;
  std::vector<SweepAggregate> aggregates;
};

/// Plays every (grid point, repetition) cell. Cell i uses seed base.seed ^ i.
/// An empty grid sweeps the base config alone. Cells may run in parallel
/// (threads from BALANCE_THREADS, default hardware concurrency); results are
/// ordered by cell index. Per-cell errors are recorded, not thrown.
SweepTable sweep(const GameConfig& base, const std::vector<ConfigOverride>& grid,
                 int repetitions);

std::string sweep_csv(const SweepTable& table);
std::string sweep_aggregate_csv(const SweepTable& table);

std::string gamma_to_string(const std::optional<double>& gamma);
std::string_view value_def_name(ValueDef def);

}  // namespace balance
