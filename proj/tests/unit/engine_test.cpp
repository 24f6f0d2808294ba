#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <string>

#include "balance/analysis.hpp"
#include "balance/engine.hpp"
#include "balance/errors.hpp"

namespace balance {
namespace {

constexpr double kQuarterPi = std::numbers::pi / 4;

GameConfig make_config(std::optional<double> gamma, long n, const char* pusher,
                       const char* chooser, std::uint64_t seed = 0) {
  GameConfig c;
  c.gamma = gamma;
  c.n = n;
  c.pusher = parse_pusher_spec(pusher);
  c.chooser = parse_chooser_spec(chooser);
  c.seed = seed;
  return c;
}

TEST(Play, OneStepIsAUnitVector) {
  for (const std::uint64_t seed : {0u, 1u, 77u}) {
    const Trajectory t = play(make_config(kQuarterPi, 1, "tangent", "cone", seed));
    EXPECT_DOUBLE_EQ(t.final_value, 1.0);
    ASSERT_EQ(t.steps.size(), 1u);
    EXPECT_EQ(t.argmax_index, 1);
  }
}

TEST(Play, FullCircleBaselineReachesSqrtN) {
  const Trajectory t = play(make_config(std::nullopt, 10'000, "perpendicular", "greedy-euclid"));
  EXPECT_NEAR(t.final_value, 100.0, 1e-6);
  EXPECT_TRUE(std::isnan(t.steps.back().t_pusher));
  EXPECT_TRUE(std::isnan(t.steps.back().t_chooser));
}

TEST(Play, TangentPusherFloorAgainstGreedy) {
  const GameConfig c = make_config(kQuarterPi, 10'000, "tangent", "greedy-euclid");
  const Trajectory t = play(c);
  EXPECT_GE(t.final_t_pusher * t.final_t_pusher, 10'000.0 * (1.0 - 1e-12));
  EXPECT_GE(t.final_value, (std::numbers::sqrt2 - 1.0) * 100.0);
  for (std::size_t k = 0; k < t.steps.size(); ++k) {
    ASSERT_GE(t.steps[k].t_pusher * t.steps[k].t_pusher, static_cast<double>(k + 1) - 1e-6);
  }
}

TEST(Play, IsDeterministicInConfigAndSeed) {
  const GameConfig c = make_config(kQuarterPi, 3000, "random", "random", 1234);
  const std::string a = trajectory_csv(play(c));
  const std::string b = trajectory_csv(play(c));
  EXPECT_EQ(a, b);
  GameConfig other = c;
  other.seed = 1235;
  EXPECT_NE(a, trajectory_csv(play(other)));
}

TEST(Play, SummaryOnlyMatchesFullRun) {
  GameConfig c = make_config(kQuarterPi, 2000, "random", "cone", 3);
  const Trajectory full = play(c);
  c.record_full = false;
  const Trajectory summary = play(c);
  EXPECT_TRUE(summary.steps.empty());
  EXPECT_EQ(summary.final_value, full.final_value);
  EXPECT_EQ(summary.max_prefix_value, full.max_prefix_value);
  EXPECT_EQ(summary.argmax_index, full.argmax_index);
}

TEST(Play, StoredOffersAreCanonicalAndLegal) {
  const Trajectory t = play(make_config(0.6, 2000, "random", "greedy-lens", 9));
  for (const Step& s : t.steps) {
    EXPECT_TRUE(s.offer.x > 0.0 || (s.offer.x == 0.0 && s.offer.y > 0.0));
    EXPECT_LE(std::abs(std::atan2(s.offer.y, s.offer.x)), 0.6 + 1e-12);
    EXPECT_TRUE(s.sign == 1 || s.sign == -1);
  }
}

TEST(Play, ValueDefinitionsAreConsistent) {
  for (const char* pusher : {"tangent", "random", "lookahead:depth=1,grid=9"}) {
    for (const char* chooser : {"cone", "greedy-euclid", "random"}) {
      const Trajectory t = play(make_config(kQuarterPi, 500, pusher, chooser, 5));
      EXPECT_LE(t.final_value, t.max_prefix_value);
      EXPECT_EQ(t.value(ValueDef::FinalNorm), t.final_value);
      EXPECT_EQ(t.value(ValueDef::MaxPrefixNorm), t.max_prefix_value);
      EXPECT_DOUBLE_EQ(t.steps[static_cast<std::size_t>(t.argmax_index - 1)].euclid_norm,
                       t.max_prefix_value);
    }
  }
}

TEST(Play, RejectsBadConfigs) {
  EXPECT_THROW(play(make_config(kQuarterPi, 0, "tangent", "cone")), ConfigError);
  EXPECT_THROW(play(make_config(0.9, 10, "tangent", "cone")), ConfigError);
  EXPECT_THROW(play(make_config(0.0, 10, "random", "random")), ConfigError);
  EXPECT_THROW(play(make_config(std::nullopt, 10, "tangent", "greedy-euclid")), ConfigError);
  EXPECT_THROW(play(make_config(std::nullopt, 10, "random", "cone")), ConfigError);
  EXPECT_THROW(play(make_config(kQuarterPi, 10, "perpendicular", "random")), ConfigError);
  GameConfig bad_alpha = make_config(kQuarterPi, 10, "tangent", "cone");
  bad_alpha.alpha = -1.0;
  EXPECT_THROW(play(bad_alpha), ConfigError);
  EXPECT_THROW(play(make_config(kQuarterPi, 10, "lookahead:depth=4,grid=64", "cone")),
               BudgetError);
}

TEST(EffectiveAlpha, PrefersChooserParameter) {
  GameConfig c = make_config(kQuarterPi, 1, "tangent", "cone");
  EXPECT_EQ(effective_alpha(c), alpha_star_closed_form());
  c.alpha = 1.5;
  EXPECT_EQ(effective_alpha(c), 1.5);
  c.chooser = parse_chooser_spec("cone:alpha=3");
  EXPECT_EQ(effective_alpha(c), 3.0);
  EXPECT_FALSE(game_params(make_config(std::nullopt, 1, "random", "random")).has_value());
}

TEST(Validate, CleanTrajectoriesPass) {
  for (const char* pusher : {"tangent", "random", "lookahead:depth=1,grid=17"}) {
    for (const char* chooser : {"cone", "greedy-euclid", "greedy-lens:body=K", "random"}) {
      const GameConfig c = make_config(kQuarterPi, 2000, pusher, chooser, 17);
      const ValidationReport r = validate(play(c), c);
      EXPECT_TRUE(r.ok()) << pusher << " vs " << chooser << ": deviation "
                          << r.max_replay_deviation << ", step bound " << r.step_bound_breaches
                          << ", growth " << r.growth_breaches;
    }
  }
  const GameConfig full = make_config(std::nullopt, 2000, "perpendicular", "random", 2);
  EXPECT_TRUE(validate(play(full), full).ok());
}

TEST(Validate, ChecksTheSidesThatPlayCertifiedStrategies) {
  const GameConfig both = make_config(kQuarterPi, 1000, "tangent", "cone");
  const ValidationReport r = validate(play(both), both);
  EXPECT_GT(r.step_bound_checked, 0);
  EXPECT_EQ(r.growth_checked, 1000);

  const GameConfig neither = make_config(kQuarterPi, 1000, "random", "random", 4);
  const ValidationReport q = validate(play(neither), neither);
  EXPECT_EQ(q.step_bound_checked, 0);
  EXPECT_EQ(q.growth_checked, 0);
}

TEST(Validate, DetectsAFlippedSign) {
  const GameConfig c = make_config(kQuarterPi, 100, "tangent", "cone");
  Trajectory t = play(c);
  t.steps[40].sign = -t.steps[40].sign;
  const ValidationReport r = validate(t, c);
  EXPECT_GT(r.max_replay_deviation, 0.5);
  EXPECT_FALSE(r.ok());
}

TEST(Validate, DetectsAnIllegalOffer) {
  const GameConfig c = make_config(kQuarterPi, 100, "random", "random", 8);
  Trajectory t = play(c);
  t.steps[10].offer = unit_vector(1.0);
  EXPECT_EQ(validate(t, c).illegal_offers, 1);
}

TEST(Validate, NeedsAFullTrajectory) {
  GameConfig c = make_config(kQuarterPi, 100, "random", "random", 8);
  c.record_full = false;
  EXPECT_THROW(validate(play(c), c), std::invalid_argument);
}

TEST(Validate, HeadlineCeilingRunHasNoBreaches) {
  const GameConfig c = make_config(kQuarterPi, 100'000, "tangent", "cone");
  const ValidationReport r = validate(play(c), c);
  EXPECT_EQ(r.step_bound_breaches, 0);
  EXPECT_EQ(r.growth_breaches, 0);
  EXPECT_LE(r.max_replay_deviation, 1e-12);
}

TEST(TrajectoryCsv, HeaderAndRows) {
  const Trajectory t = play(make_config(kQuarterPi, 3, "tangent", "cone"));
  std::istringstream in(trajectory_csv(t));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "k,vx,vy,eps,zx,zy,norm2,tK,tD");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(line.rfind(std::to_string(rows) + ",", 0), 0u) << line;
  }
  EXPECT_EQ(rows, 3);
}

TEST(TrajectoryCsv, FloatsRoundTripExactly) {
  const Trajectory t = play(make_config(kQuarterPi, 50, "random", "cone", 21));
  std::istringstream in(trajectory_csv(t));
  std::string line;
  std::getline(in, line);
  for (const Step& s : t.steps) {
    std::getline(in, line);
    std::istringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    ASSERT_EQ(cells.size(), 9u);
    EXPECT_EQ(std::stod(cells[1]), s.offer.x);
    EXPECT_EQ(std::stod(cells[4]), s.position.x);
    EXPECT_EQ(std::stod(cells[5]), s.position.y);
    EXPECT_EQ(std::stod(cells[6]), s.euclid_norm);
    EXPECT_EQ(std::stod(cells[8]), s.t_chooser);
  }
}

TEST(SummaryJson, EchoesConfigAndValues) {
  const GameConfig c = make_config(kQuarterPi, 400, "tangent", "greedy-euclid", 3);
  const std::string json = summary_json(play(c), c);
  EXPECT_NE(json.find("\"pusher\": \"tangent\""), std::string::npos) << json;
  EXPECT_NE(json.find("\"chooser\": \"greedy-euclid\""), std::string::npos);
  EXPECT_NE(json.find("\"n\": 400"), std::string::npos);
  EXPECT_NE(json.find("\"final_tK_squared_over_n\""), std::string::npos);
}

TEST(Sweep, EmptyGridIsTheBaseConfig) {
  const GameConfig base = make_config(kQuarterPi, 300, "tangent", "cone", 5);
  const SweepTable table = sweep(base, {}, 1);
  ASSERT_EQ(table.cells.size(), 1u);
  ASSERT_EQ(table.aggregates.size(), 1u);
  ASSERT_TRUE(table.cells[0].result.has_value());
  EXPECT_EQ(table.cells[0].result->final_value, play(base).final_value);
  EXPECT_EQ(table.aggregates[0].games, 1);
}

TEST(Sweep, PusherFloorAcrossGammaGrid) {
  const GameConfig base = make_config(kQuarterPi, 10'000, "tangent", "greedy-euclid");
  std::vector<ConfigOverride> grid;
  for (const double g : {0.3, 0.6, kQuarterPi}) {
    ConfigOverride o;
    o.gamma = g;
    grid.push_back(o);
  }
  const SweepTable table = sweep(base, grid, 3);
  ASSERT_EQ(table.cells.size(), 9u);
  ASSERT_EQ(table.aggregates.size(), 3u);
  for (const SweepAggregate& a : table.aggregates) {
    EXPECT_EQ(a.errors, 0);
    const double floor = pusher_floor(*a.config.gamma) - 0.01;
    EXPECT_GE(a.mean_final_ratio, floor) << *a.config.gamma;
  }
}

TEST(Sweep, CeilingGrowsMonotonicallyInN) {
  const GameConfig base = make_config(kQuarterPi, 1, "tangent", "cone");
  std::vector<ConfigOverride> grid;
  for (const long n : {100L, 1000L, 10'000L}) {
    ConfigOverride o;
    o.n = n;
    grid.push_back(o);
  }
  const SweepTable table = sweep(base, grid, 1);
  EXPECT_LT(table.aggregates[0].max_final, table.aggregates[1].max_final);
  EXPECT_LT(table.aggregates[1].max_final, table.aggregates[2].max_final);
}

TEST(Sweep, CellSeedsAndErrorsAreRecorded) {
  const GameConfig base = make_config(kQuarterPi, 50, "random", "random", 40);
  std::vector<ConfigOverride> grid(2);
  grid[1].gamma = 0.95;  // invalid for a cone game
  const SweepTable table = sweep(base, grid, 2);
  ASSERT_EQ(table.cells.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(table.cells[i].config.seed, 40u ^ i);
  EXPECT_TRUE(table.cells[0].error.empty());
  EXPECT_FALSE(table.cells[2].error.empty());
  EXPECT_EQ(table.aggregates[1].errors, 2);
  EXPECT_THROW(sweep(base, {}, 0), std::invalid_argument);
}

TEST(Sweep, ResultsDoNotDependOnThreadCount) {
  const GameConfig base = make_config(kQuarterPi, 500, "random", "cone", 9);
  std::vector<ConfigOverride> grid(3);
  grid[1].alpha = 1.0;
  grid[2].gamma = 0.5;
  ::setenv("BALANCE_THREADS", "1", 1);
  const std::string serial = sweep_csv(sweep(base, grid, 4));
  ::setenv("BALANCE_THREADS", "8", 1);
  const std::string parallel = sweep_csv(sweep(base, grid, 4));
  ::unsetenv("BALANCE_THREADS");
  EXPECT_EQ(serial, parallel);
  EXPECT_NE(sweep_aggregate_csv(sweep(base, grid, 1)).find("mean_final"), std::string::npos);
}

TEST(Names, GammaAndValueDef) {
  EXPECT_EQ(gamma_to_string(std::nullopt), "full");
  EXPECT_EQ(value_def_name(ValueDef::FinalNorm), "final");
  EXPECT_EQ(value_def_name(ValueDef::MaxPrefixNorm), "maxprefix");
}

}  // namespace
}  // namespace balance
