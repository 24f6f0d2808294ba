#include "balance/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <thread>

#include <nlohmann/json.hpp>

#include "balance/analysis.hpp"
#include "balance/errors.hpp"

namespace balance {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void append_real(std::string& out, double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out += buf;
}

OfferArc offer_arc(const GameConfig& config) {
  return config.gamma ? OfferArc{false, *config.gamma} : OfferArc{true, 0.0};
}

}  // namespace

double effective_alpha(const GameConfig& config) {
  if (auto a = config.chooser.real_param("alpha")) return *a;
  if (config.alpha > 0.0) return config.alpha;
  return alpha_star_closed_form();
}

std::optional<GameParams> game_params(const GameConfig& config) {
  if (!config.gamma) return std::nullopt;
  return GameParams::make(*config.gamma, effective_alpha(config));
}

void validate_config(const GameConfig& config) {
  if (config.n < 1) throw ConfigError("game: n must be at least 1");
  if (!config.pusher.is_pusher()) throw ConfigError("game: pusher spec names a chooser policy");
  if (config.chooser.is_pusher()) throw ConfigError("game: chooser spec names a pusher policy");
  if (config.alpha < 0.0 || !std::isfinite(config.alpha)) {
    throw ConfigError("game: alpha must be positive (or 0 for the optimum)");
  }
  if (config.gamma) {
    const double g = *config.gamma;
    if (!(g > 0.0 && g <= kMaxConeGamma)) {
      throw ConfigError("game: gamma must lie in (0, 0.85]");
    }
    if (config.pusher.kind == PolicyKind::PerpendicularPusher) {
      throw ConfigError("game: perpendicular pusher needs the full-circle game");
    }
  } else {
    if (config.pusher.kind == PolicyKind::TangentPusher ||
        config.chooser.kind == PolicyKind::ConeChooser ||
        config.chooser.kind == PolicyKind::GreedyLensChooser) {
      throw ConfigError("game: lens-based policies need a cone game (0 < gamma <= 0.85)");
    }
  }
  for (const PolicySpec* spec : {&config.pusher, &config.chooser}) {
    if (spec->kind == PolicyKind::LookaheadPusher || spec->kind == PolicyKind::LookaheadChooser) {
      check_lookahead_budget(static_cast<int>(spec->int_param("depth").value_or(2)),
                             static_cast<int>(spec->int_param("grid").value_or(17)));
    }
  }
}

Trajectory play(const GameConfig& config) {
  validate_config(config);
  const std::optional<GameParams> params = game_params(config);
  const OfferArc arc = offer_arc(config);
  Rng rng(config.seed);
  const PolicyContext ctx{arc, params ? &*params : nullptr, &rng};
  auto pusher = make_pusher(config.pusher, ctx);
  auto chooser = make_chooser(config.chooser, ctx);

  Trajectory traj;
  if (config.record_full) traj.steps.reserve(static_cast<std::size_t>(config.n));
  Point2 z;
  double t_pusher = params ? 0.0 : kNaN;
  double t_chooser = params ? 0.0 : kNaN;
  for (long k = 1; k <= config.n; ++k) {
    const Point2 raw = pusher->offer(z);
    if (!arc.admits(raw, kOfferTolerance)) {
      throw IllegalOfferError("step " + std::to_string(k) + ": offer (" + std::to_string(raw.x) +
                              ", " + std::to_string(raw.y) + ") outside the offer arc");
    }
    const Point2 v = canonical_direction(raw);
    const int eps = chooser->choose(z, v);
    if (eps != 1 && eps != -1) throw InvariantError("chooser returned a sign other than +-1");
    z = z + static_cast<double>(eps) * v;

    const double r = norm(z);
    if (params) {
      t_pusher = lens_norm(z, params->pusher_body);
      t_chooser = lens_norm(z, params->chooser_body);
    }
    if (r > traj.max_prefix_value || k == 1) {
      traj.max_prefix_value = r;
      traj.argmax_index = k;
    }
    if (config.record_full) traj.steps.push_back({v, eps, z, r, t_pusher, t_chooser});
  }
  traj.final_position = z;
  traj.final_value = norm(z);
  traj.final_t_pusher = t_pusher;
  traj.final_t_chooser = t_chooser;
  return traj;
}

ValidationReport validate(const Trajectory& trajectory, const GameConfig& config) {
  if (static_cast<long>(trajectory.steps.size()) != config.n) {
    throw std::invalid_argument("validate: needs a full trajectory of n steps");
  }
  ValidationReport rep;
  const std::optional<GameParams> params = game_params(config);
  const OfferArc arc = offer_arc(config);
  const bool check_step_bound = params && config.chooser.kind == PolicyKind::ConeChooser;
  const bool check_growth = params && config.pusher.kind == PolicyKind::TangentPusher;

  const auto deviate = [&rep](double a, double b) {
    if (std::isnan(a) && std::isnan(b)) return;
    const double d = std::isnan(a) || std::isnan(b) ? std::numeric_limits<double>::infinity()
                                                    : std::abs(a - b);
    rep.max_replay_deviation = std::max(rep.max_replay_deviation, d);
  };

  Point2 z;
  for (const Step& s : trajectory.steps) {
    const bool canonical = s.offer.x > 0.0 || (s.offer.x == 0.0 && s.offer.y > 0.0);
    if (!canonical || !arc.admits(s.offer, kOfferTolerance) || (s.sign != 1 && s.sign != -1)) {
      ++rep.illegal_offers;
    }
    const Point2 next = z + static_cast<double>(s.sign) * s.offer;
    deviate(next.x, s.position.x);
    deviate(next.y, s.position.y);
    deviate(norm(next), s.euclid_norm);
    if (params) {
      const double tk_prev = lens_norm(z, params->pusher_body);
      const double tk = lens_norm(next, params->pusher_body);
      const double td_prev = lens_norm(z, params->chooser_body);
      const double td = lens_norm(next, params->chooser_body);
      deviate(tk, s.t_pusher);
      deviate(td, s.t_chooser);
      if (check_step_bound && td_prev >= params->t_star) {
        ++rep.step_bound_checked;
        const double excess = td - (td_prev + 1.0 / (2.0 * params->beta * td_prev));
        rep.step_bound_worst_excess = std::max(rep.step_bound_worst_excess, excess);
        if (excess > kStepBoundTolerance) ++rep.step_bound_breaches;
      }
      if (check_growth) {
        ++rep.growth_checked;
        const double slack = tk * tk - tk_prev * tk_prev - 1.0;
        rep.growth_worst_slack = std::min(rep.growth_worst_slack, slack);
        if (slack < -kGrowthTolerance) ++rep.growth_breaches;
      }
    } else {
      deviate(kNaN, s.t_pusher);
      deviate(kNaN, s.t_chooser);
    }
    z = next;
  }
  return rep;
}

std::string trajectory_csv(const Trajectory& trajectory) {
  std::string out = "k,vx,vy,eps,zx,zy,norm2,tK,tD\n";
  out.reserve(out.size() + trajectory.steps.size() * 200);
  long k = 0;
  for (const Step& s : trajectory.steps) {
    out += std::to_string(++k);
    for (double x : {s.offer.x, s.offer.y}) {
      out += ',';
      append_real(out, x);
    }
    out += s.sign > 0 ? ",1" : ",-1";
    for (double x : {s.position.x, s.position.y, s.euclid_norm, s.t_pusher, s.t_chooser}) {
      out += ',';
      append_real(out, x);
    }
    out += '\n';
  }
  return out;
}

std::string gamma_to_string(const std::optional<double>& gamma) {
  if (!gamma) return "full";
  std::string out;
  append_real(out, *gamma);
  return out;
}

std::string_view value_def_name(ValueDef def) {
  return def == ValueDef::FinalNorm ? "final" : "maxprefix";
}

std::string summary_json(const Trajectory& t, const GameConfig& config) {
  using nlohmann::ordered_json;
  ordered_json j;
  ordered_json cfg;
  if (config.gamma) {
    cfg["gamma"] = *config.gamma;
  } else {
    cfg["gamma"] = "full";
  }
  cfg["n"] = config.n;
  cfg["pusher"] = to_string(config.pusher);
  cfg["chooser"] = to_string(config.chooser);
  cfg["alpha"] = effective_alpha(config);
  cfg["seed"] = config.seed;
  cfg["value_def"] = value_def_name(config.value_def);
  j["config"] = cfg;
  const double sqrt_n = std::sqrt(static_cast<double>(config.n));
  j["value"] = t.value(config.value_def);
  j["ratio"] = t.value(config.value_def) / sqrt_n;
  j["final_value"] = t.final_value;
  j["max_prefix_value"] = t.max_prefix_value;
  j["argmax_index"] = t.argmax_index;
  j["final_position"] = {t.final_position.x, t.final_position.y};
  j["final_tK"] = t.final_t_pusher;  // NaN dumps as null
  j["final_tD"] = t.final_t_chooser;
  j["final_tK_squared_over_n"] = t.final_t_pusher * t.final_t_pusher / config.n;
  return j.dump(2) + "\n";
}

GameConfig apply_override(GameConfig base, const ConfigOverride& o) {
  if (o.gamma) base.gamma = *o.gamma;
  if (o.n) base.n = *o.n;
  if (o.alpha) base.alpha = *o.alpha;
  if (o.pusher) base.pusher = *o.pusher;
  if (o.chooser) base.chooser = *o.chooser;
  return base;
}

namespace {

unsigned thread_count() {
  if (const char* env = std::getenv("BALANCE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

SweepTable sweep(const GameConfig& base, const std::vector<ConfigOverride>& grid,
                 int repetitions) {
  if (repetitions < 1) throw std::invalid_argument("sweep: repetitions must be >= 1");
  const std::vector<ConfigOverride> points = grid.empty() ? std::vector<ConfigOverride>(1) : grid;
  const std::size_t reps = static_cast<std::size_t>(repetitions);

  SweepTable table;
  table.cells.resize(points.size() * reps);
  for (std::size_t i = 0; i < table.cells.size(); ++i) {
    SweepCell& cell = table.cells[i];
    cell.point = i / reps;
    cell.repetition = static_cast<int>(i % reps);
    cell.config = apply_override(base, points[cell.point]);
    cell.config.seed = base.seed ^ static_cast<std::uint64_t>(i);
    cell.config.record_full = false;
  }

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < table.cells.size(); i = next++) {
      SweepCell& cell = table.cells[i];
      try {
        cell.result = play(cell.config);
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
    }
  };
  const unsigned threads =
      std::min<unsigned>(thread_count(), static_cast<unsigned>(table.cells.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  for (std::size_t p = 0; p < points.size(); ++p) {
    SweepAggregate agg;
    agg.point = p;
    agg.config = table.cells[p * reps].config;
    for (std::size_t r = 0; r < reps; ++r) {
      const SweepCell& cell = table.cells[p * reps + r];
      if (!cell.result) {
        ++agg.errors;
        continue;
      }
      const double sqrt_n = std::sqrt(static_cast<double>(cell.config.n));
      const double f = cell.result->final_value;
      const double m = cell.result->max_prefix_value;
      ++agg.games;
      agg.mean_final += f;
      agg.mean_max_prefix += m;
      agg.mean_final_ratio += f / sqrt_n;
      agg.mean_max_prefix_ratio += m / sqrt_n;
      agg.max_final = std::max(agg.max_final, f);
      agg.max_max_prefix = std::max(agg.max_max_prefix, m);
      agg.max_final_ratio = std::max(agg.max_final_ratio, f / sqrt_n);
      agg.max_max_prefix_ratio = std::max(agg.max_max_prefix_ratio, m / sqrt_n);
    }
    if (agg.games > 0) {
      agg.mean_final /= agg.games;
      agg.mean_max_prefix /= agg.games;
      agg.mean_final_ratio /= agg.games;
      agg.mean_max_prefix_ratio /= agg.games;
    }
    table.aggregates.push_back(agg);
  }
  return table;
}

std::string sweep_csv(const SweepTable& table) {
  std::string out =
      "point,rep,seed,gamma,n,alpha,pusher,chooser,final,max_prefix,final_ratio,"
      "max_prefix_ratio,error\n";
  for (const SweepCell& c : table.cells) {
    out += std::to_string(c.point) + ',' + std::to_string(c.repetition) + ',' +
           std::to_string(c.config.seed) + ',' + gamma_to_string(c.config.gamma) + ',' +
           std::to_string(c.config.n) + ',';
    append_real(out, effective_alpha(c.config));
    out += ",\"" + to_string(c.config.pusher) + "\",\"" + to_string(c.config.chooser) + "\",";
    if (c.result) {
      const double sqrt_n = std::sqrt(static_cast<double>(c.config.n));
      for (double x : {c.result->final_value, c.result->max_prefix_value,
                       c.result->final_value / sqrt_n, c.result->max_prefix_value / sqrt_n}) {
        append_real(out, x);
        out += ',';
      }
    } else {
      out += ",,,,";
    }
    std::string err = c.error;
    std::replace(err.begin(), err.end(), '"', '\'');
    out += '"' + err + "\"\n";
  }
  return out;
}

std::string sweep_aggregate_csv(const SweepTable& table) {
  std::string out =
      "point,gamma,n,alpha,pusher,chooser,games,errors,mean_final,max_final,mean_max_prefix,"
      "max_max_prefix,mean_final_ratio,max_final_ratio,mean_max_prefix_ratio,"
      "max_max_prefix_ratio\n";
  for (const SweepAggregate& a : table.aggregates) {
    out += std::to_string(a.point) + ',' + gamma_to_string(a.config.gamma) + ',' +
           std::to_string(a.config.n) + ',';
    append_real(out, effective_alpha(a.config));
    out += ",\"" + to_string(a.config.pusher) + "\",\"" + to_string(a.config.chooser) + "\"," +
           std::to_string(a.games) + ',' + std::to_string(a.errors);
    for (double x : {a.mean_final, a.max_final, a.mean_max_prefix, a.max_max_prefix,
                     a.mean_final_ratio, a.max_final_ratio, a.mean_max_prefix_ratio,
                     a.max_max_prefix_ratio}) {
      out += ',';
      append_real(out, x);
    }
    out += '\n';
  }
  return out;
}

}  // namespace balance
