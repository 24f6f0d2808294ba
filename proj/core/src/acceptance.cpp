#include "balance/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "balance/analysis.hpp"
#include "balance/engine.hpp"
#include "balance/geometry.hpp"
#include "balance/oracle.hpp"
#include "balance/search1d.hpp"
#include "balance/strategies.hpp"

namespace balance::acceptance {
namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;

std::string format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

class Recorder {
public:
  Recorder(int id, std::string title) : result_{id, std::move(title), {}} {}
  bool expect(bool ok, std::string description) {
    result_.checks.push_back({std::move(description), ok});
    return ok;
  }
  CriterionResult take() { return std::move(result_); }

private:
  CriterionResult result_;
};

GameConfig make_config(std::optional<double> gamma, long n, const std::string& pusher,
                       const std::string& chooser) {
  GameConfig c;
  c.gamma = gamma;
  c.n = n;
  c.pusher = parse_pusher_spec(pusher);
  c.chooser = parse_chooser_spec(chooser);
  c.seed = 1;
  return c;
}

// Plays a game and checks replay closure; returns nullopt after recording a
// failure if the game throws.
std::optional<Trajectory> play_checked(Recorder& rec, const GameConfig& cfg,
                                       ValidationReport* report_out = nullptr) {
  const std::string label = to_string(cfg.pusher) + " vs " + to_string(cfg.chooser);
  try {
    Trajectory t = play(cfg);
    const ValidationReport rep = validate(t, cfg);
    rec.expect(rep.max_replay_deviation <= 1e-12 && rep.illegal_offers == 0,
               format("%s: replay deviation %.3g, illegal offers %ld", label.c_str(),
                      rep.max_replay_deviation, rep.illegal_offers));
    if (report_out != nullptr) *report_out = rep;
    return t;
  } catch (const std::exception& e) {
    rec.expect(false, label + ": game failed: " + e.what());
    return std::nullopt;
  }
}

std::vector<std::string> pusher_floor_opponents() {
  std::vector<std::string> ops{"greedy-euclid", "greedy-lens:body=K", "greedy-lens"};
  for (int s = 1; s <= 5; ++s) ops.push_back("random:seed=" + std::to_string(s));
  ops.push_back("lookahead:depth=2,grid=17");
  return ops;
}

CriterionResult pusher_floor_criterion(const Options&) {
  Recorder rec(1, "Pusher floor: |z_k|_K^2 >= k and |z_n| >= (sqrt2-1) sqrt n at gamma=pi/4");
  const long n = 10'000;
  for (const auto& chooser : pusher_floor_opponents()) {
    const GameConfig cfg = make_config(kQuarterPi, n, "tangent", chooser);
    const auto t = play_checked(rec, cfg);
    if (!t) continue;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= t->steps.size(); ++k) {
      const double tk = t->steps[k - 1].t_pusher;
      worst = std::min(worst, tk * tk - static_cast<double>(k));
    }
    rec.expect(worst >= -1e-6, format("vs %s: min_k (tK^2 - k) = %.3g >= -1e-6", chooser.c_str(),
                                      worst));
    const double floor = (std::numbers::sqrt2 - 1.0) * std::sqrt(static_cast<double>(n));
    rec.expect(t->final_value >= floor - 1e-9,
               format("vs %s: |z_n| = %.6f >= %.6f", chooser.c_str(), t->final_value, floor));
  }
  return rec.take();
}

struct CeilingRun {
  std::string pusher;
  std::optional<Trajectory> trajectory;
  ValidationReport report;
};

std::vector<CeilingRun> ceiling_runs(Recorder& rec, long n) {
  std::vector<std::string> pushers{"tangent"};
  for (int s = 1; s <= 5; ++s) pushers.push_back("random:seed=" + std::to_string(s));
  pushers.push_back("lookahead:depth=2,grid=17");
  std::vector<CeilingRun> runs;
  for (const auto& p : pushers) {
    CeilingRun run{p, std::nullopt, {}};
    run.trajectory = play_checked(rec, make_config(kQuarterPi, n, p, "cone:alpha=star"), &run.report);
    runs.push_back(std::move(run));
  }
  return runs;
}

long ceiling_length(const Options& o) { return o.fast ? 20'000 : 100'000; }

CriterionResult chooser_ceiling_criterion(const Options& options) {
  Recorder rec(2, "Chooser ceiling: cone(alpha*) keeps |z_n| <= 0.99 sqrt n, norm envelope, radius bound");
  const long n = ceiling_length(options);
  const double alpha = alpha_star_closed_form();
  const GameParams params = GameParams::make(kQuarterPi, alpha);
  const double cap = t_cap(alpha, kQuarterPi);
  const RadiusBound bound = radius_bound(alpha, kQuarterPi, n, cap);
  for (const CeilingRun& run : ceiling_runs(rec, n)) {
    if (!run.trajectory) continue;
    const Trajectory& t = *run.trajectory;
    const char* who = run.pusher.c_str();
    const double ratio = t.final_value / std::sqrt(static_cast<double>(n));
    rec.expect(ratio <= 0.99, format("%s: |z_n|/sqrt n = %.5f <= 0.99", who, ratio));

    double late_ratio = 0.0;
    double envelope_excess = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= t.steps.size(); ++k) {
      const Step& s = t.steps[k - 1];
      const double kd = static_cast<double>(k);
      if (k >= 1000) late_ratio = std::max(late_ratio, s.euclid_norm / std::sqrt(kd));
      const double env = cap * cap + kd / params.beta + std::log(kd) / (4.0 * params.beta);
      envelope_excess = std::max(envelope_excess, s.t_chooser * s.t_chooser - env);
    }
    rec.expect(late_ratio <= 1.0,
               format("%s: max_{k>=1000} |z_k|/sqrt k = %.5f <= 1.0", who, late_ratio));
    rec.expect(envelope_excess <= 1e-9,
               format("%s: max_k tD^2 - (t+^2 + k/beta + ln k/(4 beta)) = %.4g <= 1e-9", who,
                      envelope_excess));
    rec.expect(t.max_prefix_value < bound.d_n + 1.0,
               format("%s: max_j |z_j| = %.4f < d_n + 1 = %.4f", who, t.max_prefix_value,
                      bound.d_n + 1.0));
  }
  return rec.take();
}

CriterionResult step_bound_criterion(const Options& options) {
  Recorder rec(3, "Per-step bound: t_next <= t + 1/(2 beta t) whenever t >= t*");
  for (const CeilingRun& run : ceiling_runs(rec, ceiling_length(options))) {
    if (!run.trajectory) continue;
    rec.expect(run.report.step_bound_checked > 0 && run.report.step_bound_breaches == 0,
               format("%s: %ld breaches over %ld steps above t* (worst excess %.3g)",
                      run.pusher.c_str(), run.report.step_bound_breaches, run.report.step_bound_checked,
                      run.report.step_bound_worst_excess));
  }
  return rec.take();
}

CriterionResult constants_criterion(const Options&) {
  Recorder rec(4, "Constants: alpha*, beta, t*, t+, sqrt n coefficient");
  using P = PrintedConstants;
  const double alpha = optimal_alpha();
  const double beta = beta_of_alpha(alpha);
  const double t_star = threshold_t_star(alpha, kQuarterPi);
  const double cap = t_cap(alpha, kQuarterPi);
  const double coeff = std::sqrt(chooser_objective(alpha));
  rec.expect(std::abs(alpha - P::alpha_star) <= 1e-5,
             format("optimal alpha %.9f vs 2.013669 (tol 1e-5)", alpha));
  rec.expect(std::abs(alpha - alpha_star_closed_form()) <= 1e-6,
             format("optimal alpha %.10f vs closed form %.10f (tol 1e-6)", alpha,
                    alpha_star_closed_form()));
  rec.expect(std::abs(beta - P::beta) <= 1e-2,
             format("beta %.6f vs printed 13.895312 (tol 1e-2)", beta));
  rec.expect(std::abs(t_star - P::t_star) <= 5e-4,
             format("t* %.6f vs printed 0.351272 (tol 5e-4)", t_star));
  rec.expect(std::abs(cap - P::t_cap) <= 5e-3,
             format("t+ %.6f vs printed 0.511187 (tol 5e-3)", cap));
  rec.expect(std::abs(coeff - P::coeff) <= 2e-3,
             format("coefficient %.6f vs printed 0.972112 (tol 2e-3)", coeff));
  return rec.take();
}

CriterionResult gamma_threshold_criterion(const Options&) {
  Recorder rec(5, "Gamma threshold: gamma0 = 0.7967, min F(.,0.85) > 1, min F(.,0.3) < 1");
  const double g0 = gamma_threshold();
  const double degrees = g0 * 180.0 / std::numbers::pi;
  rec.expect(std::abs(g0 - PrintedConstants::gamma0) <= 2e-3,
             format("gamma0 %.6f rad vs 0.7967 (tol 2e-3)", g0));
  rec.expect(std::abs(degrees - PrintedConstants::gamma0_degrees) <= 2e-3 * 180.0 / std::numbers::pi,
             format("gamma0 %.4f deg vs 45.64", degrees));
  const AlphaMinimum hi = min_F_over_alpha(0.85);
  const AlphaMinimum lo = min_F_over_alpha(0.3);
  rec.expect(hi.F > 1.0, format("min_alpha F(alpha, 0.85) = %.6f > 1", hi.F));
  rec.expect(lo.F < 1.0, format("min_alpha F(alpha, 0.3) = %.6f < 1", lo.F));
  return rec.take();
}

CriterionResult norm_extremes_criterion(const Options&) {
  Recorder rec(6, "Norm extremes of unit offers in K: min 1 at 0, max (sqrt2+sqrt6)/2 at pi/4");
  const LensBody k = LensBody::k_body();
  const auto norm_at = [&](double phi) { return lens_norm(unit_vector(phi), k); };
  const auto min = golden_section_minimize(norm_at, -kQuarterPi, kQuarterPi, 1e-12);
  const auto max = golden_section_minimize([&](double phi) { return -norm_at(phi); }, 0.0,
                                           kQuarterPi, 1e-12);
  const double expected_max = (std::numbers::sqrt2 + std::sqrt(6.0)) / 2.0;
  rec.expect(std::abs(min.value - 1.0) <= 1e-9 && std::abs(min.x) <= 1e-6,
             format("min |v|_K = %.12f at phi = %.3g", min.value, min.x));
  rec.expect(std::abs(-max.value - expected_max) <= 1e-9 && max.x >= kQuarterPi - 1e-6,
             format("max |v|_K = %.12f at phi = %.9f (expected %.12f)", -max.value, max.x,
                    expected_max));
  rec.expect(std::abs(norm_at(-kQuarterPi) - expected_max) <= 1e-12,
             format("|v|_K at phi = -pi/4 is %.12f", norm_at(-kQuarterPi)));
  return rec.take();
}

CriterionResult containment_criterion(const Options&) {
  Recorder rec(7, "Containment: sqrt(t^2+1) K inside D(t, sqrt(2t^2+1))");
  const LensBody k = LensBody::k_body();
  double worst = std::numeric_limits<double>::infinity();
  double worst_t = 0.0;
  for (int i = 0; i < 30; ++i) {
    const double t = 0.1 * std::pow(1e4, i / 29.0);
    const LensBody outer(t, std::sqrt(2.0 * t * t + 1.0));
    const double m = lens_in_lens_margin(k, std::sqrt(t * t + 1.0), outer, 1.0, 10'000);
    if (m < worst) {
      worst = m;
      worst_t = t;
    }
  }
  rec.expect(worst >= -1e-9,
             format("min margin over 30 t in [0.1, 1000] = %.3g (at t = %.4g) >= -1e-9", worst,
                    worst_t));
  return rec.take();
}

CriterionResult general_pusher_criterion(const Options&) {
  Recorder rec(8, "Pusher floor in (S^gamma, B): |z_n| >= (1 - cos gamma) sqrt n");
  const long n = 10'000;
  for (double gamma : {0.3, 0.6}) {
    const auto t = play_checked(rec, make_config(gamma, n, "tangent", "greedy-euclid"));
    if (!t) continue;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= t->steps.size(); ++k) {
      const double tk = t->steps[k - 1].t_pusher;
      worst = std::min(worst, tk * tk - static_cast<double>(k));
    }
    const double floor = pusher_floor(gamma) * std::sqrt(static_cast<double>(n));
    rec.expect(t->final_value >= floor - 1e-6,
               format("gamma %.1f: |z_n| = %.6f >= %.6f", gamma, t->final_value, floor));
    rec.expect(worst >= -1e-6, format("gamma %.1f: min_k (tK^2 - k) = %.3g", gamma, worst));
  }
  return rec.take();
}

CriterionResult oracle_sandwich_criterion(const Options& options) {
  Recorder rec(9, "Minimax sandwich (sqrt2-1) sqrt n - 0.5 <= value <= sqrt n; grid monotone");
  const int max_n = options.fast ? 5 : 6;
  for (int n = 2; n <= max_n; ++n) {
    try {
      const auto r =
          oracle::minimax_value(oracle::MinimaxSpec::make(n, 17, kQuarterPi, ValueDef::FinalNorm));
      const double lo = (std::numbers::sqrt2 - 1.0) * std::sqrt(n) - 0.5;
      const double hi = std::sqrt(n);
      rec.expect(r.value >= lo && r.value <= hi + 1e-12,
                 format("n=%d grid=17: %.6f in [%.6f, %.6f] (%llu nodes)", n, r.value, lo, hi,
                        static_cast<unsigned long long>(r.nodes)));
      if (n == 2) {
        rec.expect(std::abs(r.value - std::numbers::sqrt2) <= 1e-9,
                   format("n=2 value %.12f = sqrt 2", r.value));
      }
    } catch (const std::exception& e) {
      rec.expect(false, format("n=%d: %s", n, e.what()));
    }
  }
  const int refine_n = options.fast ? 3 : 4;
  for (int n = 1; n <= refine_n; ++n) {
    double previous = -1.0;
    for (int grid : {9, 17, 33}) {
      const double v =
          oracle::minimax_value(oracle::MinimaxSpec::make(n, grid, kQuarterPi, ValueDef::FinalNorm))
              .value;
      rec.expect(v >= previous,
                 format("n=%d grid=%d: %.9f >= coarser grid %.9f", n, grid, v, previous));
      previous = v;
    }
  }
  return rec.take();
}

CriterionResult norm_oracle_criterion(const Options& options) {
  Recorder rec(10, "Closed-form lens norm equals the bisection oracle within 1e-9");
  const double alpha = alpha_star_closed_form();
  const struct {
    const char* name;
    LensBody body;
  } bodies[] = {
      {"K", LensBody::k_body()},
      {"D(alpha*)", LensBody::chooser_body(alpha, kQuarterPi)},
      {"K^0.6", LensBody::pusher_body(0.6)},
      {"D^0.6(1)", LensBody::chooser_body(1.0, 0.6)},
  };
  const int samples = options.fast ? 2'500 : 10'000;
  std::mt19937_64 rng(20240607);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  for (const auto& b : bodies) {
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
      const Point2 z{coord(rng), coord(rng)};
      worst = std::max(worst,
                       std::abs(lens_norm(z, b.body) - oracle::lens_norm_bisect(z, b.body, 1e-12)));
    }
    rec.expect(worst <= 1e-9, format("%s: max deviation %.3g over %d points", b.name, worst, samples));
  }
  return rec.take();
}

CriterionResult recursion_criterion(const Options& options) {
  Recorder rec(11, "Recursion envelopes: lower always, upper for t_h in [t*, t+]");
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> th_dist(0.1, 5.0);
  std::uniform_real_distribution<double> beta_dist(0.5, 50.0);
  std::uniform_int_distribution<long> h_dist(1, 10);
  double worst_lower = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 100; ++trial) {
    const double t_h = th_dist(rng);
    const long h = h_dist(rng);
    const double beta = beta_dist(rng);
    double t = t_h;
    for (long k = h + 1; k <= h + 10'000; ++k) {
      t += 1.0 / (2.0 * beta * t);
      const double lower = recursion_envelope(t_h, h, k, beta).lower;
      worst_lower = std::min(worst_lower, (t * t - lower) / std::max(1.0, lower));
    }
  }
  rec.expect(worst_lower >= -1e-12,
             format("lower envelope: min relative slack %.3g over 100 draws", worst_lower));

  const double alpha = alpha_star_closed_form();
  const double beta = beta_of_alpha(alpha);
  const double t_star = threshold_t_star(alpha, kQuarterPi);
  const double cap = t_cap(alpha, kQuarterPi);
  const long k_max = options.fast ? 100'000 : 1'000'000;
  double worst_upper = -std::numeric_limits<double>::infinity();
  for (long h : {1L, 2L, 10L, 1000L}) {
    for (int i = 0; i <= 10; ++i) {
      const double t_h = t_star + (cap - t_star) * i / 10.0;
      double t = t_h;
      for (long k = h + 1; k <= k_max; ++k) {
        t += 1.0 / (2.0 * beta * t);
        const double kd = static_cast<double>(k);
        const double upper = t_h * t_h + static_cast<double>(k - h) / beta +
                             std::log(std::max(kd, 2.0)) / (4.0 * beta);
        worst_upper = std::max(worst_upper, t * t - upper);
      }
    }
  }
  rec.expect(worst_upper <= 1e-9,
             format("upper envelope (t_h in [t*, t+], k <= %ld): max excess %.3g", k_max,
                    worst_upper));
  return rec.take();
}

}  // namespace

bool CriterionResult::passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

CriterionResult run_criterion(int id, const Options& options) {
  switch (id) {
    case 1: return pusher_floor_criterion(options);
    case 2: return chooser_ceiling_criterion(options);
    case 3: return step_bound_criterion(options);
    case 4: return constants_criterion(options);
    case 5: return gamma_threshold_criterion(options);
    case 6: return norm_extremes_criterion(options);
    case 7: return containment_criterion(options);
    case 8: return general_pusher_criterion(options);
    case 9: return oracle_sandwich_criterion(options);
    case 10: return norm_oracle_criterion(options);
    case 11: return recursion_criterion(options);
    default: throw std::out_of_range("no acceptance criterion " + std::to_string(id));
  }
}

std::vector<CriterionResult> run_all(const Options& options) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id, options));
  return out;
}

std::string format_report(const std::vector<CriterionResult>& results, bool verbose) {
  std::string out;
  for (const auto& r : results) {
    out += format("[%s] C%-2d %s\n", r.passed() ? "PASS" : "FAIL", r.id, r.title.c_str());
    for (const auto& c : r.checks) {
      if (verbose || !c.passed) {
        out += format("         %s %s\n", c.passed ? "ok  " : "FAIL", c.description.c_str());
      }
    }
  }
  return out;
}

}  // namespace balance::acceptance
