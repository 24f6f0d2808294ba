#include "balance/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "balance/errors.hpp"

namespace balance {

GameParams GameParams::make(double gamma, double alpha) {
  if (!(gamma > 0.0 && gamma <= kMaxConeGamma)) {
    throw std::invalid_argument("GameParams: gamma must lie in (0, 0.85], got " +
                                std::to_string(gamma));
  }
  if (!(alpha > 0.0 && std::isfinite(alpha))) {
    throw std::invalid_argument("GameParams: alpha must be positive, got " +
                                std::to_string(alpha));
  }
  const double r = (1.0 + alpha) / std::sin(gamma);
  const double beta = r * (r - 1.0);
  const double t_star = std::cos(gamma) / alpha;
  if (!(t_star > 1.0 / std::sqrt(2.0 * beta))) {
    throw std::invalid_argument("GameParams: t* outside the monotone domain of the recursion");
  }
  return GameParams{gamma,
                    alpha,
                    beta,
                    t_star,
                    ConePair{cone_ratio(alpha, gamma)},
                    LensBody::pusher_body(gamma),
                    LensBody::chooser_body(alpha, gamma)};
}

double cone_ratio(double alpha, double gamma) {
  const double cot = std::cos(gamma) / std::sin(gamma);
  return std::max(0.0, ((1.0 + alpha) * cot - 1.0) / (1.0 + alpha));
}

Point2 tangency_corner(double alpha, double gamma, double t) {
  const double cot = std::cos(gamma) / std::sin(gamma);
  return {t * (1.0 + alpha), t * ((1.0 + alpha) * cot - 1.0)};
}

Point2 pusher_tangent(Point2 z, const GameParams& params) {
  if (z.x == 0.0 && z.y == 0.0) {
    return {1.0, 0.0};
  }
  const Point2 v = tangent_direction(z, params.pusher_body);
  if (std::abs(std::atan2(v.y, v.x)) > params.gamma + kOfferTolerance) {
    throw InvariantError("pusher_tangent: tangent direction left S^gamma");
  }
  return v;
}

Point2 pusher_perpendicular(Point2 z) {
  if (z.x == 0.0 && z.y == 0.0) {
    return {1.0, 0.0};
  }
  const double len = norm(z);
  return canonical_direction(Point2{-z.y / len, z.x / len});
}

Point2 pusher_random(Rng& rng, double half_angle) {
  return unit_vector(-half_angle + 2.0 * half_angle * rng.uniform());
}

int chooser_cone(Point2 z, Point2 v, const GameParams& params) {
  if (std::abs(std::atan2(std::abs(v.y), std::abs(v.x))) > params.gamma + kOfferTolerance) {
    throw std::invalid_argument("chooser_cone: offer outside S^gamma");
  }
  const Point2 offer = canonical_direction(v);
  const double t = lens_norm(z, params.chooser_body);
  if (t < params.t_star) {
    return chooser_greedy_lens(z, offer, params.chooser_body);
  }
  if (cone_classify(z, params.cone) != Cone::C2) {
    // Pull toward the y-axis side of the origin; z.x != 0 above threshold.
    return z.x > 0.0 ? -1 : 1;
  }
  const Point2 radial = z - binding_center(z, params.chooser_body, t);
  return dot(radial, offer) > 0.0 ? -1 : 1;
}

int chooser_greedy_euclid(Point2 z, Point2 v) { return dot(z, v) > 0.0 ? -1 : 1; }

int chooser_greedy_lens(Point2 z, Point2 v, const LensBody& body) {
  return lens_norm(z + v, body) <= lens_norm(z - v, body) ? 1 : -1;
}

int chooser_random(Rng& rng) { return rng.sign(); }

namespace {

std::vector<Point2> angle_grid(double half_angle, int grid) {
  std::vector<Point2> offers;
  offers.reserve(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) {
    const double angle =
        grid == 1 ? 0.0 : -half_angle + 2.0 * half_angle * static_cast<double>(i) / (grid - 1);
    offers.push_back(unit_vector(angle));
  }
  return offers;
}

// Squared norm after `rounds` rounds of optimal play starting with Pusher.
double pusher_to_move(Point2 z, int rounds, const std::vector<Point2>& offers) {
  if (rounds == 0) {
    return norm_squared(z);
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const Point2& v : offers) {
    const double worst = std::min(pusher_to_move(z + v, rounds - 1, offers),
                                  pusher_to_move(z - v, rounds - 1, offers));
    best = std::max(best, worst);
  }
  return best;
}

}  // namespace

double lookahead_nodes(int depth, int grid) { return std::pow(2.0 * grid, depth); }

void check_lookahead_budget(int depth, int grid) {
  if (depth < 1 || depth > kMaxLookaheadDepth || grid < 1 || grid > kMaxLookaheadGrid) {
    throw std::invalid_argument("lookahead: need depth in [1,4] and grid in [1,64]");
  }
  if (lookahead_nodes(depth, grid) > kLookaheadNodeBudget) {
    throw BudgetError("lookahead: (2*grid)^depth exceeds 1e8 nodes");
  }
}

Point2 pusher_lookahead(Point2 z, double half_angle, int depth, int grid) {
  check_lookahead_budget(depth, grid);
  const auto offers = angle_grid(half_angle, grid);
  std::size_t best_index = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < offers.size(); ++i) {
    const double worst = std::min(pusher_to_move(z + offers[i], depth - 1, offers),
                                  pusher_to_move(z - offers[i], depth - 1, offers));
    if (worst > best) {
      best = worst;
      best_index = i;
    }
  }
  return offers[best_index];
}

int chooser_lookahead(Point2 z, Point2 v, double half_angle, int depth, int grid) {
  check_lookahead_budget(depth, grid);
  const auto offers = angle_grid(half_angle, grid);
  const double plus = pusher_to_move(z + v, depth - 1, offers);
  const double minus = pusher_to_move(z - v, depth - 1, offers);
  return plus <= minus ? 1 : -1;
}

double OfferArc::grid_half_angle() const {
  return full_circle ? std::numbers::pi / 2.0 : half_angle;
}

bool OfferArc::admits(Point2 v, double tol) const {
  if (std::abs(norm(v) - 1.0) > 1e-12) return false;
  if (full_circle) return true;
  const Point2 c = canonical_direction(v);
  return std::abs(std::atan2(c.y, c.x)) <= half_angle + tol;
}

namespace {

int lookahead_depth(const PolicySpec& spec) {
  return static_cast<int>(spec.int_param("depth").value_or(2));
}
int lookahead_grid(const PolicySpec& spec) {
  return static_cast<int>(spec.int_param("grid").value_or(17));
}

// Random policies draw from their own stream when the spec names a seed.
class RandomSource {
public:
  RandomSource(const PolicySpec& spec, Rng* shared) : shared_(shared) {
    if (auto seed = spec.seed_param()) {
      own_.emplace(*seed);
    } else if (shared_ == nullptr) {
      throw ConfigError("random policy needs a seed or a game RNG stream");
    }
  }
  Rng& get() { return own_ ? *own_ : *shared_; }

private:
  std::optional<Rng> own_;
  Rng* shared_;
};

const GameParams& require_params(const PolicyContext& ctx, const PolicySpec& spec) {
  if (ctx.params == nullptr) {
    throw ConfigError(std::string(policy_name(spec.kind)) +
                      " needs a cone game (0 < gamma <= 0.85), not the full circle");
  }
  return *ctx.params;
}

class TangentPusher final : public Pusher {
public:
  explicit TangentPusher(GameParams p) : params_(std::move(p)) {}
  Point2 offer(Point2 z) override { return pusher_tangent(z, params_); }

private:
  GameParams params_;
};

class PerpendicularPusher final : public Pusher {
public:
  Point2 offer(Point2 z) override { return pusher_perpendicular(z); }
};

class RandomPusher final : public Pusher {
public:
  RandomPusher(RandomSource source, double half_angle)
      : source_(std::move(source)), half_angle_(half_angle) {}
  Point2 offer(Point2) override { return pusher_random(source_.get(), half_angle_); }

private:
  RandomSource source_;
  double half_angle_;
};

class LookaheadPusher final : public Pusher {
public:
  LookaheadPusher(double half_angle, int depth, int grid)
      : half_angle_(half_angle), depth_(depth), grid_(grid) {}
  Point2 offer(Point2 z) override { return pusher_lookahead(z, half_angle_, depth_, grid_); }

private:
  double half_angle_;
  int depth_;
  int grid_;
};

class ConeChooser final : public Chooser {
public:
  explicit ConeChooser(GameParams p) : params_(std::move(p)) {}
  int choose(Point2 z, Point2 v) override { return chooser_cone(z, v, params_); }

private:
  GameParams params_;
};

class GreedyEuclidChooser final : public Chooser {
public:
  int choose(Point2 z, Point2 v) override { return chooser_greedy_euclid(z, v); }
};

class GreedyLensChooser final : public Chooser {
public:
  explicit GreedyLensChooser(LensBody body) : body_(body) {}
  int choose(Point2 z, Point2 v) override { return chooser_greedy_lens(z, v, body_); }

private:
  LensBody body_;
};

class RandomChooser final : public Chooser {
public:
  explicit RandomChooser(RandomSource source) : source_(std::move(source)) {}
  int choose(Point2, Point2) override { return chooser_random(source_.get()); }

private:
  RandomSource source_;
};

class LookaheadChooser final : public Chooser {
public:
  LookaheadChooser(double half_angle, int depth, int grid)
      : half_angle_(half_angle), depth_(depth), grid_(grid) {}
  int choose(Point2 z, Point2 v) override {
    return chooser_lookahead(z, v, half_angle_, depth_, grid_);
  }

private:
  double half_angle_;
  int depth_;
  int grid_;
};

}  // namespace

std::unique_ptr<Pusher> make_pusher(const PolicySpec& spec, const PolicyContext& ctx) {
  switch (spec.kind) {
    case PolicyKind::TangentPusher:
      return std::make_unique<TangentPusher>(require_params(ctx, spec));
    case PolicyKind::PerpendicularPusher:
      if (!ctx.arc.full_circle) {
        throw ConfigError("perpendicular pusher is only legal in the full-circle game");
      }
      return std::make_unique<PerpendicularPusher>();
    case PolicyKind::RandomPusher:
      return std::make_unique<RandomPusher>(RandomSource(spec, ctx.game_rng),
                                            ctx.arc.grid_half_angle());
    case PolicyKind::LookaheadPusher: {
      const int depth = lookahead_depth(spec);
      const int grid = lookahead_grid(spec);
      check_lookahead_budget(depth, grid);
      return std::make_unique<LookaheadPusher>(ctx.arc.grid_half_angle(), depth, grid);
    }
    default:
      throw ConfigError(std::string(policy_name(spec.kind)) + " is not a pusher policy");
  }
}

std::unique_ptr<Chooser> make_chooser(const PolicySpec& spec, const PolicyContext& ctx) {
  switch (spec.kind) {
    case PolicyKind::ConeChooser: {
      const GameParams& params = require_params(ctx, spec);
      const double alpha = spec.real_param("alpha").value_or(params.alpha);
      return std::make_unique<ConeChooser>(
          alpha == params.alpha ? params : GameParams::make(params.gamma, alpha));
    }
    case PolicyKind::GreedyEuclidChooser:
      return std::make_unique<GreedyEuclidChooser>();
    case PolicyKind::GreedyLensChooser: {
      const GameParams& params = require_params(ctx, spec);
      const auto body = spec.params.find("body");
      if (body != spec.params.end() && body->second == "K") {
        return std::make_unique<GreedyLensChooser>(params.pusher_body);
      }
      const double alpha = spec.real_param("alpha").value_or(params.alpha);
      return std::make_unique<GreedyLensChooser>(LensBody::chooser_body(alpha, params.gamma));
    }
    case PolicyKind::RandomChooser:
      return std::make_unique<RandomChooser>(RandomSource(spec, ctx.game_rng));
    case PolicyKind::LookaheadChooser: {
      const int depth = lookahead_depth(spec);
      const int grid = lookahead_grid(spec);
      check_lookahead_budget(depth, grid);
      return std::make_unique<LookaheadChooser>(ctx.arc.grid_half_angle(), depth, grid);
    }
    default:
      throw ConfigError(std::string(policy_name(spec.kind)) + " is not a chooser policy");
  }
}

}  // namespace balance
