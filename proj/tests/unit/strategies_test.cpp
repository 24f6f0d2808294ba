#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "balance/analysis.hpp"
#include "balance/errors.hpp"
#include "balance/strategies.hpp"
#include "generators.hpp"

namespace balance {
namespace {

constexpr double kQuarterPi = std::numbers::pi / 4;
constexpr double kSqrt2 = std::numbers::sqrt2;

void expect_point_near(Point2 actual, Point2 expected, double tol) {
  EXPECT_NEAR(actual.x, expected.x, tol);
  EXPECT_NEAR(actual.y, expected.y, tol);
}

GameParams star_params() { return GameParams::make(kQuarterPi, alpha_star_closed_form()); }

TEST(GameParams, QuarterPiInvariants) {
  for (const double alpha : {0.5, 1.0, alpha_star_closed_form(), 7.0}) {
    const GameParams p = GameParams::make(kQuarterPi, alpha);
    EXPECT_NEAR(p.beta, 2.0 * (alpha + 1) * (alpha + 1) - kSqrt2 * (alpha + 1), 1e-12 * p.beta);
    EXPECT_NEAR(p.t_star, 1.0 / (kSqrt2 * alpha), 1e-15);
    EXPECT_NEAR(p.pusher_body.a(), 1.0, 1e-15);
    EXPECT_NEAR(p.pusher_body.R(), kSqrt2, 1e-15);
    EXPECT_NEAR(p.chooser_body.R(), kSqrt2 * (alpha + 1), 1e-14);
    EXPECT_GT(p.t_star, 1.0 / std::sqrt(2.0 * p.beta));
    EXPECT_NEAR(p.cone.rho, alpha / (1.0 + alpha), 1e-15);
  }
}

TEST(GameParams, GeneralGamma) {
  const GameParams p = GameParams::make(0.6, 1.0);
  const double r = 2.0 / std::sin(0.6);
  EXPECT_NEAR(p.beta, r * (r - 1), 1e-12);
  EXPECT_NEAR(p.t_star, std::cos(0.6), 1e-15);
  EXPECT_NEAR(p.pusher_body.a(), std::cos(0.6) / std::sin(0.6), 1e-15);
  EXPECT_NEAR(p.pusher_body.R(), 1.0 / std::sin(0.6), 1e-15);
  EXPECT_DOUBLE_EQ(p.cone.rho, cone_ratio(1.0, 0.6));
}

TEST(GameParams, RejectsOutOfRange) {
  EXPECT_THROW(GameParams::make(0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(GameParams::make(0.86, 1.0), std::invalid_argument);
  EXPECT_THROW(GameParams::make(kQuarterPi, 0.0), std::invalid_argument);
  EXPECT_THROW(GameParams::make(kQuarterPi, -2.0), std::invalid_argument);
  EXPECT_NO_THROW(GameParams::make(kMaxConeGamma, 1.0));
}

TEST(ConeRatio, TangencyCornerIsOnChooserBoundaryAndConeEdge) {
  for (const double gamma : {0.3, 0.6, kQuarterPi}) {
    const double alpha = 1.3;
    const GameParams p = GameParams::make(gamma, alpha);
    const Point2 c = tangency_corner(alpha, gamma, 2.0);
    EXPECT_NEAR(lens_norm(c, p.chooser_body), 2.0, 1e-12);
    EXPECT_NEAR(c.y, p.cone.rho * c.x, 1e-12);
  }
}

TEST(PusherTangent, Examples) {
  const GameParams p = star_params();
  EXPECT_EQ(pusher_tangent({0.0, 0.0}, p), Point2(1.0, 0.0));
  expect_point_near(pusher_tangent({1.0, 0.0}, p), {1 / kSqrt2, -1 / kSqrt2}, 1e-15);
  expect_point_near(pusher_tangent({0.0, kSqrt2 - 1}, p), {1.0, 0.0}, 1e-15);
}

TEST(PusherPerpendicular, Examples) {
  EXPECT_EQ(pusher_perpendicular({0.0, 0.0}), Point2(1.0, 0.0));
  expect_point_near(pusher_perpendicular({0.0, 3.0}), {1.0, 0.0}, 1e-15);
  expect_point_near(pusher_perpendicular({1.0, 1.0}), {1 / kSqrt2, -1 / kSqrt2}, 1e-15);
}

TEST(ChooserCone, Examples) {
  const GameParams p = star_params();
  EXPECT_EQ(chooser_cone({5.0, 0.0}, {1.0, 0.0}, p), -1);
  EXPECT_EQ(chooser_cone({-5.0, 0.0}, {1.0, 0.0}, p), 1);
  EXPECT_EQ(chooser_cone({0.0, 5.0}, unit_vector(0.2), p), -1);
  EXPECT_EQ(chooser_cone({0.0, -5.0}, unit_vector(0.2), p), 1);
  // Below t* the cone chooser defers to the greedy lens chooser.
  const Point2 small{0.01, 0.01};
  EXPECT_LT(lens_norm(small, p.chooser_body), p.t_star);
  EXPECT_EQ(chooser_cone(small, {1.0, 0.0}, p), -1);
  EXPECT_EQ(chooser_cone(small, {1.0, 0.0}, p),
            chooser_greedy_lens(small, {1.0, 0.0}, p.chooser_body));
  EXPECT_THROW(chooser_cone({1.0, 0.0}, unit_vector(1.0), p), std::invalid_argument);
}

TEST(ChooserGreedy, Examples) {
  EXPECT_EQ(chooser_greedy_euclid({3.0, 0.0}, {1.0, 0.0}), -1);
  EXPECT_EQ(chooser_greedy_euclid({0.0, 0.0}, unit_vector(0.4)), 1);
  EXPECT_EQ(chooser_greedy_euclid({1.0, 1.0}, {1 / kSqrt2, -1 / kSqrt2}), 1);

  const LensBody k = LensBody::k_body();
  EXPECT_EQ(chooser_greedy_lens({3.0, 0.0}, {1.0, 0.0}, k), -1);
  EXPECT_EQ(chooser_greedy_lens({0.0, 0.0}, {1.0, 0.0}, k), 1);
  EXPECT_EQ(chooser_greedy_lens({0.0, 2.0}, unit_vector(0.1), star_params().chooser_body), -1);
}

TEST(RandomPolicies, AreDeterministicPerSeed) {
  Rng a(42), b(42);
  const Point2 va = pusher_random(a, kQuarterPi);
  const Point2 vb = pusher_random(b, kQuarterPi);
  EXPECT_EQ(va, vb);
  EXPECT_LE(std::abs(std::atan2(va.y, va.x)), kQuarterPi);
  EXPECT_EQ(chooser_random(a), chooser_random(b));

  Rng c(42);
  expect_point_near(pusher_random(c, 1e-12), {1.0, 0.0}, 1e-12);

  std::set<int> seen;
  Rng d(7);
  for (int i = 0; i < 64; ++i) seen.insert(chooser_random(d));
  EXPECT_EQ(seen, (std::set<int>{-1, 1}));
}

TEST(RandomPolicies, UniformStaysInUnitInterval) {
  Rng rng(1);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 100'000; ++i) {
    const double u = rng.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  EXPECT_GE(lo, 0.0);
  EXPECT_LT(hi, 1.0);
  EXPECT_LT(lo, 1e-3);
  EXPECT_GT(hi, 1.0 - 1e-3);
}

TEST(Lookahead, Examples) {
  const Point2 first = pusher_lookahead({0.0, 0.0}, kQuarterPi, 1, 2);
  EXPECT_NEAR(norm(first), 1.0, 1e-15);
  EXPECT_EQ(chooser_lookahead({1.0, 0.0}, {1.0, 0.0}, kQuarterPi, 1, 17), -1);
  expect_point_near(pusher_lookahead({1.0, 0.0}, kQuarterPi, 1, 33), unit_vector(-kQuarterPi),
                    1e-15);
}

TEST(Lookahead, BudgetAndLimits) {
  EXPECT_DOUBLE_EQ(lookahead_nodes(2, 17), 34.0 * 34.0);
  EXPECT_THROW(check_lookahead_budget(4, 64), BudgetError);
  EXPECT_NO_THROW(check_lookahead_budget(4, 50));
  EXPECT_THROW(check_lookahead_budget(5, 3), std::invalid_argument);
  EXPECT_THROW(check_lookahead_budget(0, 3), std::invalid_argument);
  EXPECT_THROW(check_lookahead_budget(2, 65), std::invalid_argument);
  EXPECT_THROW(pusher_lookahead({0.0, 0.0}, kQuarterPi, 4, 64), BudgetError);
}

TEST(OfferArc, Admits) {
  const OfferArc arc{false, kQuarterPi};
  EXPECT_TRUE(arc.admits(unit_vector(kQuarterPi), 1e-12));
  EXPECT_TRUE(arc.admits(-unit_vector(-kQuarterPi), 1e-12));
  EXPECT_FALSE(arc.admits(unit_vector(kQuarterPi + 1e-6), 1e-9));
  EXPECT_FALSE(arc.admits({2.0, 0.0}, 1e-9));
  const OfferArc full{true, 0.0};
  EXPECT_TRUE(full.admits(unit_vector(2.0), 0.0));
  EXPECT_DOUBLE_EQ(full.grid_half_angle(), std::numbers::pi / 2);
}

TEST(Factories, RejectIncompatiblePolicies) {
  const GameParams p = star_params();
  Rng rng(0);
  const PolicyContext cone_ctx{OfferArc{false, kQuarterPi}, &p, &rng};
  const PolicyContext full_ctx{OfferArc{true, 0.0}, nullptr, &rng};
  EXPECT_THROW(make_pusher(parse_pusher_spec("tangent"), full_ctx), ConfigError);
  EXPECT_THROW(make_pusher(parse_pusher_spec("perpendicular"), cone_ctx), ConfigError);
  EXPECT_THROW(make_chooser(parse_chooser_spec("cone"), full_ctx), ConfigError);
  EXPECT_THROW(make_pusher(parse_chooser_spec("cone"), cone_ctx), ConfigError);
  EXPECT_THROW(make_chooser(parse_pusher_spec("tangent"), cone_ctx), ConfigError);
  EXPECT_NO_THROW(make_pusher(parse_pusher_spec("perpendicular"), full_ctx));
  EXPECT_NO_THROW(make_chooser(parse_chooser_spec("greedy-euclid"), full_ctx));
}

TEST(Factories, SeededRandomPolicyOwnsItsStream) {
  const GameParams p = star_params();
  Rng game_a(1), game_b(999);
  auto a = make_pusher(parse_pusher_spec("random:seed=5"),
                       PolicyContext{OfferArc{false, kQuarterPi}, &p, &game_a});
  auto b = make_pusher(parse_pusher_spec("random:seed=5"),
                       PolicyContext{OfferArc{false, kQuarterPi}, &p, &game_b});
  for (int i = 0; i < 20; ++i) EXPECT_EQ(a->offer({0.0, 0.0}), b->offer({0.0, 0.0}));
}

// Property suites.

TEST(TangentPusherProperty, OffersStayInArcAndGrowTheNorm) {
  testing::Gen gen(201);
  for (const double gamma : {0.2, 0.3, 0.6, kQuarterPi, 0.85}) {
    const GameParams p = GameParams::make(gamma, 1.0);
    const OfferArc arc{false, gamma};
    for (int i = 0; i < 5000; ++i) {
      const Point2 z = gen.point_log_radius(1e-3, 1e4);
      const Point2 v = pusher_tangent(z, p);
      ASSERT_TRUE(arc.admits(v, kOfferTolerance)) << gamma << ' ' << z.x << ' ' << z.y;
      const double t = lens_norm(z, p.pusher_body);
      for (const int eps : {-1, 1}) {
        const double next = lens_norm(z + static_cast<double>(eps) * v, p.pusher_body);
        EXPECT_GE(next * next, (t * t + 1.0) * (1.0 - 1e-12)) << gamma << ' ' << t;
      }
    }
  }
}

TEST(ConeChooserProperty, StepBoundHoldsAboveThreshold) {
  testing::Gen gen(202);
  for (const double alpha : {1.0, alpha_star_closed_form(), 4.0}) {
    const GameParams p = GameParams::make(kQuarterPi, alpha);
    for (int i = 0; i < 20'000; ++i) {
      const double t = p.t_star * std::exp(gen.uniform(0.0, std::log(1e4)));
      const Point2 z = lens_boundary_point(p.chooser_body, t, gen.uniform(0.0, 2.0));
      const Point2 v = canonical_direction(gen.unit_in_arc(kQuarterPi));
      const int eps = chooser_cone(z, v, p);
      const double next = lens_norm(z + static_cast<double>(eps) * v, p.chooser_body);
      EXPECT_LE(next, t + 1.0 / (2.0 * p.beta * t) + 1e-12 * std::max(1.0, t))
          << "alpha=" << alpha << " z=(" << z.x << ',' << z.y << ')';
    }
  }
}

TEST(GreedyProperty, EuclidChooserNeverExceedsPythagoras) {
  testing::Gen gen(203);
  for (int i = 0; i < 10'000; ++i) {
    const Point2 z = gen.point(100.0);
    const Point2 v = unit_vector(gen.uniform(-std::numbers::pi, std::numbers::pi));
    const int eps = chooser_greedy_euclid(z, v);
    EXPECT_LE(norm_squared(z + static_cast<double>(eps) * v),
              norm_squared(z) + 1.0 + 1e-9 * norm_squared(z));
  }
}

}  // namespace
}  // namespace balance
