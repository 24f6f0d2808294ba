#pragma once

#include <cstdint>
#include <memory>
#include <random>

#include "balance/geometry.hpp"
#include "balance/policy_spec.hpp"

namespace balance {

/// One coherent parameterization of the (S^γ, B) game for the tangent
/// pusher and cone chooser. Build with GameParams::make.
struct GameParams {
  double gamma;
  double alpha;
  double beta;    // recursion constant r(r-1), r = (1+α)/sin γ
  double t_star;  // cone strategy threshold cos γ / α
  ConePair cone;
  LensBody pusher_body;   // K^γ
  LensBody chooser_body;  // D^γ(α)

  /// Requires 0 < gamma ≤ 0.85 and alpha > 0. Throws std::invalid_argument
  /// otherwise, or if t* ≤ 1/sqrt(2β).
  static GameParams make(double gamma, double alpha);
};

inline constexpr double kMaxConeGamma = 0.85;
inline constexpr double kOfferTolerance = 1e-9;

/// Slope of the C1/C2 boundary: max(0, ((1+α)cot γ - 1)/(1+α)).
double cone_ratio(double alpha, double gamma);

/// t·(1+α, (1+α)cot γ - 1), the point of ∂(t·D^γ(α)) whose arc tangent has
/// angle -γ. Equals c2_corner at γ = π/4.
Point2 tangency_corner(double alpha, double gamma, double t);

/// Deterministic 64-bit stream. Draws are defined bit-exactly from
/// std::mt19937_64, so results do not depend on the standard library.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  int sign() { return (engine_() >> 63) != 0 ? 1 : -1; }

private:
  std::mt19937_64 engine_;
};

// Pusher policies. All return unit vectors.

Point2 pusher_tangent(Point2 z, const GameParams& params);
Point2 pusher_perpendicular(Point2 z);
Point2 pusher_random(Rng& rng, double half_angle);
/// Exhaustive max-min over the angle grid {-γ + 2γ·i/(grid-1)} of the
/// Euclidean norm after `depth` rounds. Ties go to the smallest angle index.
Point2 pusher_lookahead(Point2 z, double half_angle, int depth, int grid);

// Chooser policies. All return +1 or -1.

/// Cone strategy. v is canonicalized before use; the sign applies to the
/// canonical offer.
int chooser_cone(Point2 z, Point2 v, const GameParams& params);
int chooser_greedy_euclid(Point2 z, Point2 v);
int chooser_greedy_lens(Point2 z, Point2 v, const LensBody& body);
int chooser_random(Rng& rng);
/// Minimizes the Euclidean norm after this sign and `depth - 1` further
/// rounds of optimal play on the angle grid. Ties go to +1.
int chooser_lookahead(Point2 z, Point2 v, double half_angle, int depth, int grid);

inline constexpr int kMaxLookaheadDepth = 4;
inline constexpr int kMaxLookaheadGrid = 64;
inline constexpr double kLookaheadNodeBudget = 1e8;

/// (2·grid)^depth.
double lookahead_nodes(int depth, int grid);
/// Throws std::invalid_argument outside depth ∈ [1,4], grid ∈ [1,64], and
/// BudgetError when the node count exceeds the budget.
void check_lookahead_budget(int depth, int grid);

/// The offers a pusher may make: the arc |φ| ≤ half_angle, or all of S¹.
struct OfferArc {
  bool full_circle = false;
  double half_angle = 0.0;

  /// Half-angle of the angle grid used by lookahead and random policies.
  double grid_half_angle() const;
  bool admits(Point2 v, double tol) const;
};

class Pusher {
public:
  virtual ~Pusher() = default;
  virtual Point2 offer(Point2 z) = 0;
};

class Chooser {
public:
  virtual ~Chooser() = default;
  virtual int choose(Point2 z, Point2 v) = 0;
};

/// What a policy may depend on besides its own spec. `params` is null in
/// full-circle games. `game_rng` is the game's shared stream, used by random
/// policies whose spec carries no seed of its own.
struct PolicyContext {
  OfferArc arc;
  const GameParams* params = nullptr;
  Rng* game_rng = nullptr;
};

/// Throws ConfigError when the policy cannot play in the given context.
std::unique_ptr<Pusher> make_pusher(const PolicySpec& spec, const PolicyContext& ctx);
std::unique_ptr<Chooser> make_chooser(const PolicySpec& spec, const PolicyContext& ctx);

}  // namespace balance
