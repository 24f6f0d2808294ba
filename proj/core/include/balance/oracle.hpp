#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <variant>

#include "balance/engine.hpp"
#include "balance/geometry.hpp"

namespace balance::oracle {

/// Least t with lens_contains(z, body, t, 0), to within tol, by doubling and
/// bisection on the containment predicate alone.
double lens_norm_bisect(Point2 z, const LensBody& body, double tol);

inline constexpr std::uint64_t kMinimaxNodeBudget = 100'000'000;

/// A discretized (S^γ, B, n) game: Pusher offers angles -γ + 2γ·i/(grid-1).
struct MinimaxSpec {
  int n;
  int grid;
  double gamma;
  ValueDef value_def;

  /// Requires 1 ≤ n ≤ 8, odd 1 ≤ grid ≤ 33 and 0 < gamma ≤ π/2.
  static MinimaxSpec make(int n, int grid, double gamma, ValueDef value_def);
};

struct MinimaxResult {
  double value;
  std::uint64_t nodes;
};

/// Exact value of the discretized game by depth-first alpha-beta search.
/// Throws BudgetError if the search visits more than 1e8 nodes.
MinimaxResult minimax_value(const MinimaxSpec& spec);

/// Value a fixed pusher strategy guarantees against the best chooser: the
/// minimum over all 2^n sign sequences.
MinimaxResult pusher_strategy_value(int n, ValueDef value_def,
                                    const std::function<Point2(Point2)>& pusher);

struct RectangleRegion {
  Point2 lo;
  Point2 hi;
};
/// Points radius·(cos φ, sin φ), φ ∈ [phi_lo, phi_hi].
struct ArcRegion {
  double phi_lo;
  double phi_hi;
  double radius = 1.0;
};
/// ∂(scale·body).
struct LensBoundaryRegion {
  LensBody body;
  double scale;
};
/// ∂(scale·body) + S¹, which holds every extreme point of scale·body + B.
struct LensBoundarySumRegion {
  LensBody body;
  double scale;
};

using Region = std::variant<RectangleRegion, ArcRegion, LensBoundaryRegion, LensBoundarySumRegion>;

struct RegionMax {
  Point2 argmax;
  std::array<double, 2> params;  // region parameters of the argmax
  double value;
};

/// Coarse grid scan (coarse points per parameter) followed by refine_iters
/// rounds of local grids around the incumbent, shrinking 10x per round.
RegionMax max_over_region(const std::function<double(Point2)>& f, const Region& region,
                          int coarse, int refine_iters);

}  // namespace balance::oracle
