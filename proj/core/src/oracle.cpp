#include "balance/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "balance/errors.hpp"

namespace balance::oracle {

double lens_norm_bisect(Point2 z, const LensBody& body, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("lens_norm_bisect: tol must be positive");
  if (z.x == 0.0 && z.y == 0.0) return 0.0;
  double hi = (norm(z) + 1.0) / (body.R() - body.a());
  while (!lens_contains(z, body, hi, 0.0)) hi *= 2.0;
  double lo = 0.0;
  for (int it = 0; it < 400 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (lens_contains(z, body, mid, 0.0)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

MinimaxSpec MinimaxSpec::make(int n, int grid, double gamma, ValueDef value_def) {
  if (n < 1 || n > 8) throw std::invalid_argument("minimax: n must lie in [1, 8]");
  if (grid < 1 || grid > 33 || grid % 2 == 0) {
    throw std::invalid_argument("minimax: grid must be odd and lie in [1, 33]");
  }
  if (!(gamma > 0.0 && gamma <= std::numbers::pi / 2.0)) {
    throw std::invalid_argument("minimax: gamma must lie in (0, pi/2]");
  }
  return {n, grid, gamma, value_def};
}

namespace {

// Alpha-beta over the discretized game. Values are Euclidean norms.
//
// From a position at distance r with k steps left, Chooser can keep every
// later position within sqrt(r² + k) (greedy sign), and no later position is
// closer than r - k. These bounds cut subtrees before expanding them.
class MinimaxSearch {
public:
  explicit MinimaxSearch(const MinimaxSpec& spec) : spec_(spec) {
    for (int i = 0; i < spec.grid; ++i) {
      const double angle =
          spec.grid == 1 ? 0.0
                         : -spec.gamma + 2.0 * spec.gamma * static_cast<double>(i) / (spec.grid - 1);
      offers_.push_back(unit_vector(angle));
    }
  }

  double run() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return pusher_node(Point2{}, spec_.n, 0.0, -inf, inf);
  }

  std::uint64_t nodes() const { return nodes_; }

private:
  bool final_norm() const { return spec_.value_def == ValueDef::FinalNorm; }

  void visit(std::uint64_t count = 1) {
    nodes_ += count;
    if (nodes_ > kMinimaxNodeBudget) {
      throw BudgetError("minimax: search exceeded 1e8 nodes");
    }
  }

  double pusher_node(Point2 z, int left, double prefix, double alpha, double beta) {
    visit();
    const double r = norm(z);
    if (left == 0) return final_norm() ? r : prefix;

    const double reach = std::sqrt(r * r + left);
    const double hi = final_norm() ? reach : std::max(prefix, reach);
    const double lo = final_norm() ? std::max(0.0, r - left) : prefix;
    if (hi <= alpha) return hi;
    if (lo >= beta) return lo;

    if (left == 1) {
      // min over the sign of ‖z ± v‖ is sqrt(r² + 1 - 2|<z,v>|).
      visit(2 * offers_.size());
      double best = 0.0;
      for (const Point2& v : offers_) {
        const double m = std::sqrt(std::max(0.0, r * r + 1.0 - 2.0 * std::abs(dot(z, v))));
        best = std::max(best, m);
      }
      return final_norm() ? best : std::max(prefix, best);
    }

    // Most nearly perpendicular offers first.
    std::vector<std::size_t> order(offers_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
      return std::abs(dot(z, offers_[i])) < std::abs(dot(z, offers_[j]));
    });

    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i : order) {
      const double value = chooser_node(z, offers_[i], left, prefix, std::max(alpha, best), beta);
      best = std::max(best, value);
      if (best >= beta || best >= hi) break;
    }
    return best;
  }

  double chooser_node(Point2 z, Point2 v, int left, double prefix, double alpha, double beta) {
    visit();
    Point2 first = z + v;
    Point2 second = z - v;
    if (norm_squared(second) < norm_squared(first)) std::swap(first, second);
    double best = std::numeric_limits<double>::infinity();
    for (const Point2& w : {first, second}) {
      const double value =
          pusher_node(w, left - 1, std::max(prefix, norm(w)), alpha, std::min(beta, best));
      best = std::min(best, value);
      if (best <= alpha) break;
    }
    return best;
  }

  MinimaxSpec spec_;
  std::vector<Point2> offers_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

MinimaxResult minimax_value(const MinimaxSpec& spec) {
  MinimaxSearch search(spec);
  const double value = search.run();
  return {value, search.nodes()};
}

MinimaxResult pusher_strategy_value(int n, ValueDef value_def,
                                    const std::function<Point2(Point2)>& pusher) {
  if (n < 1 || n > 20) throw std::invalid_argument("pusher_strategy_value: n must lie in [1, 20]");
  std::uint64_t nodes = 0;
  const auto rec = [&](auto&& self, Point2 z, int left, double prefix) -> double {
    ++nodes;
    if (left == 0) return value_def == ValueDef::FinalNorm ? norm(z) : prefix;
    const Point2 v = pusher(z);
    double best = std::numeric_limits<double>::infinity();
    for (double eps : {1.0, -1.0}) {
      const Point2 w = z + eps * v;
      best = std::min(best, self(self, w, left - 1, std::max(prefix, norm(w))));
    }
    return best;
  };
  const double value = rec(rec, Point2{}, n, 0.0);
  return {value, nodes};
}

namespace {

struct Axis {
  double lo;
  double hi;
  bool periodic;
};

struct Parametrized {
  std::vector<Axis> axes;
  std::function<Point2(double, double)> point;
};

// Distance from the origin to ∂(scale·body) in direction ψ, from the binding
// circle equation.
double lens_radius(const LensBody& body, double scale, double psi) {
  const double uy = std::abs(std::sin(psi));
  const double a = scale * body.a();
  const double r = scale * body.R();
  return -a * uy + std::sqrt(a * a * uy * uy + (r - a) * (r + a));
}

Parametrized parametrize(const Region& region) {
  const double two_pi = 2.0 * std::numbers::pi;
  return std::visit(
      [&](const auto& reg) -> Parametrized {
        using T = std::decay_t<decltype(reg)>;
        if constexpr (std::is_same_v<T, RectangleRegion>) {
          return {{{reg.lo.x, reg.hi.x, false}, {reg.lo.y, reg.hi.y, false}},
                  [](double u, double v) { return Point2{u, v}; }};
        } else if constexpr (std::is_same_v<T, ArcRegion>) {
          const double radius = reg.radius;
          return {{{reg.phi_lo, reg.phi_hi, false}},
                  [radius](double phi, double) { return radius * unit_vector(phi); }};
        } else if constexpr (std::is_same_v<T, LensBoundaryRegion>) {
          const LensBody body = reg.body;
          const double scale = reg.scale;
          return {{{0.0, two_pi, true}}, [body, scale](double psi, double) {
                    return lens_radius(body, scale, psi) * unit_vector(psi);
                  }};
        } else {
          const LensBody body = reg.body;
          const double scale = reg.scale;
          return {{{0.0, two_pi, true}, {0.0, two_pi, true}},
                  [body, scale](double psi, double theta) {
                    return lens_radius(body, scale, psi) * unit_vector(psi) + unit_vector(theta);
                  }};
        }
      },
      region);
}

}  // namespace

RegionMax max_over_region(const std::function<double(Point2)>& f, const Region& region,
                          int coarse, int refine_iters) {
  if (coarse < 100) throw std::invalid_argument("max_over_region: coarse must be >= 100");
  const Parametrized par = parametrize(region);
  const std::size_t dims = par.axes.size();

  RegionMax best{Point2{}, {0.0, 0.0}, -std::numeric_limits<double>::infinity()};
  const auto consider = [&](double u, double v) {
    const Point2 p = par.point(u, v);
    const double value = f(p);
    if (value > best.value) best = {p, {u, v}, value};
  };

  // Periodic axes sample [lo, hi); closed axes include both ends.
  std::array<double, 2> step{0.0, 0.0};
  for (std::size_t d = 0; d < dims; ++d) {
    const Axis& ax = par.axes[d];
    step[d] = (ax.hi - ax.lo) / (ax.periodic ? coarse : coarse - 1);
  }
  const int n1 = dims > 1 ? coarse : 1;
  for (int i = 0; i < coarse; ++i) {
    for (int j = 0; j < n1; ++j) {
      consider(par.axes[0].lo + i * step[0], dims > 1 ? par.axes[1].lo + j * step[1] : 0.0);
    }
  }

  constexpr int kLocal = 20;
  for (int round = 0; round < refine_iters; ++round) {
    const std::array<double, 2> center = best.params;
    const int m1 = dims > 1 ? kLocal : 0;
    for (int i = -kLocal; i <= kLocal; ++i) {
      for (int j = -m1; j <= m1; ++j) {
        std::array<double, 2> q{center[0] + step[0] * i / kLocal,
                                dims > 1 ? center[1] + step[1] * j / kLocal : 0.0};
        for (std::size_t d = 0; d < dims; ++d) {
          if (!par.axes[d].periodic) q[d] = std::clamp(q[d], par.axes[d].lo, par.axes[d].hi);
        }
        consider(q[0], q[1]);
      }
    }
    step[0] /= 10.0;
    step[1] /= 10.0;
  }
  return best;
}

}  // namespace balance::oracle
