#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace balance {

/// A point or vector in the plane. Components are always finite.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Point2() = default;
  Point2(double x_, double y_) : x(x_), y(y_) {
    if (!std::isfinite(x_) || !std::isfinite(y_)) {
      throw std::invalid_argument("Point2: non-finite component");
    }
  }

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator-(Point2 a) { return {-a.x, -a.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point2 a, Point2 b) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double norm_squared(Point2 a) { return a.x * a.x + a.y * a.y; }
inline Point2 unit_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// The lens D(a, R) = B((0,a), R) ∩ B((0,-a), R), with R > a > 0.
///
/// Symmetric in both axes with the origin strictly inside, so it is the unit
/// ball of a norm. Its corners are (±sqrt(R²-a²), 0) and its top and bottom
/// points are (0, ±(R-a)).
class LensBody {
public:
  LensBody(double a, double R);

  double a() const { return a_; }
  double R() const { return R_; }

  /// s·D(a,R) = D(s·a, s·R).
  LensBody scaled(double s) const { return {s * a_, s * R_}; }

  /// x-coordinate of the right corner, sqrt(R² - a²).
  double half_width() const { return std::sqrt((R_ - a_) * (R_ + a_)); }
  /// y-coordinate of the top point, R - a.
  double half_height() const { return R_ - a_; }

  /// K = D(1, √2).
  static LensBody k_body();
  /// K^γ = D(cot γ, 1/sin γ); K^{π/4} = K.
  static LensBody pusher_body(double gamma);
  /// D^γ(α) = D(1, (1+α)/sin γ); at γ = π/4 this is D(α) = D(1, √2(α+1)).
  static LensBody chooser_body(double alpha, double gamma);

private:
  double a_;
  double R_;
};

/// Double cones C1 = {|y| ≤ rho·|x|} and C2 = {|y| ≥ rho·|x|}.
struct ConePair {
  double rho = 0.0;
};

enum class Cone { C1, C2, Boundary };

/// Minkowski functional |z|_body: the least t ≥ 0 with z ∈ t·body.
double lens_norm(Point2 z, const LensBody& body);

/// z ∈ t·body, with both disk constraints relaxed by tol.
bool lens_contains(Point2 z, const LensBody& body, double t, double tol);

/// Center of the arc of ∂(t·body) on z's side: (0,-t·a) for z.y ≥ 0, (0,t·a)
/// otherwise. Points on the x-axis use the upper arc.
Point2 binding_center(Point2 z, const LensBody& body, double t);

/// Flip v so that v.x > 0, or v.y > 0 when v.x == 0.
Point2 canonical_direction(Point2 v);

/// Unit tangent to the binding arc of ∂(|z|·body) at z, canonicalized.
/// Throws std::invalid_argument at the origin.
Point2 tangent_direction(Point2 z, const LensBody& body);

/// Exact comparison of |y| against rho·|x|.
Cone cone_classify(Point2 z, ConePair cone);

/// t·(1+α, α): the point of ∂(t·D(α)) on the C1/C2 boundary line.
Point2 c2_corner(const LensBody& body, double t, double alpha);

/// Point on ∂(scale·body) for a boundary parameter s ∈ [0, 2): s ∈ [0,1]
/// sweeps the upper arc from the right corner to the left corner, s ∈ [1,2)
/// sweeps the lower arc back.
Point2 lens_boundary_point(const LensBody& body, double scale, double s);

/// Minimum slack of the sampled boundary of inner_scale·inner against the two
/// disk constraints of outer_scale·outer. Non-negative means every sample is
/// contained.
double lens_in_lens_margin(const LensBody& inner, double inner_scale, const LensBody& outer,
                           double outer_scale, std::size_t samples);

}  // namespace balance
