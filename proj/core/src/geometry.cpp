#include "balance/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <string>

namespace balance {

LensBody::LensBody(double a, double R) : a_(a), R_(R) {
  if (!(std::isfinite(a) && std::isfinite(R) && a > 0.0 && R > a)) {
    throw std::invalid_argument("LensBody: need R > a > 0, got a=" + std::to_string(a) +
                                " R=" + std::to_string(R));
  }
}

LensBody LensBody::k_body() { return {1.0, std::numbers::sqrt2}; }

LensBody LensBody::pusher_body(double gamma) {
  return {std::cos(gamma) / std::sin(gamma), 1.0 / std::sin(gamma)};
}

LensBody LensBody::chooser_body(double alpha, double gamma) {
  return {1.0, (1.0 + alpha) / std::sin(gamma)};
}

double lens_norm(Point2 z, const LensBody& body) {
  // Far-circle constraint x² + (|y| + t·a)² = (t·R)², solved for t ≥ 0.
  const double a = body.a();
  const double c = (body.R() - a) * (body.R() + a);
  const double ay = a * std::abs(z.y);
  return (ay + std::sqrt(ay * ay + c * norm_squared(z))) / c;
}

bool lens_contains(Point2 z, const LensBody& body, double t, double tol) {
  const double ta = t * body.a();
  const double tr = t * body.R() + tol;
  return std::hypot(z.x, z.y - ta) <= tr && std::hypot(z.x, z.y + ta) <= tr;
}

Point2 binding_center(Point2 z, const LensBody& body, double t) {
  return z.y < 0.0 ? Point2{0.0, t * body.a()} : Point2{0.0, -t * body.a()};
}

Point2 canonical_direction(Point2 v) {
  if (v.x < 0.0 || (v.x == 0.0 && v.y < 0.0)) {
    return -v;
  }
  return v;
}

Point2 tangent_direction(Point2 z, const LensBody& body) {
  if (z.x == 0.0 && z.y == 0.0) {
    throw std::invalid_argument("tangent_direction: undefined at the origin");
  }
  const double t = lens_norm(z, body);
  const Point2 radial = z - binding_center(z, body, t);
  const double len = norm(radial);
  return canonical_direction(Point2{radial.y / len, -radial.x / len});
}

Cone cone_classify(Point2 z, ConePair cone) {
  const double ay = std::abs(z.y);
  const double bound = cone.rho * std::abs(z.x);
  if (ay < bound) return Cone::C1;
  if (ay > bound) return Cone::C2;
  return Cone::Boundary;
}

Point2 c2_corner(const LensBody& body, double t, double alpha) {
  const double expected_R = std::numbers::sqrt2 * (alpha + 1.0);
  if (std::abs(body.a() - 1.0) > 1e-12 || std::abs(body.R() - expected_R) > 1e-12 * expected_R) {
    throw std::invalid_argument("c2_corner: body is not D(alpha)");
  }
  return {t * (1.0 + alpha), t * alpha};
}

Point2 lens_boundary_point(const LensBody& body, double scale, double s) {
  const double a = scale * body.a();
  const double r = scale * body.R();
  const double corner = std::atan2(body.a(), body.half_width());
  const double sweep = std::numbers::pi - 2.0 * corner;
  if (s <= 1.0) {
    const double theta = corner + s * sweep;
    return {r * std::cos(theta), -a + r * std::sin(theta)};
  }
  const double theta = std::numbers::pi + corner + (s - 1.0) * sweep;
  return {r * std::cos(theta), a + r * std::sin(theta)};
}

double lens_in_lens_margin(const LensBody& inner, double inner_scale, const LensBody& outer,
                           double outer_scale, std::size_t samples) {
  if (samples < 3) {
    throw std::invalid_argument("lens_in_lens_margin: need at least 3 samples");
  }
  const double oa = outer_scale * outer.a();
  const double orad = outer_scale * outer.R();
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples; ++i) {
    const double s = 2.0 * static_cast<double>(i) / static_cast<double>(samples);
    const Point2 p = lens_boundary_point(inner, inner_scale, s);
    const double far = std::max(std::hypot(p.x, p.y - oa), std::hypot(p.x, p.y + oa));
    margin = std::min(margin, orad - far);
  }
  return margin;
}

}  // namespace balance
