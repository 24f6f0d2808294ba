#include "balance/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "balance/geometry.hpp"
#include "balance/search1d.hpp"

namespace balance {

double alpha_star_closed_form() {
  return 1.0 / std::numbers::sqrt2 + std::sqrt(1.0 + 1.0 / std::numbers::sqrt2);
}

double beta_of_alpha(double alpha) {
  const double u = alpha + 1.0;
  return 2.0 * u * u - std::numbers::sqrt2 * u;
}

double beta_gamma(double alpha, double gamma) {
  const double r = (1.0 + alpha) / std::sin(gamma);
  return r * (r - 1.0);
}

double threshold_t_star(double alpha, double gamma) {
  const double t = std::cos(gamma) / alpha;
  if (!(t > 1.0 / std::sqrt(2.0 * beta_gamma(alpha, gamma)))) {
    throw std::domain_error("threshold_t_star: t* is not above 1/sqrt(2 beta)");
  }
  return t;
}

double iterate_recursion(double t_h, long h, long k, double beta) {
  if (k < h) throw std::invalid_argument("iterate_recursion: need k >= h");
  double t = t_h;
  for (long i = h; i < k; ++i) {
    t += 1.0 / (2.0 * beta * t);
  }
  return t;
}

Envelope recursion_envelope(double t_h, long h, long k, double beta) {
  if (!(k > h && h >= 1)) throw std::invalid_argument("recursion_envelope: need k > h >= 1");
  const double lower = t_h * t_h + static_cast<double>(k - h) / beta;
  if (k - h <= h) {
    return {lower, std::numeric_limits<double>::infinity()};
  }
  const double log_term = std::log(static_cast<double>(k - h) / static_cast<double>(h));
  return {lower, lower + log_term / (4.0 * beta)};
}

double t_cap(double alpha, double gamma) {
  const LensBody body = LensBody::chooser_body(alpha, gamma);
  const double t_star = std::cos(gamma) / alpha;
  const auto value = [&](double s, double theta) {
    const Point2 p = lens_boundary_point(body, t_star, std::clamp(s, 0.0, 2.0));
    return lens_norm(p + unit_vector(theta), body);
  };

  constexpr int kCoarse = 2000;
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<Point2> boundary(kCoarse);
  std::vector<Point2> dirs(kCoarse);
  for (int i = 0; i < kCoarse; ++i) {
    boundary[i] = lens_boundary_point(body, t_star, 2.0 * i / kCoarse);
    dirs[i] = unit_vector(two_pi * i / kCoarse);
  }
  double best = -1.0;
  double best_s = 0.0;
  double best_theta = 0.0;
  for (int i = 0; i < kCoarse; ++i) {
    for (int j = 0; j < kCoarse; ++j) {
      const double v = lens_norm(boundary[i] + dirs[j], body);
      if (v > best) {
        best = v;
        best_s = 2.0 * i / kCoarse;
        best_theta = two_pi * j / kCoarse;
      }
    }
  }

  double half_s = 2.0 / kCoarse;
  double half_theta = two_pi / kCoarse;
  constexpr int kLocal = 20;
  for (int round = 0; round < 8; ++round) {
    const double cs = best_s;
    const double ct = best_theta;
    for (int i = -kLocal; i <= kLocal; ++i) {
      for (int j = -kLocal; j <= kLocal; ++j) {
        const double s = std::clamp(cs + half_s * i / kLocal, 0.0, 2.0);
        const double theta = ct + half_theta * j / kLocal;
        const double v = value(s, theta);
        if (v > best) {
          best = v;
          best_s = s;
          best_theta = theta;
        }
      }
    }
    half_s /= 10.0;
    half_theta /= 10.0;
  }
  return best;
}

RadiusBound radius_bound(double alpha, double gamma, long n, double t_cap_value) {
  if (n < 1) throw std::invalid_argument("radius_bound: need n >= 1");
  const double beta = beta_gamma(alpha, gamma);
  const double nd = static_cast<double>(n);
  const double T = std::sqrt(t_cap_value * t_cap_value + nd / beta + std::log(nd) / (4.0 * beta));
  const double tan_g = std::tan(gamma);
  const double cot_g = 1.0 / tan_g;
  const double u = 1.0 + alpha;
  return {T, T * std::sqrt(u * u * tan_g * tan_g + alpha * alpha),
          T * std::hypot(u, u * cot_g - 1.0)};
}

RadiusBound radius_bound(double alpha, double gamma, long n) {
  return radius_bound(alpha, gamma, n, t_cap(alpha, gamma));
}

GF G_and_F(double alpha, double gamma) {
  const double u = 1.0 + alpha;
  const double tan_g = std::tan(gamma);
  const double s = std::sin(gamma);
  const double G = (u * u * tan_g * tan_g + alpha * alpha) / (u * (u - s));
  return {G, s * s * G};
}

double chooser_objective(double alpha) {
  const double u = alpha + 1.0;
  return (alpha * alpha + u * u) / beta_of_alpha(alpha);
}

double optimal_alpha() {
  return golden_section_minimize(chooser_objective, 0.1, 10.0, 1e-10).x;
}

AlphaMinimum min_F_over_alpha(double gamma) {
  const auto m = golden_section_minimize([gamma](double a) { return G_and_F(a, gamma).F; },
                                         1e-4, 50.0, 1e-10);
  return {m.x, m.value};
}

double gamma_threshold() {
  return bisect_root([](double g) { return min_F_over_alpha(g).F - 1.0; }, 0.5, 0.85, 1e-9);
}

double pusher_floor(double gamma) { return 1.0 - std::cos(gamma); }

double pusher_floor_inradius(double gamma) { return std::tan(gamma / 2.0); }

ConstantsReport compute_constants() {
  const double alpha = optimal_alpha();
  const double gamma = std::numbers::pi / 4.0;
  return {alpha,
          beta_of_alpha(alpha),
          threshold_t_star(alpha, gamma),
          t_cap(alpha, gamma),
          std::sqrt(chooser_objective(alpha)),
          gamma_threshold()};
}

GammaReport compute_gamma_report(double gamma) {
  const AlphaMinimum m = min_F_over_alpha(gamma);
  return {gamma,
          m.alpha,
          beta_gamma(m.alpha, gamma),
          std::cos(gamma) / m.alpha,
          m.F,
          std::sqrt(m.F),
          pusher_floor(gamma),
          m.F < 1.0};
}

namespace {

double sig12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

}  // namespace

std::string to_json(const ConstantsReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["alpha_star"] = {{"formula", sig12(r.alpha_star)},
                     {"closed_form", sig12(alpha_star_closed_form())},
                     {"printed", PrintedConstants::alpha_star}};
  j["beta"] = {{"formula", sig12(r.beta)}, {"printed", PrintedConstants::beta}};
  j["t_star"] = {{"formula", sig12(r.t_star)}, {"printed", PrintedConstants::t_star}};
  j["t_cap"] = {{"formula", sig12(r.t_cap)}, {"printed", PrintedConstants::t_cap}};
  j["coeff"] = {{"formula", sig12(r.coeff)}, {"printed", PrintedConstants::coeff}};
  j["gamma0"] = {{"formula", sig12(r.gamma0)},
                 {"degrees", sig12(r.gamma0 * 180.0 / std::numbers::pi)},
                 {"printed", PrintedConstants::gamma0},
                 {"printed_degrees", PrintedConstants::gamma0_degrees}};
  return j.dump(2);
}

std::string to_json(const GammaReport& r) {
  nlohmann::ordered_json j;
  j["gamma"] = sig12(r.gamma);
  j["alpha"] = sig12(r.alpha);
  j["beta"] = sig12(r.beta);
  j["t_star"] = sig12(r.t_star);
  j["min_F"] = sig12(r.min_F);
  j["coeff"] = sig12(r.coeff);
  j["pusher_floor"] = sig12(r.pusher_floor);
  j["improves_on_sqrt_n"] = r.improves_on_sqrt_n;
  return j.dump(2);
}

}  // namespace balance
