#pragma once

#include <string>

namespace balance {

/// Closed-form minimizer 1/√2 + sqrt(1 + 1/√2) of the Chooser coefficient.
double alpha_star_closed_form();

/// 2(α+1)² - √2(α+1).
double beta_of_alpha(double alpha);
/// r(r-1) with r = (1+α)/sin γ.
double beta_gamma(double alpha, double gamma);
/// cos γ / α. Throws std::domain_error if the result is not above
/// 1/sqrt(2β), where the recursion map stops being monotone.
double threshold_t_star(double alpha, double gamma);

/// t_k obtained by iterating t ↦ t + 1/(2βt) from t_h, k - h times.
double iterate_recursion(double t_h, long h, long k, double beta);

struct Envelope {
  double lower;
  double upper;  // +inf outside the regime k - h > h
};

/// Lower and upper bounds on t_k² for the recursion started at (h, t_h).
/// Natural logarithm. Requires k > h ≥ 1.
Envelope recursion_envelope(double t_h, long h, long k, double beta);

/// max |u|_{D^γ(α)} over u ∈ t*·D^γ(α) + B, by a 2000 x 2000 grid over
/// (boundary parameter, unit direction) followed by local refinement.
double t_cap(double alpha, double gamma);

struct RadiusBound {
  double T_n;
  double d_n;
  /// T_n times the distance of the tangency corner (1+α, (1+α)cot γ - 1).
  double d_n_corner;
};

/// T_n = sqrt(t₊² + n/β + ln(n)/(4β)) and the Euclidean bound d_n. For general
/// γ, d_n = T_n·sqrt((1+α)²tan²γ + α²); at π/4 this is ‖T_n(1+α, α)‖.
RadiusBound radius_bound(double alpha, double gamma, long n, double t_cap_value);
RadiusBound radius_bound(double alpha, double gamma, long n);

struct GF {
  double G;
  double F;
};
GF G_and_F(double alpha, double gamma);

/// The π/4 objective (α² + (α+1)²)/β(α); its square root is the √n
/// coefficient of the Chooser bound.
double chooser_objective(double alpha);

/// Golden-section minimizer of chooser_objective on [0.1, 10].
double optimal_alpha();

struct AlphaMinimum {
  double alpha;
  double F;
};
/// min over α ∈ [1e-4, 50] of F(α, γ), by golden-section search.
AlphaMinimum min_F_over_alpha(double gamma);

/// Root of min_α F(α, γ) - 1 on [0.5, 0.85].
double gamma_threshold();

/// 1 - cos γ, the printed constant of the S^γ pusher floor ‖z_n‖ ≥ c·√n.
double pusher_floor(double gamma);

/// tan(γ/2) = (1 - cos γ)/sin γ, the inradius of K^γ. Since t(z_n)² ≥ n the
/// tangent pusher in fact guarantees ‖z_n‖ ≥ tan(γ/2)·√n, which is √2 - 1 at
/// γ = π/4 and at least pusher_floor(γ) for every γ.
double pusher_floor_inradius(double gamma);

/// Published reference decimals for the π/4 game, reported beside the computed values.
struct PrintedConstants {
  static constexpr double alpha_star = 2.013669;
  static constexpr double beta = 13.895312;
  static constexpr double t_star = 0.351272;
  static constexpr double t_cap = 0.511187;
  static constexpr double coeff = 0.972112;
  static constexpr double gamma0 = 0.7967;
  static constexpr double gamma0_degrees = 45.64;
};

struct ConstantsReport {
  double alpha_star;
  double beta;
  double t_star;
  double t_cap;
  double coeff;
  double gamma0;
};

ConstantsReport compute_constants();

/// Constants of the (S^γ, B) game at the α minimizing F(·, γ).
struct GammaReport {
  double gamma;
  double alpha;
  double beta;
  double t_star;
  double min_F;
  double coeff;  // sqrt(min_F)
  double pusher_floor;
  bool improves_on_sqrt_n;  // min_F < 1
};

GammaReport compute_gamma_report(double gamma);

/// JSON with 12 significant digits; includes the printed values alongside.
std::string to_json(const ConstantsReport& report);
std::string to_json(const GammaReport& report);

}  // namespace balance
