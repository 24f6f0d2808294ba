#pragma once

#include <cmath>
#include <stdexcept>

namespace balance {

struct Minimum1d {
  double x;
  double value;
  int iterations;
};

/// Golden-section minimization of a unimodal f on [lo, hi], stopping once the
/// bracket is narrower than tol.
template <typename F>
Minimum1d golden_section_minimize(F&& f, double lo, double hi, double tol, int max_iter = 500) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  int it = 0;
  for (; it < max_iter && hi - lo > tol; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  const double x = 0.5 * (lo + hi);
  return {x, f(x), it};
}

/// Root of g on [lo, hi] by bisection; g(lo) and g(hi) must differ in sign.
template <typename G>
double bisect_root(G&& g, double lo, double hi, double tol, int max_iter = 200) {
  double glo = g(lo);
  const double ghi = g(hi);
  if ((glo < 0.0) == (ghi < 0.0)) {
    throw std::invalid_argument("bisect_root: endpoints do not bracket a sign change");
  }
  for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace balance
