#ifndef FBMA_NUMERICS_ROOTS_HPP
#define FBMA_NUMERICS_ROOTS_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace fbma {

// Raised when a sign change cannot be bracketed in the allowed range.
struct BracketError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace roots {

// Brent's method on a bracketing interval [a,b] with f(a)f(b) <= 0.
template <class F>
double brent(F&& f, double a, double b, double xtol = 1e-14, int maxit = 200) {
  double fa = f(a), fb = f(b);
  if (fa == 0) return a;
  if (fb == 0) return b;
  if (fa * fb > 0) throw BracketError("brent: endpoints do not bracket a root");

  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < maxit; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * xtol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
  return b;
}

// First sign change of f scanning [a,b] with the given step. Returns the
// bracketing pair, or nullopt if f keeps a strict sign on all samples.
template <class F>
std::optional<std::pair<double, double>> first_sign_change(F&& f, double a, double b,
                                                           double step) {
  double x0 = a, f0 = f(a);
  if (f0 == 0.0) return std::make_pair(a, a);
  while (x0 < b) {
    const double x1 = std::min(x0 + step, b);
    const double f1 = f(x1);
    if (f1 == 0.0) return std::make_pair(x1, x1);
    if ((f0 > 0) != (f1 > 0)) return std::make_pair(x0, x1);
    x0 = x1;
    f0 = f1;
    if (x1 >= b) break;
  }
  return std::nullopt;
}

}  // namespace roots
}  // namespace fbma

#endif
