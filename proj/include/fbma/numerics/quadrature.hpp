#ifndef FBMA_NUMERICS_QUADRATURE_HPP
#define FBMA_NUMERICS_QUADRATURE_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

namespace fbma::quad {

struct GLRule {
  std::vector<double> x, w;  // nodes/weights on [-1,1]
};

// Gauss-Legendre nodes by Newton iteration on P_n (symmetric half stored both
// sides). Accurate to machine precision for the n used here.
inline GLRule gauss_legendre(int n) {
  GLRule r;
  r.x.resize(n);
  r.w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    r.w[n - 1 - i] = r.w[i];
  }
  return r;
}

template <class F>
double gl(F&& f, double a, double b, const GLRule& rule) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0;
  for (std::size_t i = 0; i < rule.x.size(); ++i)
    s += rule.w[i] * f(mid + half * rule.x[i]);
  return s * half;
}

namespace detail {
template <class F>
double adapt(F& f, double a, double b, double whole, double tol, const GLRule& rule,
             int depth) {
  const double mid = 0.5 * (a + b);
  const double left = gl(f, a, mid, rule);
  const double right = gl(f, mid, b, rule);
  if (depth <= 0) return left + right;
  if (std::abs(left + right - whole) <= tol) return left + right;
  return adapt(f, a, mid, left, 0.5 * tol, rule, depth - 1) +
         adapt(f, mid, b, right, 0.5 * tol, rule, depth - 1);
}
}  // namespace detail

// Adaptive bisection with a fixed-order panel rule; tol is absolute.
template <class F>
double adaptive(F&& f, double a, double b, double tol = 1e-12, int order = 25,
                int max_depth = 40) {
  const GLRule rule = gauss_legendre(order);
  return detail::adapt(f, a, b, gl(f, a, b, rule), tol, rule, max_depth);
}

}  // namespace fbma::quad

#endif
