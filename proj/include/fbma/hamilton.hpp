#ifndef FBMA_HAMILTON_HPP
#define FBMA_HAMILTON_HPP

#include <cmath>
#include <optional>
#include <stdexcept>

#include "fbma/numerics/quadrature.hpp"
#include "fbma/numerics/roots.hpp"
#include "fbma/wente.hpp"

namespace fbma {

// Raised when a root exists nowhere in the searched range (as opposed to the
// trajectory leaving its domain first).
struct NoRootError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// g(x) = -x^3 + (a_hat + 3 sqrt(k)) x^2 + (C1 - 2 a_hat sqrt(k) - 2k) x + C2/4,
// with the closed-form roots r1 <= r2 <= 0 < r3.
struct CubicData {
  double r1, r2, r3;
  std::array<double, 4> coeffs;  // c3 x^3 + c2 x^2 + c1 x + c0 with c3 = -1
  double crosscheck_gap;         // closed forms vs numeric roots of the coeffs
};

inline double cubic_eval(const CubicData& c, double x) {
  return ((c.coeffs[0] * x + c.coeffs[1]) * x + c.coeffs[2]) * x + c.coeffs[3];
}

namespace detail {
// Real roots of -x^3 + c2 x^2 + c1 x + c0 via the trigonometric method.
inline std::array<double, 3> cubic_roots_numeric(double c2, double c1, double c0) {
  // monic form x^3 + px + q after x = y + c2/3 (note the leading sign flip)
  const double b2 = -c2, b1 = -c1, b0 = -c0;  // x^3 + b2 x^2 + b1 x + b0
  const double sh = b2 / 3.0;
  const double pp = b1 - b2 * b2 / 3.0;
  const double qq = 2.0 * b2 * b2 * b2 / 27.0 - b2 * b1 / 3.0 + b0;
  const double disc = -4.0 * pp * pp * pp - 27.0 * qq * qq;
  std::array<double, 3> r{};
  if (pp >= 0.0 || disc < -1e-12 * std::max(1.0, qq * qq)) {
    // nearly degenerate (double root) or round-off: fall back to Newton from
    // spread starting points and sort
    for (int i = 0; i < 3; ++i) {
      double x = -1.0 + i * 1.0;
      for (int it = 0; it < 200; ++it) {
        const double f = ((x + b2) * x + b1) * x + b0;
        const double fp = (3.0 * x + 2.0 * b2) * x + b1;
        if (fp == 0) break;
        const double step = f / fp;
        x -= step;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(x))) break;
      }
      r[i] = x;
    }
  } else {
    const double m = 2.0 * std::sqrt(-pp / 3.0);
    const double arg = std::clamp(3.0 * qq / (pp * m), -1.0, 1.0);
    const double t = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k)
      r[k] = m * std::cos(t - 2.0 * M_PI * k / 3.0) - sh;
  }
  std::sort(r.begin(), r.end());
  return r;
}
}  // namespace detail

inline CubicData cubic_roots(const ParamTriple& p) {
  if (!(p.kappa >= 0.0))
    throw std::domain_error("cubic_roots: the (s,t) reduction is real only for kappa >= 0");
  const DerivedConstants d = derived_constants(p);
  const double sk = std::sqrt(p.kappa);
  CubicData c;
  c.r1 = -(p.a * p.b - 2.0 * sk) * (p.a * p.b - 2.0 * sk) / (4.0 * p.a * p.b);
  c.r2 = -(2.0 * p.a * sk - p.b) * (2.0 * p.a * sk - p.b) / (4.0 * p.a * p.b);
  c.r3 = (2.0 * sk + 1.0) * (2.0 * sk + 1.0) / 4.0;
  if (c.r1 > c.r2) std::swap(c.r1, c.r2);
  c.coeffs = {-1.0, d.a_hat + 3.0 * sk, d.C1 - 2.0 * d.a_hat * sk - 2.0 * p.kappa,
              0.25 * *d.C2};
  const auto num = detail::cubic_roots_numeric(c.coeffs[1], c.coeffs[2], c.coeffs[3]);
  c.crosscheck_gap = std::max({std::abs(num[0] - c.r1), std::abs(num[1] - c.r2),
                               std::abs(num[2] - c.r3)});
  return c;
}

struct STPoint {
  double s, t;
};

// (alpha, beta) -> (s, t), kappa >= 0: alpha beta = s + t - 2 sqrt(k) and
// -st = (alpha/2 - sqrt(k) beta)^2, with s >= t.
inline STPoint st_transform(double alpha, double beta, double kappa) {
  if (!(kappa >= 0.0)) throw std::domain_error("st_transform: kappa must be >= 0");
  const double sk = std::sqrt(kappa);
  const double ab = alpha * beta;
  const double t1 = 2.0 * sk + ab;
  const double t2 = alpha - 2.0 * sk * beta;
  const double rad = 0.5 * std::sqrt(t1 * t1 + t2 * t2);
  return {sk + 0.5 * ab + rad, sk + 0.5 * ab - rad};
}

// lambda(u) = int_0^u 2/(s - t); strictly increasing for kappa > 0.
inline double lambda_of_u(const AlphaBetaTrajectory& traj, double u) {
  const double kappa = traj.params().kappa;
  if (!(kappa > 0.0)) throw std::domain_error("lambda_of_u: requires kappa > 0");
  return quad::adaptive(
      [&](double t) {
        const auto q = traj.eval(t);
        const STPoint st = st_transform(q.alpha, q.beta, kappa);
        return 2.0 / (st.s - st.t);
      },
      0.0, u, 1e-12);
}

struct Periods {
  double M;
  std::optional<double> N;  // absent iff r1 = r2 (the integral diverges)
};

// M and N as quadratures over [2 sqrt(k), r3] and [r2, 0]; both endpoint
// singularities removed by the sin^2 substitution, the remaining factors
// handled adaptively (N peaks like 1/sqrt(r2 - r1) near coincident roots).
inline Periods periods_MN(const ParamTriple& p, double degenerate_gap = 1e-11) {
  if (!(p.kappa > 0.0)) throw std::domain_error("periods_MN: requires kappa > 0");
  const CubicData c = cubic_roots(p);
  const double sk = std::sqrt(p.kappa);

  const auto period = [](double lo, double hi, auto rest) {
    return 2.0 * quad::adaptive(
                     [&](double s) {
                       const double t = std::sin(0.5 * s) * std::sin(0.5 * s);
                       const double z = lo + (hi - lo) * t;
                       return 1.0 / std::sqrt(rest(z));
                     },
                     0.0, M_PI, 1e-12);
  };

  Periods out;
  out.M = period(2.0 * sk, c.r3,
                 [&](double z) { return z * (z - c.r1) * (z - c.r2); });
  if (c.r2 - c.r1 > degenerate_gap && c.r2 < -degenerate_gap) {
    out.N = period(c.r2, 0.0,
                   [&](double z) { return (2.0 * sk - z) * (z - c.r1) * (c.r3 - z); });
  }
  return out;
}

namespace detail {
// First positive root of f(traj-point) scanned from the dense trajectory,
// refined by Brent. Scan step per the bracketing design rule.
template <class F>
double first_root_on_trajectory(const AlphaBetaTrajectory& traj, F&& f, double skip,
                                const char* what) {
  const double u_hi = traj.u_max_pos();
  const double step = std::min(0.01, u_hi / 1000.0);
  const auto g = [&](double u) { return f(traj.eval(u)); };
  const auto br = roots::first_sign_change(g, skip, u_hi, step);
  if (!br) {
    if (traj.truncated())
      throw StripExhaustion(std::string(what) + ": trajectory overflow before a root",
                            u_hi);
    throw NoRootError(std::string(what) + ": no sign change bracketed in range");
  }
  if (br->first == br->second) return br->first;
  return roots::brent(g, br->first, br->second);
}
}  // namespace detail

// First positive root u1 of y(u) = alpha/2 + sqrt(k) beta (kappa > 0) or of
// alpha (kappa = 0, a > 1).
inline double u1(const AlphaBetaTrajectory& traj) {
  const ParamTriple& p = traj.params();
  if (p.kappa > 0.0) {
    const double sk = std::sqrt(p.kappa);
    return detail::first_root_on_trajectory(
        traj, [sk](const AlphaBetaTrajectory::Point& q) { return 0.5 * q.alpha + sk * q.beta; },
        1e-4, "u1");
  }
  if (p.kappa == 0.0 && p.a > 1.0) {
    return detail::first_root_on_trajectory(
        traj, [](const AlphaBetaTrajectory::Point& q) { return q.alpha; }, 1e-4, "u1");
  }
  throw std::domain_error("u1: requires kappa > 0, or kappa = 0 with a > 1");
}

// tau: first positive root of beta. Operational domain W: beta'(0) > 0 and a
// bracketed sign change before the trajectory leaves range; computed directly
// from the (alpha,beta) ODE for every kappa, never through (s,t).
inline double tau(const AlphaBetaTrajectory& traj) {
  const auto& d = traj.constants();
  if (!(d.beta_p0 > 0.0))
    throw std::domain_error("tau: beta'(0) <= 0 (A <= B, outside W)");
  return detail::first_root_on_trajectory(
      traj, [](const AlphaBetaTrajectory::Point& q) { return q.beta; }, 1e-4, "tau");
}

inline double tau(const ParamTriple& p, double u_max = 40.0, double tol = 1e-11) {
  AlphaBetaTrajectory traj(p, u_max, tol);
  return tau(traj);
}

// H(x) of the FHM comparison function, real for |x| < 1 (and x > -2 besides).
inline double H_wente(double x) {
  const double r = std::sqrt(1.0 - x);
  const double first = (1.0 + r) / (1.0 - r);
  const double second = (std::sqrt(2.0) - r) / (std::sqrt(2.0) + r);
  return first * std::pow(second, 1.0 / std::sqrt(2.0));
}

// F(x) = H(x) H(-x) on (0,1); strictly increasing, F(4/5) ~ -0.862875.
inline double F_wente(double x) {
  if (!(x > 0.0 && x < 1.0)) throw std::domain_error("F_wente: domain is (0,1)");
  return H_wente(x) * H_wente(-x);
}

}  // namespace fbma

#endif
