#ifndef FBMA_CATENOID_HPP
#define FBMA_CATENOID_HPP

#include <cmath>
#include <optional>
#include <stdexcept>

#include "fbma/numerics/quadrature.hpp"
#include "fbma/numerics/roots.hpp"
#include "fbma/ode/dopri5.hpp"
#include "fbma/spaceform.hpp"

namespace fbma {

// Rotational profile (x, x', x3, x4)(s) in arclength s, the kappa-uniform
// linear system; no 1/kappa singularities anywhere.
class CatenoidProfile {
 public:
  explicit CatenoidProfile(double kappa, double s_max = 10.0, double tol = 1e-11)
      : kappa_(kappa), delta_(2.0 / (4.0 * kappa + 1.0)) {
    if (!(std::abs(kappa) < 0.25))
      throw std::domain_error("CatenoidProfile: |kappa| < 1/4 required");
    const auto rhs = [this](double, const std::array<double, 4>& y,
                            std::array<double, 4>& dy) {
      const double x = y[0], xp = y[1], x3 = y[2], x4 = y[3];
      const double den = kappa_ * x * x - 1.0;  // negative on the profile
      dy[0] = xp;
      dy[1] = -kappa_ * x + delta_ * delta_ / (x * x * x);
      dy[2] = kappa_ * x * xp / den * x3 - delta_ * x4 / (x * den);
      dy[3] = kappa_ * x * xp / den * x4 + kappa_ * delta_ * x3 / (x * den);
    };
    const double r = std::sqrt(4.0 * kappa + 1.0);
    ode::Options opt;
    opt.rtol = tol;
    opt.atol = tol * 1e-2;
    opt.guard = 1e150;  // exponential growth for kappa < 0 is legitimate state
    sol_ = ode::integrate<4>(rhs, 0.0, s_max, {2.0 / r, 0.0, 0.0, 1.0 / r}, opt);
    bwd_ = ode::integrate<4>(rhs, 0.0, -s_max, {2.0 / r, 0.0, 0.0, 1.0 / r}, opt);
  }

  struct State {
    double x, xp, x3, x4;
  };

  State at(double s) const {
    const auto y = (s >= 0 ? sol_ : bwd_).eval(s);
    return {y[0], y[1], y[2], y[3]};
  }

  double kappa() const { return kappa_; }
  double delta() const { return delta_; }
  double s_reached() const { return sol_.t_end(); }

  Vec4 point(double s, double theta = 0.0) const {
    const State q = at(s);
    return {q.x * std::cos(theta), -q.x * std::sin(theta), q.x3, q.x4};
  }

  // x3' and x4' recomputed from the system (needed by F and the chart map)
  double x3p(double s) const {
    const State q = at(s);
    const double den = kappa_ * q.x * q.x - 1.0;
    return kappa_ * q.x * q.xp / den * q.x3 - delta_ * q.x4 / (q.x * den);
  }
  double x4p(double s) const {
    const State q = at(s);
    const double den = kappa_ * q.x * q.x - 1.0;
    return kappa_ * q.x * q.xp / den * q.x4 + kappa_ * delta_ * q.x3 / (q.x * den);
  }

  double h_of(double x) const {
    return x * x - kappa_ * x * x * x * x - delta_ * delta_;
  }
  // max residuals of x'^2 = h(x)/x^2 and of the quadric over [0, s_hi]
  double conservation_residual(double s_hi, int n = 256) const {
    double worst = 0;
    for (int i = 0; i <= n; ++i) {
      const double s = s_hi * i / n;
      const State q = at(s);
      worst = std::max(worst, std::abs(q.xp * q.xp - h_of(q.x) / (q.x * q.x)));
      worst = std::max(worst, std::abs(manifold_residual(point(s), kappa_)));
    }
    return worst;
  }

  // first maximum of x(s) for kappa > 0 (x is periodic between the roots of h)
  double first_max() const {
    if (!(kappa_ > 0)) throw std::domain_error("first_max: kappa > 0 only");
    const auto f = [this](double s) { return at(s).xp; };
    const auto br = roots::first_sign_change(f, 1e-3, s_reached(), 0.01);
    if (!br) throw BracketError("first_max: no turning point before s_max");
    return roots::brent(f, br->first, br->second);
  }

 private:
  double kappa_, delta_;
  ode::DenseSolution<4> sol_, bwd_;
};

// F(s) = x3 x' - x3' x; the free-boundary contact function.
inline double F_of_s(const CatenoidProfile& prof, double s) {
  const auto q = prof.at(s);
  return q.x3 * q.xp - prof.x3p(s) * q.x;
}

// Closed form for F' out of the system itself.
inline double F_prime_of_s(const CatenoidProfile& prof, double s) {
  const auto q = prof.at(s);
  const double k = prof.kappa();
  const double num = 2.0 * (2.0 * q.x3 + (1.0 + 4.0 * k) * q.x * q.x * q.xp * q.x4);
  const double den =
      (1.0 + 4.0 * k) * (1.0 + 4.0 * k) * q.x * q.x * q.x * (1.0 - k * q.x * q.x);
  return num / den;
}

// First positive root of F; the monotonicity side conditions are checked on
// the way (x increasing, contact from below, F' positive at the root).
inline double s_tilde(const CatenoidProfile& prof) {
  const auto f = [&](double s) { return F_of_s(prof, s); };
  if (!(f(0.0) < 0.0)) throw IntegrationFailure("s_tilde: F(0) >= 0");
  const auto br = roots::first_sign_change(f, 0.0, prof.s_reached(), 0.02);
  if (!br) throw BracketError("s_tilde: F has no sign change before s_max");
  const double st = roots::brent(f, br->first, br->second);
  if (!(F_prime_of_s(prof, st) > 0.0))
    throw IntegrationFailure("s_tilde: F'(s~) <= 0");
  return st;
}

// s~ grows without bound toward kappa = -1/4; extend the profile until the
// sign change shows up (or give up at a range that exceeds the working band).
inline double s_tilde(double kappa, double tol = 1e-12) {
  for (double s_max = 10.0; s_max <= 320.0; s_max *= 2.0) {
    CatenoidProfile prof(kappa, s_max, tol);
    try {
      return s_tilde(prof);
    } catch (const BracketError&) {
      if (prof.s_reached() < 0.99 * s_max) throw;  // profile died first
    }
  }
  throw BracketError("s_tilde: no root of F within the extended range");
}

// a = 1 conformal metric: omega'' = e^{-2w}/4 - k e^{2w}, w(0) = w'(0) = 0,
// with the arclength s(u) = int e^w riding along. Independent of b.
class CatenoidMetric {
 public:
  explicit CatenoidMetric(double kappa, double u_max = 40.0, double tol = 1e-12)
      : kappa_(kappa) {
    const auto rhs = [this](double, const std::array<double, 3>& y,
                            std::array<double, 3>& dy) {
      dy[0] = y[1];
      dy[1] = 0.25 * std::exp(-2.0 * y[0]) - kappa_ * std::exp(2.0 * y[0]);
      dy[2] = std::exp(y[0]);
    };
    ode::Options opt;
    opt.rtol = tol;
    opt.atol = tol * 1e-2;
    opt.guard = 1e200;
    opt.guard_dim = 0;
    opt.guard_dim_value = kOmegaGuard_;
    sol_ = ode::integrate<3>(rhs, 0.0, u_max, {0.0, 0.0, 0.0}, opt);
  }

  double omega(double u) const { return sol_.eval(u)[0]; }
  double s_of_u(double u) const { return sol_.eval(u)[2]; }
  double u_reached() const { return sol_.t_end(); }

  // invert s(u) = s0 (monotone since e^w > 0)
  double u_of_s(double s0) const {
    const auto f = [&](double u) { return s_of_u(u) - s0; };
    if (f(u_reached()) < 0)
      throw BracketError("u_of_s: arclength target beyond the strip");
    return roots::brent(f, 0.0, u_reached());
  }

 private:
  static constexpr double kOmegaGuard_ = 50.0;
  double kappa_;
  ode::DenseSolution<3> sol_;
};

inline double u_tilde(double kappa, double tol = 1e-12) {
  const double st = s_tilde(kappa, tol);
  return CatenoidMetric(kappa, 40.0, tol).u_of_s(st);
}

// Free-boundary ball of the rotational annulus: level set of <., e4>_kappa for
// kappa != 0, round ball of radius R in the x4 = 1 chart for kappa = 0.
struct FreeBoundaryBall {
  Vec4 center;            // always e4
  double level_or_radius;  // x4(s~)/kappa, or R = sqrt(x^2 + x3^2)(s~)
  double s_tilde, u_tilde;
  double kappa;

  // signed containment margin: >= 0 inside the ball
  double margin(const Vec4& x) const {
    if (kappa != 0.0) return metric_inner(x, {0, 0, 0, 1}, kappa) - level_or_radius;
    const double r = std::sqrt(x.x1 * x.x1 + x.x2 * x.x2 + x.x3 * x.x3);
    return level_or_radius - r;
  }
};

inline FreeBoundaryBall fb_ball(double kappa, double tol = 1e-12) {
  FreeBoundaryBall b;
  b.kappa = kappa;
  b.center = e4();
  b.s_tilde = s_tilde(kappa, tol);
  CatenoidProfile prof(kappa, 1.05 * b.s_tilde + 1.0, tol);
  b.u_tilde = CatenoidMetric(kappa, 40.0, tol).u_of_s(b.s_tilde);
  const auto q = prof.at(b.s_tilde);
  b.level_or_radius =
      (kappa != 0.0) ? q.x4 / kappa : std::sqrt(q.x * q.x + q.x3 * q.x3);
  return b;
}

// Orthogonal radius of the Euclidean catenoid of neck radius 2, closed forms.
inline double orth_radius(double u) {
  return 2.0 / std::tanh(0.5 * u) * std::cosh(0.5 * u);
}

inline Vec4 c_perp(double u) {
  return {0.0, 0.0, u - 2.0 / std::tanh(0.5 * u), 1.0};
}

// Intersection of the tangent geodesic zeta_s with the rotation axis, through
// the totally geodesic chart (x1/x4, x3/x4).
inline Vec4 hat_p(const CatenoidProfile& prof, double s) {
  const auto q = prof.at(s);
  const double denom = q.xp * q.x4 - q.x * prof.x4p(s);
  if (!(denom > 0.0))
    throw std::domain_error("hat_p: tangent line parallel to the axis");
  const double ybar = F_of_s(prof, s) / denom;
  const double k = prof.kappa();
  const double w = 1.0 + k * ybar * ybar;
  if (!(w > 0.0)) throw std::domain_error("hat_p: chart point outside the model");
  const double x4 = 1.0 / std::sqrt(w);
  return {0.0, 0.0, ybar * x4, x4};
}

// Angle function phi(s) recovered from the profile and, as a cross-check, by
// direct quadrature of the appendix integrals (kappa != 0 only).
inline double phi_from_state(const CatenoidProfile& prof, double s) {
  const double k = prof.kappa();
  const auto q = prof.at(s);
  if (k > 0) {
    const double a = q.x3 / std::sqrt(1.0 / k - q.x * q.x);
    const double b = q.x4 / std::sqrt(1.0 - k * q.x * q.x);
    return std::atan2(a, b);
  }
  if (k < 0) return std::asinh(q.x3 / std::sqrt(q.x * q.x - 1.0 / k));
  throw std::domain_error("phi_from_state: kappa != 0 only");
}

inline double phi_quadrature(const CatenoidProfile& prof, double s) {
  const double k = prof.kappa();
  if (k == 0.0) throw std::domain_error("phi_quadrature: kappa != 0 only");
  const double d = prof.delta();
  return quad::adaptive(
      [&](double t) {
        const double x = prof.at(t).x;
        if (k > 0) return d / (std::sqrt(k) * x * (1.0 / k - x * x));
        return d / (std::sqrt(-k) * x * (x * x - 1.0 / k));
      },
      0.0, s, 1e-12);
}

}  // namespace fbma

#endif
