#ifndef FBMA_PERIOD_HPP
#define FBMA_PERIOD_HPP

#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fbma/immersion.hpp"
#include "fbma/numerics/roots.hpp"

namespace fbma {

// Stereographic image gamma = phi_kappa(psi(0,.)) of the planar geodesic, with
// unwrapped tangent angles. Lives in {z = 0} by the S_kappa symmetry.
struct PlanarCurve {
  std::vector<double> v, x, y, theta;  // theta: unwrapped tangent angle
  double sigma = 0;
  double gram_margin = 0;  // normalized Gram gap at (nu0, nu1); > 0 on O^-

  double closure_gap() const {
    const double dx = x.back() - x.front(), dy = y.back() - y.front();
    return std::hypot(dx, dy);
  }
  double turning(double v_hi) const {
    // theta at the sample closest to v_hi (sampling is uniform and dense)
    const double t = (v_hi - v.front()) / (v.back() - v.front());
    const std::size_t i =
        std::min(v.size() - 1, static_cast<std::size_t>(std::lround(t * (v.size() - 1))));
    return theta[i] - theta.front();
  }
};

inline PlanarCurve gamma_curve(const ParamTriple& p, double v_span = 0.0,
                               int samples = 4096, double tol = 1e-11) {
  if (!p.in_O()) throw std::domain_error("gamma_curve: triple outside O");
  const DerivedConstants d = derived_constants_unchecked(p);
  VProfile vp(p, tol);
  const double s = vp.half_period();
  if (v_span == 0.0) v_span = 2.0 * s;

  const Frame origin = initial_frame(p, true);
  const AlphaBetaTrajectory::Point ab0{0.0, 0.0, d.alpha_p0, d.beta_p0};
  FrameVLine line(p.kappa, d.a_hat, ab0, origin, 0.0, v_span, tol);
  line.require_complete(v_span);

  PlanarCurve c;
  c.sigma = s;
  c.v.reserve(samples + 1);
  double prev = 0;
  for (int i = 0; i <= samples; ++i) {
    const double v = v_span * i / samples;
    const Frame f = line.at(v);
    const double den = f.psi.x4 + 1.0;
    c.v.push_back(v);
    c.x.push_back(2.0 * f.psi.x1 / den);
    c.y.push_back(2.0 * f.psi.x2 / den);
    // tangent of the projected curve by the chain rule
    const double gx = 2.0 * (f.psi_v.x1 * den - f.psi.x1 * f.psi_v.x4) / (den * den);
    const double gy = 2.0 * (f.psi_v.x2 * den - f.psi.x2 * f.psi_v.x4) / (den * den);
    if (!(gx * gx + gy * gy > 0))
      throw IntegrationFailure("gamma_curve: vanishing tangent");
    double th = std::atan2(gy, gx);
    if (i > 0) th += 2.0 * M_PI * std::round((prev - th) / (2.0 * M_PI));
    c.theta.push_back(th);
    prev = th;
  }

  // O^- certificate: the Gram condition on nu_0, nu_1
  const Vec4 nu0 = origin.psi_v;
  const Vec4 nu1 = line.at(s).psi_v;
  const double g00 = metric_inner(nu0, nu0, p.kappa);
  const double g11 = metric_inner(nu1, nu1, p.kappa);
  const double g01 = metric_inner(nu0, nu1, p.kappa);
  c.gram_margin = 1.0 - g01 * g01 / (g00 * g11);
  if (!(c.gram_margin > 0))
    throw std::domain_error("gamma_curve: Gram condition fails (outside O^-)");
  return c;
}

// Theta(a,b,kappa): 1/pi times the turning of gamma' over one half-period,
// by angle unwrapping (exact up to aliasing, which the sampling rate excludes).
// The equivalent curvature integral (1/pi) int k_gamma |gamma'| dv -- or its
// conformal-change expression through the geodesic curvature in S_kappa -- is
// subsumed by the unwrapped angle and is not a separate computational path.
inline double period_theta(const ParamTriple& p, double tol = 1e-11, int samples = 2048) {
  const PlanarCurve c = gamma_curve(p, 0.0, samples, tol);
  return c.turning(c.sigma) / M_PI;
}

inline double theta_closed_form(double b, double kappa) {
  const double B = b + 4.0 * kappa / b;
  return -std::sqrt(4.0 * kappa + 1.0) / std::sqrt(4.0 * kappa + B + 1.0);
}

// Inverse of the closed form on the level Theta = Theta0 at a = 1.
inline double b_level(double theta0, double kappa) {
  const double t2 = theta0 * theta0;
  const double disc =
      (1.0 + 4.0 * kappa) * (1.0 + 4.0 * kappa) * (1.0 - t2) * (1.0 - t2) -
      16.0 * t2 * t2 * kappa;
  if (!(disc >= 0.0))
    throw std::domain_error("b_level: complex branch (discriminant < 0)");
  return ((1.0 + 4.0 * kappa) * (1.0 - t2) + std::sqrt(disc)) / (2.0 * t2);
}

// Solve Theta(a, b, kappa) = theta0 in b, bracket expanded around the a = 1
// closed-form seed. dTheta/db > 0 near a = 1 keeps the bracket honest.
inline double b_solve(double theta0, double a, double kappa, double tol = 1e-10) {
  const double seed = b_level(theta0, kappa);
  const auto f = [&](double b) { return period_theta({a, b, kappa}) - theta0; };
  double lo = std::max(1.0, seed * 0.98), hi = seed * 1.02;
  double flo = f(lo), fhi = f(hi);
  for (int i = 0; i < 8 && flo * fhi > 0; ++i) {
    if (std::abs(flo) < std::abs(fhi)) {
      lo = std::max(1.0, lo - (hi - lo));
      flo = f(lo);
    } else {
      hi += (hi - lo);
      fhi = f(hi);
    }
    if (hi > 1.6 * seed + 2.0) break;
  }
  if (flo * fhi > 0)
    throw BracketError("b_solve: no bracket around the closed-form seed");
  return roots::brent(f, lo, hi, tol);
}

// Winding number of gamma' over [0, 2 n sigma]; exact integer when the period
// closes. Reports the closure gap through the returned struct.
struct RotationIndex {
  int index = 0;
  double integer_gap = 0;  // distance of the raw winding to the integer
  double closure_gap = 0;
};

inline RotationIndex rotation_index(const ParamTriple& p, int n, double tol = 1e-11) {
  VProfile vp(p, tol);
  const double span = 2.0 * n * vp.half_period();
  const int samples = 2048 * n;
  const PlanarCurve c = gamma_curve(p, span, samples, tol);
  const double w = (c.theta.back() - c.theta.front()) / (2.0 * M_PI);
  RotationIndex r;
  r.index = static_cast<int>(std::lround(w));
  r.integer_gap = std::abs(w - r.index);
  r.closure_gap = c.closure_gap();
  return r;
}

// Continued-fraction convergents of theta with bounded denominator; diagnostic
// only (the pipeline prescribes q and solves Theta = q instead).
struct RationalTheta {
  int m = 0, n = 1;
  double gap = 0;
};

inline std::optional<RationalTheta> detect_rational(double theta, int max_den = 50,
                                                    double gap_tol = 1e-7) {
  double x = std::abs(theta);
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = x;
  for (int it = 0; it < 64; ++it) {
    const long ai = static_cast<long>(std::floor(frac));
    const long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    const double rem = frac - ai;
    if (rem < 1e-15) break;
    frac = 1.0 / rem;
  }
  if (q1 == 0) return std::nullopt;
  RationalTheta r;
  r.m = static_cast<int>(theta < 0 ? -p1 : p1);
  r.n = static_cast<int>(q1);
  r.gap = std::abs(theta - static_cast<double>(r.m) / r.n);
  if (r.gap > gap_tol) return std::nullopt;
  return r;
}

}  // namespace fbma

#endif
