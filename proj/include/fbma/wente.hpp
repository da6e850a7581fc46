#ifndef FBMA_WENTE_HPP
#define FBMA_WENTE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fbma/numerics/quadrature.hpp"
#include "fbma/numerics/roots.hpp"
#include "fbma/ode/dopri5.hpp"

namespace fbma {

// A point (a,b,kappa) of the parameter space O: a,b >= 1, 4|k| < 1, -4ka < b.
struct ParamTriple {
  double a = 1, b = 1, kappa = 0;

  bool in_O(double slack = 1e-12) const {
    return a >= 1.0 - slack && b >= 1.0 - slack && 4.0 * std::abs(kappa) < 1.0 &&
           -4.0 * kappa * a < b;
  }
  // W1 closure in kappa >= 0: A > B >= 2 sqrt(k) A.
  bool in_W1(double slack = 1e-12) const;
};

struct DerivedConstants {
  double A;         // a + 1/a
  double B;         // b + 4k/b
  double a_hat;     // (-AB + 4k + 1)/4
  double alpha_p0;  // alpha'(0) = (B - 4kA)/4
  double beta_p0;   // beta'(0)  = (A - B)/4
  double C1;        // alpha'(0) beta'(0)
  std::optional<double> C2;  // only for kappa >= 0
};

inline DerivedConstants derived_constants_unchecked(const ParamTriple& p) {
  DerivedConstants d;
  d.A = p.a + 1.0 / p.a;
  d.B = p.b + 4.0 * p.kappa / p.b;
  d.a_hat = (-d.A * d.B + 4.0 * p.kappa + 1.0) / 4.0;
  d.alpha_p0 = (d.B - 4.0 * p.kappa * d.A) / 4.0;
  d.beta_p0 = (d.A - d.B) / 4.0;
  d.C1 = d.alpha_p0 * d.beta_p0;
  if (p.kappa >= 0.0) {
    const double sk = std::sqrt(p.kappa);
    const double t = sk * d.beta_p0 - 0.5 * d.alpha_p0;
    d.C2 = 4.0 * t * t;  // remaining C2 terms vanish at u = 0
  }
  return d;
}

inline DerivedConstants derived_constants(const ParamTriple& p) {
  if (!p.in_O()) throw std::domain_error("parameter triple outside O");
  return derived_constants_unchecked(p);
}

inline bool ParamTriple::in_W1(double slack) const {
  if (!(kappa >= 0.0) || !in_O(slack)) return false;
  const DerivedConstants d = derived_constants_unchecked(*this);
  return d.A > d.B && d.B >= 2.0 * std::sqrt(kappa) * d.A - slack;
}

// First integrals of the (alpha,beta) system, Eqs. evaluated pointwise.
inline double first_integral_C1(double al, double be, double alp, double bep,
                                const DerivedConstants& d, double kappa) {
  return alp * bep - d.a_hat * al * be + al * al * be * be + kappa * be * be +
         0.25 * al * al;
}

inline double first_integral_C2(double al, double be, double alp, double bep,
                                const DerivedConstants& d, double kappa) {
  const double sk = std::sqrt(kappa);
  const double w = al * bep - alp * be;
  const double t1 = sk * bep - 0.5 * alp;
  const double t2 = 0.5 * al - sk * be;
  return w * w + 4.0 * t1 * t1 + 4.0 * (al * be - d.a_hat - sk) * t2 * t2;
}

// Trajectory of the second-order system
//   alpha'' = a_hat alpha - 2 alpha^2 beta - 2 kappa beta
//   beta''  = a_hat beta  - 2 alpha beta^2 - alpha/2
// with the anti-symmetric initial data; integrated independently in both
// directions so the odd symmetry stays a falsifiable check.
class AlphaBetaTrajectory {
 public:
  struct Point {
    double alpha, beta, alpha_p, beta_p;
  };

  AlphaBetaTrajectory(const ParamTriple& p, double u_max, double tol = 1e-10)
      : p_(p), d_(derived_constants(p)) {
    const auto rhs = [this](double, const std::array<double, 4>& y,
                            std::array<double, 4>& dy) {
      const double al = y[0], be = y[1];
      dy[0] = y[2];
      dy[1] = y[3];
      dy[2] = d_.a_hat * al - 2.0 * al * al * be - 2.0 * p_.kappa * be;
      dy[3] = d_.a_hat * be - 2.0 * al * be * be - 0.5 * al;
    };
    ode::Options opt;
    opt.rtol = tol;
    opt.atol = tol * 1e-2;
    opt.guard = 1e6;  // polynomial RHS; integrate until overflow guard
    const std::array<double, 4> y0{0.0, 0.0, d_.alpha_p0, d_.beta_p0};
    fwd_ = ode::integrate<4>(rhs, 0.0, u_max, y0, opt);
    bwd_ = ode::integrate<4>(rhs, 0.0, -u_max, y0, opt);
  }

  Point eval(double u) const {
    const auto y = (u >= 0.0) ? fwd_.eval(u) : bwd_.eval(u);
    return {y[0], y[1], y[2], y[3]};
  }

  double u_max_pos() const { return fwd_.t_end(); }
  double u_max_neg() const { return bwd_.t_end(); }
  bool truncated() const { return fwd_.truncated() || bwd_.truncated(); }

  const ParamTriple& params() const { return p_; }
  const DerivedConstants& constants() const { return d_; }

  // Max relative drift of the first integral(s) over n samples of [0, u_hi].
  double c1_drift(double u_hi = 0.0, int n = 256) const {
    return drift(u_hi, n, false);
  }
  double c2_drift(double u_hi = 0.0, int n = 256) const {
    if (!(p_.kappa >= 0.0))
      throw std::domain_error("C2 is defined only for kappa >= 0");
    return drift(u_hi, n, true);
  }

 private:
  double drift(double u_hi, int n, bool second) const {
    if (u_hi == 0.0) u_hi = u_max_pos();
    u_hi = std::min(u_hi, u_max_pos());
    const double ref = second ? *d_.C2 : d_.C1;
    const double scale = std::max(1.0, std::abs(ref));
    double worst = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double u = u_hi * i / n;
      const Point q = eval(u);
      const double v = second
                           ? first_integral_C2(q.alpha, q.beta, q.alpha_p, q.beta_p, d_, p_.kappa)
                           : first_integral_C1(q.alpha, q.beta, q.alpha_p, q.beta_p, d_, p_.kappa);
      worst = std::max(worst, std::abs(v - ref) / scale);
    }
    return worst;
  }

  ParamTriple p_;
  DerivedConstants d_;
  ode::DenseSolution<4> fwd_, bwd_;
};

// Quartic p(x) = -(x-a)(x-1/a)(4kx+b)(x+1/b) and its derivative.
inline double p_quartic(double x, const ParamTriple& p) {
  return -(x - p.a) * (x - 1.0 / p.a) * (4.0 * p.kappa * x + p.b) * (x + 1.0 / p.b);
}

inline double p_quartic_deriv(double x, const ParamTriple& p) {
  const DerivedConstants d = derived_constants_unchecked(p);
  // p(x) = -4k x^4 - 4 alpha'(0) x^3 - 4 a_hat x^2 + 4 beta'(0) x - 1
  return -16.0 * p.kappa * x * x * x - 12.0 * d.alpha_p0 * x * x - 8.0 * d.a_hat * x +
         4.0 * d.beta_p0;
}

// Half-period of x(v): sigma = int_{1/a}^{a} 2/sqrt(p) dx, desingularized by
// x = h_a(t) = (a-1/a) t + 1/a followed by t = sin^2(s/2). The leftover factor
// q(t) = (4k h + b)(h + 1/b) is smooth and positive on O, so a fixed
// Gauss-Legendre rule converges uniformly down to a = 1.
inline double sigma(const ParamTriple& p) {
  if (!p.in_O()) throw std::domain_error("sigma: parameter triple outside O");
  static const quad::GLRule rule = quad::gauss_legendre(64);
  const auto integrand = [&p](double s) {
    const double t = std::sin(0.5 * s) * std::sin(0.5 * s);
    const double h = (p.a - 1.0 / p.a) * t + 1.0 / p.a;
    const double q = (4.0 * p.kappa * h + p.b) * (h + 1.0 / p.b);
    return 2.0 / std::sqrt(q);
  };
  return quad::gl(integrand, 0.0, M_PI, rule);
}

inline double sigma_closed_form_a1(double b, double kappa) {
  const double B = b + 4.0 * kappa / b;
  return 2.0 * M_PI / std::sqrt(4.0 * kappa + B + 1.0);
}

// x(v): solution of x'' = p'(x)/8, x(0) = 1/a, x'(0) = 0. Identically 1 when
// a = 1.
class VProfile {
 public:
  VProfile(const ParamTriple& p, double tol = 1e-11, double v_span = 0.0)
      : p_(p), sigma_(sigma(p)), rotational_(p.a <= 1.0 + 1e-14) {
    if (rotational_) return;
    if (v_span == 0.0) v_span = 2.5 * sigma_;
    v_span_ = v_span;
    const auto rhs = [this](double, const std::array<double, 2>& y,
                            std::array<double, 2>& dy) {
      dy[0] = y[1];
      dy[1] = 0.125 * p_quartic_deriv(y[0], p_);
    };
    ode::Options opt;
    opt.rtol = tol;
    opt.atol = tol * 1e-2;
    sol_ = ode::integrate<2>(rhs, 0.0, v_span, {1.0 / p_.a, 0.0}, opt);
  }

  double x(double v) const {
    if (rotational_) return 1.0;
    return sol_.eval_dim(fold(v), 0);
  }
  double xp(double v) const {
    if (rotational_) return 0.0;
    v = std::fmod(v, 2.0 * sigma_);
    if (v < 0) v += 2.0 * sigma_;
    if (v <= sigma_) return sol_.eval_dim(v, 1);
    return -sol_.eval_dim(2.0 * sigma_ - v, 1);
  }

  double half_period() const { return sigma_; }
  bool rotational() const { return rotational_; }
  const ParamTriple& params() const { return p_; }

  // Time of the first maximum of x(v), located on the raw trajectory; an
  // independent cross-check of the sigma quadrature.
  double sigma_from_ode() const {
    if (rotational_) return sigma_;
    const auto f = [this](double v) { return sol_.eval_dim(v, 1); };
    auto br = roots::first_sign_change(f, 0.05 * sigma_, std::min(v_span_, 1.9 * sigma_),
                                       0.02 * sigma_);
    if (!br) throw BracketError("sigma_from_ode: no turning point found");
    return roots::brent(f, br->first, br->second);
  }

  // Residual of the first integral 4 x'^2 = p(x), max over n samples.
  double energy_residual(int n = 512) const {
    if (rotational_) return 0.0;
    double worst = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double v = 2.0 * sigma_ * i / n;
      const double xx = x(v), xv = xp(v);
      worst = std::max(worst, std::abs(4.0 * xv * xv - p_quartic(xx, p_)));
    }
    return worst;
  }

 private:
  // x is 2 sigma periodic and even about every multiple of sigma.
  double fold(double v) const {
    v = std::fmod(v, 2.0 * sigma_);
    if (v < 0) v += 2.0 * sigma_;
    if (v > sigma_) v = 2.0 * sigma_ - v;
    return v;
  }

  ParamTriple p_;
  double sigma_;
  bool rotational_;
  double v_span_ = 0.0;
  ode::DenseSolution<2> sol_;
};

// phi(u,v) from the first-integral identity omega_v^2 = phi/4.
inline double phi_of(double al, double be, double alp, double bep, double omega,
                     const DerivedConstants& d, double kappa) {
  const double ew = std::exp(omega), iw = 1.0 / ew;
  return -(4.0 * kappa + al * al) * ew * ew - (1.0 + be * be) * iw * iw -
         4.0 * alp * ew + 4.0 * bep * iw + 6.0 * al * be - 4.0 * d.a_hat;
}

inline constexpr double kOmegaGuard = 50.0;

// omega(u, v0) along u for one v0: dw/du = (alpha e^w + beta e^-w)/2.
// Returns dense solutions for both directions; truncation marks the strip.
struct OmegaLine {
  ode::DenseSolution<1> fwd, bwd;
  double v0 = 0;

  double omega(double u) const { return (u >= 0 ? fwd : bwd).eval(u)[0]; }
  double u_reached_pos() const { return fwd.t_end(); }
  double u_reached_neg() const { return bwd.t_end(); }
  bool exhausted() const { return fwd.truncated() || bwd.truncated(); }
};

inline OmegaLine omega_line(const AlphaBetaTrajectory& traj, double x_v0, double v0,
                            double u_max, double tol = 1e-11) {
  const auto rhs = [&traj](double u, const std::array<double, 1>& y,
                           std::array<double, 1>& dy) {
    const auto q = traj.eval(u);
    dy[0] = 0.5 * (q.alpha * std::exp(y[0]) + q.beta * std::exp(-y[0]));
  };
  ode::Options opt;
  opt.rtol = tol;
  opt.atol = tol * 1e-2;
  opt.guard = kOmegaGuard;
  OmegaLine line;
  line.v0 = v0;
  const double u_hi = std::min(u_max, traj.u_max_pos());
  const double u_lo = std::max(-u_max, traj.u_max_neg());
  line.fwd = ode::integrate<1>(rhs, 0.0, u_hi, {std::log(x_v0)}, opt);
  line.bwd = ode::integrate<1>(rhs, 0.0, u_lo, {std::log(x_v0)}, opt);
  return line;
}

// omega on a rectangular grid, one u-ODE per v node. Cells beyond the strip
// of existence are NaN.
struct MetricField {
  ParamTriple p;
  std::vector<double> u_nodes, v_nodes;
  std::vector<double> omega;    // row-major: omega[iu * nv + jv]
  std::vector<double> omega_u;  // from the defining relation
  double u_strip = 0;           // largest |u| fully covered across the grid
  bool exhausted = false;

  int nu() const { return static_cast<int>(u_nodes.size()); }
  int nv() const { return static_cast<int>(v_nodes.size()); }
  double at(int iu, int jv) const { return omega[iu * nv() + jv]; }
};

inline MetricField omega_field(const ParamTriple& p, double u_max, int n_u, int n_v,
                               double v_span = 0.0, double tol = 1e-11) {
  AlphaBetaTrajectory traj(p, u_max + 1.0, tol);
  VProfile vp(p, tol);
  MetricField f;
  f.p = p;
  if (v_span == 0.0) v_span = 2.0 * vp.half_period();
  for (int i = 0; i < n_u; ++i)
    f.u_nodes.push_back(-u_max + 2.0 * u_max * i / (n_u - 1));
  for (int j = 0; j < n_v; ++j) f.v_nodes.push_back(v_span * j / (n_v - 1));
  f.omega.assign(static_cast<std::size_t>(n_u) * n_v,
                 std::numeric_limits<double>::quiet_NaN());
  f.omega_u.assign(f.omega.size(), std::numeric_limits<double>::quiet_NaN());
  f.u_strip = u_max;
  for (int j = 0; j < n_v; ++j) {
    const double v0 = f.v_nodes[j];
    const OmegaLine line = omega_line(traj, vp.x(v0), v0, u_max, tol);
    if (line.exhausted()) f.exhausted = true;
    f.u_strip = std::min({f.u_strip, line.u_reached_pos(), -line.u_reached_neg()});
    for (int i = 0; i < n_u; ++i) {
      const double u = f.u_nodes[i];
      const bool ok = (u >= 0) ? (u <= line.u_reached_pos()) : (u >= line.u_reached_neg());
      if (!ok) continue;
      const double w = line.omega(u);
      f.omega[i * n_v + j] = w;
      const auto q = traj.eval(u);
      f.omega_u[i * n_v + j] = 0.5 * (q.alpha * std::exp(w) + q.beta * std::exp(-w));
    }
  }
  return f;
}

// Max-norm of the discrete Gauss residual D(omega) + k e^{2w} - e^{-2w}/4 on
// interior nodes, five-point Laplacian (du and dv may differ).
inline double gauss_residual(const MetricField& f, double kappa) {
  const int nu = f.nu(), nv = f.nv();
  if (nu < 3 || nv < 3) throw std::domain_error("gauss_residual: grid too small");
  const double du = f.u_nodes[1] - f.u_nodes[0];
  const double dv = f.v_nodes[1] - f.v_nodes[0];
  double worst = 0.0;
  for (int i = 1; i + 1 < nu; ++i) {
    for (int j = 1; j + 1 < nv; ++j) {
      const double w = f.at(i, j);
      const double wl = f.at(i - 1, j), wr = f.at(i + 1, j);
      const double wd = f.at(i, j - 1), wu = f.at(i, j + 1);
      if (!std::isfinite(w) || !std::isfinite(wl) || !std::isfinite(wr) ||
          !std::isfinite(wd) || !std::isfinite(wu))
        continue;
      const double lap = (wl - 2.0 * w + wr) / (du * du) + (wd - 2.0 * w + wu) / (dv * dv);
      const double res = lap + kappa * std::exp(2.0 * w) - 0.25 * std::exp(-2.0 * w);
      worst = std::max(worst, std::abs(res));
    }
  }
  return worst;
}

// Max-norm of omega_v^2 - phi/4 with omega_v by centered differences in v.
inline double phi_residual(const MetricField& f, const AlphaBetaTrajectory& traj) {
  const int nu = f.nu(), nv = f.nv();
  const double dv = f.v_nodes[1] - f.v_nodes[0];
  double worst = 0.0;
  for (int i = 0; i < nu; ++i) {
    const auto q = traj.eval(f.u_nodes[i]);
    for (int j = 1; j + 1 < nv; ++j) {
      const double w = f.at(i, j), wd = f.at(i, j - 1), wu = f.at(i, j + 1);
      if (!std::isfinite(w) || !std::isfinite(wd) || !std::isfinite(wu)) continue;
      const double wv = (wu - wd) / (2.0 * dv);
      const double phi =
          phi_of(q.alpha, q.beta, q.alpha_p, q.beta_p, w, traj.constants(), f.p.kappa);
      worst = std::max(worst, std::abs(wv * wv - 0.25 * phi));
    }
  }
  return worst;
}

}  // namespace fbma

#endif
