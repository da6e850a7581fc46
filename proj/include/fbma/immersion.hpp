#ifndef FBMA_IMMERSION_HPP
#define FBMA_IMMERSION_HPP

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "fbma/spaceform.hpp"
#include "fbma/wente.hpp"

namespace fbma {

struct Frame {
  Vec4 psi, psi_u, psi_v, N;
  double u = 0, v = 0;
  double omega = 0;
};

// Residuals of everything the fundamental theorem promises about a frame.
struct FrameInvariants {
  double manifold;    // psi on M^3(kappa)
  double conformal;   // <psi_u,psi_v>
  double first_form;  // | <psi_u,psi_u> - e^{2w} | and same for psi_v
  double normal;      // | <N,N> - 1 |
  double tangency;    // <N,psi_u>, <N,psi_v>, <N,psi> (kappa != 0)

  double worst() const {
    return std::max({manifold, conformal, first_form, normal, tangency});
  }
};

// Residuals of the quadratic identities are divided by max(1, e^{2w}) so the
// figure stays a relative drift where the conformal factor is large; at
// moderate omega this matches the absolute residual.
inline FrameInvariants frame_invariants(const Frame& f, double kappa) {
  FrameInvariants r;
  const double e2w = std::exp(2.0 * f.omega);
  const double scale = std::max(1.0, e2w);
  r.manifold = std::abs(manifold_residual(f.psi, kappa)) / scale;
  r.conformal = std::abs(metric_inner(f.psi_u, f.psi_v, kappa)) / scale;
  r.first_form = std::max(std::abs(metric_inner(f.psi_u, f.psi_u, kappa) - e2w),
                          std::abs(metric_inner(f.psi_v, f.psi_v, kappa) - e2w)) /
                 scale;
  r.normal = std::abs(metric_inner(f.N, f.N, kappa) - 1.0);
  r.tangency = std::max(std::abs(metric_inner(f.N, f.psi_u, kappa)),
                        std::abs(metric_inner(f.N, f.psi_v, kappa))) /
               std::sqrt(scale);
  if (kappa != 0.0)
    r.tangency =
        std::max(r.tangency, std::abs(metric_inner(f.N, f.psi, kappa)) / std::sqrt(scale));
  else
    r.tangency = std::max(r.tangency, std::abs(f.N.x4));
  return r;
}

// m'(0) = B e1 + C e4 in the unrecentered frame.
inline void bc_constants(const ParamTriple& p, double& B, double& C) {
  const DerivedConstants d = derived_constants_unchecked(p);
  B = 0.25 * (p.a - 1.0 / p.a + d.B);
  C = 0.125 * (4.0 * p.kappa * (p.a - 1.0 / p.a) - d.B);
}

// The point where the geodesic L_kappa = P meet M^3(kappa) crosses {x3 = 0};
// for kappa < 0 requires the plane P to be timelike, C^2 + kappa B^2 > 0.
inline Vec4 axis_point(const ParamTriple& p) {
  double B, C;
  bc_constants(p, B, C);
  const double D = C * C + p.kappa * B * B;
  if (!(D > 0.0))
    throw std::domain_error("axis_point: C^2 + kappa B^2 <= 0 (P not timelike)");
  const double s = std::sqrt(D);
  return {-B / s, 0.0, 0.0, -C / s};
}

inline Frame initial_frame(const ParamTriple& p, bool recentered) {
  if (!p.in_O()) throw std::domain_error("initial_frame: triple outside O");
  const double ew = 1.0 / p.a;  // e^{omega(0,0)} = x(0)
  Frame f;
  f.u = f.v = 0;
  f.omega = -std::log(p.a);
  f.psi = e4();
  f.psi_u = e3() * ew;
  f.psi_v = e2() * (-ew);
  f.N = e1();
  if (recentered) {
    const Isometry phi = recenter_isometry(axis_point(p), p.kappa);
    f.psi = phi(f.psi);
    f.psi_u = phi(f.psi_u);
    f.psi_v = phi(f.psi_v);
    f.N = phi(f.N);
  }
  return f;
}

namespace detail {

inline void gw_u_rhs(const std::array<double, 17>& y, std::array<double, 17>& dy,
                     double omega_u, double omega_v, double kappa) {
  const double e2w = std::exp(2.0 * y[16]);
  const double ie2w = 1.0 / e2w;
  for (int i = 0; i < 4; ++i) {
    const double psi = y[i], psu = y[4 + i], psv = y[8 + i], n = y[12 + i];
    dy[i] = psu;
    dy[4 + i] = omega_u * psu - omega_v * psv + 0.5 * n - kappa * e2w * psi;
    dy[8 + i] = omega_v * psu + omega_u * psv;
    dy[12 + i] = -0.5 * ie2w * psu;
  }
  dy[16] = omega_u;
}

inline void gw_v_rhs(const std::array<double, 18>& y, std::array<double, 18>& dy,
                     double omega_u, double omega_v, double omega_vv, double kappa) {
  const double e2w = std::exp(2.0 * y[16]);
  const double ie2w = 1.0 / e2w;
  for (int i = 0; i < 4; ++i) {
    const double psi = y[i], psu = y[4 + i], psv = y[8 + i], n = y[12 + i];
    dy[i] = psv;
    dy[4 + i] = omega_v * psu + omega_u * psv;
    dy[8 + i] = -omega_u * psu + omega_v * psv - 0.5 * n - kappa * e2w * psi;
    dy[12 + i] = 0.5 * ie2w * psv;
  }
  dy[16] = omega_v;
  dy[17] = omega_vv;
}

inline Frame unpack_u(const std::array<double, 17>& y, double u, double v0) {
  Frame f;
  f.psi = {y[0], y[1], y[2], y[3]};
  f.psi_u = {y[4], y[5], y[6], y[7]};
  f.psi_v = {y[8], y[9], y[10], y[11]};
  f.N = {y[12], y[13], y[14], y[15]};
  f.omega = y[16];
  f.u = u;
  f.v = v0;
  return f;
}

}  // namespace detail

// Frames along u -> psi(u, v0). omega rides along as a state; omega_v comes
// from the first-integral identity omega_v = s0 sqrt(phi)/2 with the constant
// sign s0 = sgn x'(v0), which never flips along a u-line.
class FrameULine {
 public:
  FrameULine(const AlphaBetaTrajectory& traj, const Frame& start, int sign_xp_v0,
             double u_target, double tol = 1e-11)
      : traj_(&traj), v0_(start.v), s0_(sign_xp_v0) {
    const auto& d = traj.constants();
    const double kappa = traj.params().kappa;
    const auto rhs = [this, &d, kappa](double u, const std::array<double, 17>& y,
                                       std::array<double, 17>& dy) {
      const auto q = traj_->eval(u);
      const double ew = std::exp(y[16]), iw = 1.0 / ew;
      const double wu = 0.5 * (q.alpha * ew + q.beta * iw);
      double wv = 0.0;
      if (s0_ != 0) {
        const double phi = phi_of(q.alpha, q.beta, q.alpha_p, q.beta_p, y[16], d, kappa);
        wv = 0.5 * s0_ * std::sqrt(std::max(phi, 0.0));
      }
      detail::gw_u_rhs(y, dy, wu, wv, kappa);
    };
    std::array<double, 17> y0{};
    pack(start, y0);
    ode::Options opt;
    // frame lines run a 10x safety below the requested tolerance so the
    // delivered global drift stays near tol over multi-period spans
    opt.rtol = 0.1 * tol;
    opt.atol = tol * 1e-3;
    opt.guard = 1e25;
    opt.guard_dim = 16;  // strip ends where the conformal factor blows up
    opt.guard_dim_value = kOmegaGuard;
    sol_ = ode::integrate<17>(rhs, start.u, u_target, y0, opt);
  }

  Frame at(double u) const { return detail::unpack_u(sol_.eval(u), u, v0_); }
  double omega_v(double u) const {
    if (s0_ == 0) return 0.0;
    const auto q = traj_->eval(u);
    const double w = sol_.eval(u)[16];
    const double phi = phi_of(q.alpha, q.beta, q.alpha_p, q.beta_p, w,
                              traj_->constants(), traj_->params().kappa);
    return 0.5 * s0_ * std::sqrt(std::max(phi, 0.0));
  }
  double u_reached() const { return sol_.t_end(); }
  bool exhausted() const { return sol_.truncated(); }
  void require_complete(double u_target) const {
    if (exhausted() || std::abs(u_reached() - u_target) > 1e-9)
      throw StripExhaustion("frame u-line left the strip at u = " +
                                std::to_string(u_reached()),
                            u_reached());
  }

 private:
  static void pack(const Frame& f, std::array<double, 17>& y) {
    y[0] = f.psi.x1; y[1] = f.psi.x2; y[2] = f.psi.x3; y[3] = f.psi.x4;
    y[4] = f.psi_u.x1; y[5] = f.psi_u.x2; y[6] = f.psi_u.x3; y[7] = f.psi_u.x4;
    y[8] = f.psi_v.x1; y[9] = f.psi_v.x2; y[10] = f.psi_v.x3; y[11] = f.psi_v.x4;
    y[12] = f.N.x1; y[13] = f.N.x2; y[14] = f.N.x3; y[15] = f.N.x4;
    y[16] = f.omega;
  }

  const AlphaBetaTrajectory* traj_;
  double v0_;
  int s0_;
  ode::DenseSolution<17> sol_;
};

// Frames along v at fixed u0. The conformal factor X = e^omega rides along as
// a state: it obeys the same quartic-potential oscillator as the u = 0 profile,
//   X'' = P'(X)/8,  P(X) = X^2 phi(log X)
//       = -(4k + a^2) X^4 - 4a' X^3 + (6ab - 4 a_hat) X^2 + 4b' X - (1 + b^2),
// with (a, b, a', b') frozen at u0. The polynomial form carries none of the
// exponential stiffness of the (omega, omega_v) reduction and reduces to the
// x(v) profile equation verbatim at u0 = 0.
class FrameVLine {
 public:
  FrameVLine(const AlphaBetaTrajectory& traj, const Frame& start, double omega_v_start,
             double v_target, double tol = 1e-11)
      : FrameVLine(traj.params().kappa, traj.constants().a_hat, traj.eval(start.u),
                   start, omega_v_start, v_target, tol) {}

  FrameVLine(double kappa, double a_hat, const AlphaBetaTrajectory::Point& ab,
             const Frame& start, double omega_v_start, double v_target,
             double tol = 1e-11)
      : u0_(start.u) {
    al_ = ab.alpha;
    be_ = ab.beta;
    alp_ = ab.alpha_p;
    bep_ = ab.beta_p;
    // coefficients of P'(X)/8
    const double c3 = -0.5 * (4.0 * kappa + al_ * al_);
    const double c2 = -1.5 * alp_;
    const double c1 = 0.5 * (3.0 * al_ * be_ - 2.0 * a_hat);
    const double c0 = 0.5 * bep_;
    const auto rhs = [this, kappa, c3, c2, c1, c0](double, const std::array<double, 18>& y,
                                                   std::array<double, 18>& dy) {
      const double X = y[16], Xp = y[17];
      const double wu = 0.5 * (al_ * X + be_ / X);
      dy[16] = Xp;
      dy[17] = ((c3 * X + c2) * X + c1) * X + c0;
      // gw right-hand side with omega_v = X'/X, e^{2w} = X^2
      const double X2 = X * X, iX2 = 1.0 / X2;
      const double wv = Xp / X;
      for (int i = 0; i < 4; ++i) {
        const double psi = y[i], psu = y[4 + i], psv = y[8 + i], n = y[12 + i];
        dy[i] = psv;
        dy[4 + i] = wv * psu + wu * psv;
        dy[8 + i] = -wu * psu + wv * psv - 0.5 * n - kappa * X2 * psi;
        dy[12 + i] = 0.5 * iX2 * psv;
      }
    };
    std::array<double, 18> y0{};
    y0[0] = start.psi.x1; y0[1] = start.psi.x2; y0[2] = start.psi.x3; y0[3] = start.psi.x4;
    y0[4] = start.psi_u.x1; y0[5] = start.psi_u.x2; y0[6] = start.psi_u.x3; y0[7] = start.psi_u.x4;
    y0[8] = start.psi_v.x1; y0[9] = start.psi_v.x2; y0[10] = start.psi_v.x3; y0[11] = start.psi_v.x4;
    y0[12] = start.N.x1; y0[13] = start.N.x2; y0[14] = start.N.x3; y0[15] = start.N.x4;
    y0[16] = std::exp(start.omega);
    y0[17] = omega_v_start * y0[16];
    ode::Options opt;
    opt.rtol = 0.1 * tol;  // same safety as the u-lines
    opt.atol = tol * 1e-3;
    opt.guard = 1e25;
    opt.guard_dim = 16;
    opt.guard_dim_value = std::exp(kOmegaGuard);
    opt.h_max = 0.5;  // the right-hand side is v-periodic; keep steps bounded
    sol_ = ode::integrate<18>(rhs, start.v, v_target, y0, opt);
  }

  Frame at(double v) const {
    const auto y = sol_.eval(v);
    Frame f;
    f.psi = {y[0], y[1], y[2], y[3]};
    f.psi_u = {y[4], y[5], y[6], y[7]};
    f.psi_v = {y[8], y[9], y[10], y[11]};
    f.N = {y[12], y[13], y[14], y[15]};
    f.omega = std::log(y[16]);
    f.u = u0_;
    f.v = v;
    return f;
  }
  double omega_v(double v) const {
    const auto y = sol_.eval(v);
    return y[17] / y[16];
  }
  double v_reached() const { return sol_.t_end(); }
  bool exhausted() const { return sol_.truncated(); }
  void require_complete(double v_target) const {
    if (exhausted() || std::abs(v_reached() - v_target) > 1e-9)
      throw StripExhaustion("frame v-line diverged at v = " + std::to_string(v_reached()),
                            v_reached());
  }

 private:
  double u0_;
  double al_, be_, alp_, bep_;
  ode::DenseSolution<18> sol_;
};

// Cached per-triple machinery: trajectory, v-profile, constants.
class Surface {
 public:
  explicit Surface(const ParamTriple& p, double u_span = 12.0, double tol = 1e-11)
      : p_(p), tol_(tol), traj_(p, u_span, tol), vp_(p, tol) {}

  const ParamTriple& params() const { return p_; }
  const AlphaBetaTrajectory& traj() const { return traj_; }
  const VProfile& vprofile() const { return vp_; }
  double sigma() const { return vp_.half_period(); }
  double tol() const { return tol_; }

  Frame start(bool recentered) const { return initial_frame(p_, recentered); }

  FrameULine u_line(const Frame& from, double u_target) const {
    const int s0 = sign_xp(from.v);
    return FrameULine(traj_, from, s0, u_target, tol_);
  }
  FrameVLine v_line(const Frame& from, double v_target) const {
    // all v-lines in this artifact start on a reflection line (x'(v) = 0)
    return FrameVLine(traj_, from, omega_v_start(from), v_target, tol_);
  }

 private:
  int sign_xp(double v) const {
    const double xp = vp_.xp(v);
    const double scale = std::max(1.0, std::abs(vp_.x(v)));
    if (std::abs(xp) < 1e-10 * scale) return 0;
    return xp > 0 ? 1 : -1;
  }
  double omega_v_start(const Frame& from) const {
    if (from.u == 0.0) return vp_.xp(from.v) / vp_.x(from.v);
    // off the geodesic u = 0, v-lines are only launched from reflection lines
    const double s = vp_.half_period();
    const double r = std::abs(std::remainder(from.v, s));
    if (r > 1e-9 * std::max(1.0, s))
      throw std::invalid_argument("v_line: start off u=0 must sit at v = j sigma");
    return 0.0;
  }

  ParamTriple p_;
  double tol_;
  AlphaBetaTrajectory traj_;
  VProfile vp_;
};

inline Vec4 m_of(const Frame& f, double alpha, double beta) {
  return f.psi_u * std::exp(-f.omega) - f.N * beta - f.psi * (0.5 * alpha);
}

// Geodesic center of Q(u), the rescaling of m(u) onto M^3(kappa).
inline Vec4 center_of(const Frame& f, double alpha, double beta, double kappa) {
  const double disc = 4.0 * kappa * (1.0 + beta * beta) + alpha * alpha;
  if (!(disc > 0.0))
    throw std::domain_error("center_of: Q(u) is not a 2-sphere here");
  if (alpha == 0.0)
    throw std::domain_error("center_of: alpha = 0, center undefined");
  const double eps = alpha > 0 ? 1.0 : -1.0;
  const Vec4 mm = m_of(f, alpha, beta);
  return mm * (-2.0 * eps / std::sqrt(disc));
}

// Euclidean center for kappa = 0 (Remark: m = -(alpha/2) c_hat).
inline Vec4 euclid_center_of(const Frame& f, double alpha, double beta) {
  if (alpha == 0.0) throw std::domain_error("euclid_center_of: alpha = 0");
  return f.psi + (f.N * (2.0 * beta / alpha)) - f.psi_u * (2.0 / alpha * std::exp(-f.omega));
}

// Distance of samples of m(u) from span{m(0), m'(0)} in the Euclidean sense.
inline double planarity_residual(const std::vector<Vec4>& samples, const Vec4& m0,
                                 const Vec4& m0p) {
  // orthonormalize {m0, m0p}
  const Vec4 q1 = m0 / m0.euclid_norm();
  Vec4 w = m0p - q1 * q1.euclid_dot(m0p);
  const Vec4 q2 = w / w.euclid_norm();
  double worst = 0;
  for (const Vec4& m : samples) {
    const Vec4 r = m - q1 * q1.euclid_dot(m) - q2 * q2.euclid_dot(m);
    worst = std::max(worst, r.euclid_norm());
  }
  return worst;
}

// Gram condition (angulonu) deciding O^-.
inline bool gram_condition(const Vec4& nu0, const Vec4& nu1, double kappa) {
  const double g00 = metric_inner(nu0, nu0, kappa);
  const double g11 = metric_inner(nu1, nu1, kappa);
  const double g01 = metric_inner(nu0, nu1, kappa);
  return g00 * g11 > g01 * g01;
}

inline bool check_O_minus(const Surface& S) {
  const Frame f0 = S.start(false);
  FrameVLine line = S.v_line(f0, S.sigma());
  line.require_complete(S.sigma());
  const Vec4 nu0 = f0.psi_v;
  const Vec4 nu1 = line.at(S.sigma()).psi_v;
  return gram_condition(nu0, nu1, S.params().kappa);
}

// Frames on a rectangular grid: one u-line along v = 0 through the origin
// frame, then a v-line from every u node. v nodes ascend from 0.
struct FrameGrid {
  std::vector<double> u_nodes, v_nodes;
  std::vector<Frame> frames;  // row-major, u major

  int nu() const { return static_cast<int>(u_nodes.size()); }
  int nv() const { return static_cast<int>(v_nodes.size()); }
  const Frame& at(int i, int j) const { return frames[i * nv() + j]; }
};

inline FrameGrid frame_grid(const Surface& S, const Frame& origin,
                            std::vector<double> u_nodes, std::vector<double> v_nodes) {
  FrameGrid g;
  g.u_nodes = std::move(u_nodes);
  g.v_nodes = std::move(v_nodes);
  g.frames.resize(static_cast<std::size_t>(g.nu()) * g.nv());
  const double u_min = g.u_nodes.front(), u_max = g.u_nodes.back();
  const double v_max = g.v_nodes.back();
  FrameULine fwd = S.u_line(origin, std::max(u_max, 0.0));
  FrameULine bwd = S.u_line(origin, std::min(u_min, 0.0));
  if (u_max > 0) fwd.require_complete(u_max);
  if (u_min < 0) bwd.require_complete(u_min);
  for (int i = 0; i < g.nu(); ++i) {
    const double u = g.u_nodes[i];
    const Frame fi = (u >= 0) ? fwd.at(u) : bwd.at(u);
    FrameVLine line = S.v_line(fi, v_max);
    line.require_complete(v_max);
    for (int j = 0; j < g.nv(); ++j) g.frames[i * g.nv() + j] = line.at(g.v_nodes[j]);
  }
  return g;
}

namespace detail {
// 4th-order first derivative along a uniformly indexed frame row/column.
template <class Get>
Vec4 fd4(Get&& at, int idx, double h) {
  return (at(idx - 2) - at(idx + 2) + (at(idx + 1) - at(idx - 1)) * 8.0) / (12.0 * h);
}
}  // namespace detail

// Hopf differential from the realized surface: Q = <psi_zz, N> must be 1/4.
// Second derivatives come from finite differences of the integrated first
// derivatives, so this genuinely tests the frames, not the GW right-hand side.
inline double hopf_residual(const FrameGrid& g, double kappa) {
  const double du = g.u_nodes[1] - g.u_nodes[0];
  const double dv = g.v_nodes[1] - g.v_nodes[0];
  double worst = 0;
  for (int i = 2; i + 2 < g.nu(); ++i) {
    for (int j = 2; j + 2 < g.nv(); ++j) {
      const Vec4 psi_uu =
          detail::fd4([&](int k) { return g.at(k, j).psi_u; }, i, du);
      const Vec4 psi_vv =
          detail::fd4([&](int k) { return g.at(i, k).psi_v; }, j, dv);
      const Vec4 psi_uv =
          detail::fd4([&](int k) { return g.at(i, k).psi_u; }, j, dv);
      const Vec4& N = g.at(i, j).N;
      const double e = metric_inner(psi_uu, N, kappa);
      const double gg = metric_inner(psi_vv, N, kappa);
      const double ff = metric_inner(psi_uv, N, kappa);
      worst = std::max({worst, std::abs(0.25 * (e - gg) - 0.25), 0.5 * std::abs(ff)});
    }
  }
  return worst;
}

// The v-line at u0 must stay on the umbilic Q(u0) = S[m,d] computed at v = 0,
// and meet it at a constant angle (Joachimsthal).
struct SphericalLineCheck {
  double membership;  // max |<psi,m> - d| (kappa != 0) or radius deviation
  double angle_dev;   // max - min of the measured intersection angle cosine
};

inline SphericalLineCheck spherical_line_check(const Surface& S, const FrameVLine& line,
                                               double u0, double v_max, int n = 64) {
  const double kappa = S.params().kappa;
  const auto q = S.traj().eval(u0);
  const Frame f0 = line.at(0.0);
  SphericalLineCheck r{0, 0};
  double cmin = 1e300, cmax = -1e300;
  if (kappa != 0.0) {
    const Vec4 m = m_of(f0, q.alpha, q.beta);
    const double d = metric_inner(f0.psi, m, kappa);
    const double nm = std::sqrt(std::abs(metric_inner(m, m, kappa) - kappa * d * d));
    for (int i = 0; i <= n; ++i) {
      const Frame f = line.at(v_max * i / n);
      r.membership = std::max(r.membership,
                              std::abs(metric_inner(f.psi, m, kappa) - d) / std::max(1.0, nm));
      const Vec4 eta = m - f.psi * (kappa * d);  // tangential part of m at psi
      const double c = metric_inner(f.N, eta, kappa) /
                       std::sqrt(metric_inner(eta, eta, kappa));
      cmin = std::min(cmin, c);
      cmax = std::max(cmax, c);
    }
  } else {
    const Vec4 c0 = euclid_center_of(f0, q.alpha, q.beta);
    const double R = (f0.psi - c0).euclid_norm();
    for (int i = 0; i <= n; ++i) {
      const Frame f = line.at(v_max * i / n);
      const Vec4 rad = f.psi - c0;
      r.membership = std::max(r.membership, std::abs(rad.euclid_norm() - R));
      const double c = rad.euclid_dot(f.N) / rad.euclid_norm();
      cmin = std::min(cmin, c);
      cmax = std::max(cmax, c);
    }
  }
  r.angle_dev = cmax - cmin;
  return r;
}

struct ReflectionResiduals {
  double mirror;   // psi(u,v) vs x3-flip of psi(-u,v)
  double planar;   // u-curve at v = j sigma stays in Omega_j
};

inline ReflectionResiduals reflection_residual(const Surface& S, int j, double u0,
                                               int nu = 9, int nv = 17) {
  ReflectionResiduals r{0, 0};
  const double s = S.sigma();
  std::vector<double> un, vn;
  for (int i = 0; i < nu; ++i) un.push_back(-u0 + 2.0 * u0 * i / (nu - 1));
  for (int k = 0; k < nv; ++k) vn.push_back(2.0 * s * k / (nv - 1));
  const FrameGrid g = frame_grid(S, S.start(false), un, vn);
  for (int i = 0; i < g.nu(); ++i) {
    const int im = g.nu() - 1 - i;  // mirrored u index
    for (int k = 0; k < g.nv(); ++k) {
      const Vec4 a = g.at(i, k).psi;
      Vec4 b = g.at(im, k).psi;
      b.x3 = -b.x3;
      r.mirror = std::max(r.mirror, (a - b).euclid_norm());
    }
  }
  // u-curve through v = j sigma lies in the totally geodesic Omega_j
  const Frame f0 = S.start(false);
  Frame base = f0;
  if (j != 0) {
    FrameVLine vl = S.v_line(f0, j * s);
    vl.require_complete(j * s);
    base = vl.at(j * s);
  }
  const Vec4 nu_j = base.psi_v;
  const double scale = std::sqrt(std::abs(metric_inner(nu_j, nu_j, S.params().kappa)));
  FrameULine up = S.u_line(base, u0);
  FrameULine dn = S.u_line(base, -u0);
  for (int i = 0; i <= 16; ++i) {
    const double u = -u0 + 2.0 * u0 * i / 16;
    const Frame f = (u >= 0 ? up : dn).at(u);
    r.planar = std::max(r.planar, std::abs(metric_inner(f.psi - base.psi, nu_j,
                                                        S.params().kappa)) / scale);
  }
  return r;
}

}  // namespace fbma

#endif
