#ifndef FBMA_FBSEARCH_HPP
#define FBMA_FBSEARCH_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "fbma/catenoid.hpp"
#include "fbma/hamilton.hpp"
#include "fbma/immersion.hpp"
#include "fbma/period.hpp"

namespace fbma {

// Defect f^(b, kappa) = tau(1, b, kappa) - u~(kappa). Roots mark rotational
// free-boundary catenoids.
inline double f_hat(double b, double kappa, double tol = 1e-11) {
  return tau(ParamTriple{1, b, kappa}, 40.0, tol) - u_tilde(kappa, tol);
}

struct B0Result {
  double b0 = 0;
  std::vector<std::pair<double, double>> table;  // (b, f_hat) bracketing scan
};

inline B0Result find_b0(double tol = 1e-11) {
  B0Result r;
  const double ut0 = u_tilde(0.0, tol);
  const auto f = [&](double b) { return tau(ParamTriple{1, b, 0}, 40.0, tol) - ut0; };
  double lo = 1.0, hi = 0.0;
  double flo = f(1.0);
  r.table.emplace_back(1.0, flo);
  for (double b = 1.1; b < 1.999; b += 0.1) {
    const double fb = f(b);
    r.table.emplace_back(b, fb);
    if (hi == 0.0 && flo * fb <= 0.0) {
      hi = b;
      break;
    }
    lo = b;
    flo = fb;
  }
  if (hi == 0.0) throw BracketError("find_b0: no sign change of f^ in (1,2)");
  r.b0 = roots::brent(f, lo, hi, 1e-13);
  return r;
}

// Height map h(a,b,kappa) = c3(tau) of the recentered immersion, plus the
// pieces the callers keep reusing.
struct HeightData {
  double tau;
  double height;     // c3(tau)
  double alpha_tau;  // > 0 in the working region
  Frame frame_tau;   // recentered frame at (tau, 0)
};

inline HeightData height_data(const ParamTriple& p, double tol = 1e-11) {
  Surface S(p, 40.0, tol);
  HeightData h;
  h.tau = tau(S.traj());
  FrameULine line = S.u_line(S.start(true), h.tau);
  line.require_complete(h.tau);
  h.frame_tau = line.at(h.tau);
  const auto q = S.traj().eval(h.tau);
  h.alpha_tau = q.alpha;
  if (!sphere_test(q.alpha, q.beta, p.kappa))
    throw std::domain_error("height_map: Q(tau) is not a 2-sphere");
  // beta(tau) = 0 by construction of tau; use it exactly
  h.height = center_of(h.frame_tau, q.alpha, 0.0, p.kappa).x3;
  return h;
}

inline double height_map(const ParamTriple& p, double tol = 1e-11) {
  return height_data(p, tol).height;
}

// One accepted point of the curve mu (a = 1, f^ = 0) or of a branch mu^_q.
struct LevelCurvePoint {
  double a = 1, b = 1, kappa = 0;
  double tau = 0;
  double theta = 0;      // period along the point
  double height = 0;     // h(a,b,kappa)
  double f_hat_res = 0;  // residual of the solved constraint
  double arc = 0;        // accumulated arc length in (a,kappa) for branches
};

// Continuation of f^(b, kappa) = 0 from (b0, 0) into kappa < 0; each point
// re-solved in b by bracketed Brent around a linear prediction.
inline std::vector<LevelCurvePoint> mu_curve(double kappa_min, double step = 0.005,
                                             double tol = 1e-11) {
  if (!(kappa_min < 0.0)) throw std::domain_error("mu_curve: kappa_min must be < 0");
  std::vector<LevelCurvePoint> out;
  const double b0 = find_b0(tol).b0;

  auto push_point = [&](double b, double kappa) {
    LevelCurvePoint pt;
    pt.a = 1.0;
    pt.b = b;
    pt.kappa = kappa;
    pt.tau = tau(ParamTriple{1, b, kappa}, 40.0, tol);
    pt.theta = theta_closed_form(b, kappa);
    pt.f_hat_res = pt.tau - u_tilde(kappa, tol);
    pt.height = height_map({1, b, kappa}, tol);
    out.push_back(pt);
  };
  push_point(b0, 0.0);

  double kappa = 0.0, h = step;
  double b_prev2 = b0, b_prev = b0, k_prev2 = 0.0, k_prev = 0.0;
  while (kappa > kappa_min + 1e-12) {
    const double k_next = std::max(kappa - h, kappa_min);
    // secant prediction of b along the curve
    double b_pred = b_prev;
    if (k_prev2 != k_prev)
      b_pred = b_prev + (b_prev - b_prev2) * (k_next - k_prev) / (k_prev - k_prev2);
    const double ut = u_tilde(k_next, tol);
    const auto f = [&](double b) {
      return tau(ParamTriple{1, b, k_next}, 40.0, tol) - ut;
    };
    bool solved = false;
    double b_new = 0;
    try {
      double lo = std::max(1.0, b_pred - 0.02), hi = b_pred + 0.02;
      double flo = f(lo), fhi = f(hi);
      for (int i = 0; i < 6 && flo * fhi > 0; ++i) {
        lo = std::max(1.0, lo - 0.03);
        hi += 0.03;
        flo = f(lo);
        fhi = f(hi);
      }
      if (flo * fhi <= 0) {
        b_new = roots::brent(f, lo, hi, 1e-13);
        solved = true;
      }
    } catch (const std::exception&) {
      solved = false;
    }
    if (!solved) {
      h *= 0.5;
      if (h < step / 64.0) break;  // continuation breakdown; report what we have
      continue;
    }
    kappa = k_next;
    b_prev2 = b_prev;
    k_prev2 = k_prev;
    b_prev = b_new;
    k_prev = kappa;
    push_point(b_new, kappa);
    h = std::min(step, h * 2.0);
  }
  return out;
}

// Empirical J = (min, max) of Theta along the computed mu span.
struct ThetaInterval {
  double lo, hi;
  bool contains(double q) const { return q > lo && q < hi; }
};

inline ThetaInterval theta_range(const std::vector<LevelCurvePoint>& mu) {
  ThetaInterval r{1e300, -1e300};
  for (const auto& pt : mu) {
    r.lo = std::min(r.lo, pt.theta);
    r.hi = std::max(r.hi, pt.theta);
  }
  return r;
}

// Rationals -m/n inside J with denominator at most n_max, coprime, ordered by
// denominator then numerator.
struct Rational {
  int m, n;
  double value() const { return -static_cast<double>(m) / n; }
};

inline std::vector<Rational> rationals_in(const ThetaInterval& J, int n_max = 7) {
  std::vector<Rational> out;
  for (int n = 1; n <= n_max; ++n) {
    for (int m = 1; m < n; ++m) {
      if (std::gcd(m, n) != 1) continue;
      const Rational q{m, n};
      if (J.contains(q.value())) out.push_back(q);
    }
  }
  return out;
}

// g(kappa) = f^(b_q(1,kappa), kappa); kappa* is its sign-changing root, where
// the Theta = q level crosses mu.
struct KappaStar {
  double kappa_star;
  double b_at;        // b_q(1, kappa*)
  double g_residual;  // |g(kappa*)| after the solve
};

inline KappaStar kappa_star(double q, const std::vector<LevelCurvePoint>& mu,
                            double tol = 1e-11) {
  const ThetaInterval J = theta_range(mu);
  if (!J.contains(q))
    throw std::domain_error("kappa_star: q outside computed J = (" +
                            std::to_string(J.lo) + ", " + std::to_string(J.hi) + ")");
  const auto g = [&](double k) { return f_hat(b_level(q, k), k, tol); };
  // bracket from the mu samples: Theta along mu crosses q somewhere inside
  double klo = 0, khi = 0;
  for (std::size_t i = 1; i < mu.size(); ++i) {
    if ((mu[i - 1].theta - q) * (mu[i].theta - q) <= 0.0) {
      klo = std::min(mu[i - 1].kappa, mu[i].kappa);
      khi = std::max(mu[i - 1].kappa, mu[i].kappa);
      break;
    }
  }
  if (klo == khi) throw BracketError("kappa_star: no Theta crossing along mu");
  double glo = g(klo), ghi = g(khi);
  for (int i = 0; i < 8 && glo * ghi > 0; ++i) {
    const double w = khi - klo;
    klo = std::max(mu.back().kappa, klo - 0.5 * w);
    khi = std::min(0.0, khi + 0.5 * w);
    glo = g(klo);
    ghi = g(khi);
  }
  if (glo * ghi > 0) throw BracketError("kappa_star: g does not change sign");
  KappaStar r;
  r.kappa_star = roots::brent(g, klo, khi, 1e-12);
  r.b_at = b_level(q, r.kappa_star);
  r.g_residual = std::abs(g(r.kappa_star));
  return r;
}

// G(a, kappa) = h(a, b_q(a, kappa), kappa): the two-level solve. The inner
// b-solve pins Theta = q; the outer zero set is the branch mu^_q.
inline double big_G(double q, double a, double kappa, double tol, double* b_out = nullptr,
                    double* tau_out = nullptr) {
  const double b = b_solve(q, a, kappa, 1e-11);
  if (b_out) *b_out = b;
  const HeightData h = height_data({a, b, kappa}, tol);
  if (tau_out) *tau_out = h.tau;
  return h.height;
}

// Pseudo-arclength continuation of G = 0 from (1, kappa*) into a > 1.
inline std::vector<LevelCurvePoint> branch_continue(double q, double kappa0,
                                                    int max_points, double step = 0.01,
                                                    double tol = 1e-11) {
  std::vector<LevelCurvePoint> out;
  auto record = [&](double a, double kappa, double arc) {
    LevelCurvePoint pt;
    pt.a = a;
    pt.kappa = kappa;
    double b = 0, tv = 0;
    pt.height = big_G(q, a, kappa, tol, &b, &tv);
    pt.b = b;
    pt.tau = tv;
    pt.theta = period_theta({a, b, kappa});
    pt.f_hat_res = pt.height;  // the solved constraint for branches is G = 0
    pt.arc = arc;
    out.push_back(pt);
  };
  record(1.0, kappa0, 0.0);

  // initial tangent: one-sided in a (the parameter space ends at a = 1)
  const double ha = 2e-4, hk = 2e-4;
  const double G0 = out[0].height;
  const double Ga = (big_G(q, 1.0 + ha, kappa0, tol) - G0) / ha;
  const double Gk = (big_G(q, 1.0, kappa0 + hk, tol) - big_G(q, 1.0, kappa0 - hk, tol)) /
                    (2.0 * hk);
  double ta = 1.0, tk = (Gk != 0.0) ? -Ga / Gk : 0.0;
  {
    const double nrm = std::hypot(ta, tk);
    ta /= nrm;
    tk /= nrm;
  }

  double a = 1.0, kappa = kappa0, arc = 0.0, h = step;
  for (int pt = 1; pt < max_points; ++pt) {
    bool accepted = false;
    while (!accepted && h > step / 64.0) {
      const double ap = a + h * ta, kp = kappa + h * tk;
      // corrector moves along the normal (na, nk) = (-tk, ta)
      const auto phi = [&](double t) { return big_G(q, ap - t * tk, kp + t * ta, tol); };
      try {
        double lo = -0.5 * h, hi = 0.5 * h;
        double flo = phi(lo), fhi = phi(hi);
        for (int i = 0; i < 4 && flo * fhi > 0; ++i) {
          lo *= 1.8;
          hi *= 1.8;
          flo = phi(lo);
          fhi = phi(hi);
        }
        if (flo * fhi > 0) throw BracketError("branch: corrector bracket");
        const double t = roots::brent(phi, lo, hi, 1e-12);
        const double an = ap - t * tk, kn = kp + t * ta;
        if (an < 1.0) throw std::domain_error("branch: stepped out of a >= 1");
        const double da = an - a, dk = kn - kappa;
        arc += std::hypot(da, dk);
        ta = da / std::hypot(da, dk);
        tk = dk / std::hypot(da, dk);
        a = an;
        kappa = kn;
        record(a, kappa, arc);
        accepted = true;
        h = std::min(step, 2.0 * h);
      } catch (const std::exception&) {
        h *= 0.5;
      }
    }
    if (!accepted) break;  // fold or strip exhaustion: report the reached arc
  }
  return out;
}

// ---------------------------------------------------------------------------
// Annulus assembly and certification
// ---------------------------------------------------------------------------

struct CertificateThresholds {
  double orthogonality = 1e-5;  // |angle - pi/2| along both boundaries, radians
  double sphere_gap = 1e-6;     // Q(tau) vs Q(-tau): center and level gaps
  double closure = 1e-6;        // v-line closure over 2 n sigma
  double theta_gap = 1e-8;      // |Theta - q|
  double symmetry = 1e-5;       // mirror + dihedral mesh residual
};

struct ResidualBlock {
  double beta_at_tau = 0;
  double theta_gap = 0;
  double center_gap = 0;      // max ||c(+-tau) - e4||
  double level_gap = 0;       // | level(tau) - level(-tau) |
  double orthogonality = 0;   // max |angle - pi/2| on both boundary lines
  double closure = 0;         // max over sampled u-lines
  double containment = 0;     // min interior margin (positive = inside)
  double mirror_sym = 0;
  double dihedral_sym = 0;
  double rotation_gap = 0;    // distance of the winding number to -m
};

struct AnnulusMesh {
  ParamTriple p;
  int m = 0, n = 1;
  double tau = 0, sigma = 0;
  std::vector<double> u_nodes, v_nodes;  // v_nodes cover [0, 2 n sigma) plus the
                                         // wrap column at exactly 2 n sigma
  std::vector<Vec4> vertices;            // (nu) x (nv + 1), row-major, M^3 coords
  double manifold_drift = 0;             // max quadric residual before projection

  int nu() const { return static_cast<int>(u_nodes.size()); }
  int nv() const { return static_cast<int>(v_nodes.size()) - 1; }  // wrap excluded
  const Vec4& at(int i, int j) const { return vertices[i * (nv() + 1) + j]; }
};

struct AnnulusCertificate {
  int m = 0, n = 1;
  double q = 0;
  double eta_arc = 0;  // arc-length stand-in for the abstract family parameter
  double a = 1, b = 1, kappa = 0;
  double tau = 0, sigma = 0;
  Vec4 ball_center;            // e4 by construction
  double ball_level = 0;       // <., e4>_kappa level (kappa != 0) or chart radius
  int rotation_index = 0;
  int symmetry_order = 0;      // 4n when the symmetry residuals pass
  ResidualBlock residuals;
  CertificateThresholds thresholds;
  bool accepted = false;
  std::string refusal;         // first failing clause when refused
};

inline AnnulusMesh sample_annulus_mesh(const ParamTriple& p, int m, int n, int nu,
                                       int nv, double tol = 1e-11) {
  Surface S(p, 40.0, tol);
  AnnulusMesh mesh;
  mesh.p = p;
  mesh.m = m;
  mesh.n = n;
  mesh.tau = tau(S.traj());
  mesh.sigma = S.sigma();
  const double span = 2.0 * n * mesh.sigma;
  for (int i = 0; i < nu; ++i)
    mesh.u_nodes.push_back(-mesh.tau + 2.0 * mesh.tau * i / (nu - 1));
  for (int j = 0; j <= nv; ++j) mesh.v_nodes.push_back(span * j / nv);
  const FrameGrid g = frame_grid(S, S.start(true), mesh.u_nodes, mesh.v_nodes);
  mesh.vertices.reserve(g.frames.size());
  for (const Frame& f : g.frames) {
    // raw integrated vertices: certification must see the honest object;
    // quadric snapping happens at file export only
    mesh.manifold_drift =
        std::max(mesh.manifold_drift, std::abs(manifold_residual(f.psi, p.kappa)));
    mesh.vertices.push_back(f.psi);
  }
  return mesh;
}

inline AnnulusCertificate assemble_annulus(const ParamTriple& p, int m, int n,
                                           const CertificateThresholds& thr = {},
                                           int nu = 33, int nv_per_n = 48,
                                           double tol = 1e-11) {
  AnnulusCertificate cert;
  cert.m = m;
  cert.n = n;
  cert.q = -static_cast<double>(m) / n;
  cert.a = p.a;
  cert.b = p.b;
  cert.kappa = p.kappa;
  cert.thresholds = thr;
  cert.ball_center = e4();

  Surface S(p, 40.0, tol);
  const double tv = tau(S.traj());
  cert.tau = tv;
  cert.sigma = S.sigma();
  const auto q_tau = S.traj().eval(tv);
  cert.residuals.beta_at_tau = std::abs(q_tau.beta);

  cert.residuals.theta_gap = std::abs(period_theta(p, tol) - cert.q);

  // boundary frames and the two candidate spheres
  FrameULine up = S.u_line(S.start(true), tv);
  FrameULine dn = S.u_line(S.start(true), -tv);
  up.require_complete(tv);
  dn.require_complete(-tv);
  const Frame f_pos = up.at(tv), f_neg = dn.at(-tv);
  const auto q_neg = S.traj().eval(-tv);
  const Vec4 c_pos = center_of(f_pos, q_tau.alpha, 0.0, p.kappa);
  const Vec4 c_neg = center_of(f_neg, q_neg.alpha, 0.0, p.kappa);
  cert.residuals.center_gap =
      std::max((c_pos - e4()).euclid_norm(), (c_neg - e4()).euclid_norm());
  const auto level_of = [&](const Frame& f) {
    if (p.kappa != 0.0) return metric_inner(f.psi, e4(), p.kappa);
    return (f.psi - e4()).euclid_norm();  // chart radius about the origin
  };
  const double lv_pos = level_of(f_pos), lv_neg = level_of(f_neg);
  cert.residuals.level_gap = std::abs(lv_pos - lv_neg);
  cert.ball_level = lv_pos;

  // orthogonality along both boundary v-lines
  const double span = 2.0 * n * cert.sigma;
  double worst_angle = 0;
  for (const Frame& bf : {f_pos, f_neg}) {
    FrameVLine line = S.v_line(bf, span);
    line.require_complete(span);
    for (int i = 0; i <= 96 * n; ++i) {
      const Frame f = line.at(span * i / (96 * n));
      double cosang;
      if (p.kappa != 0.0) {
        const Vec4 eta = e4() - f.psi * (p.kappa * cert.ball_level);
        cosang = metric_inner(f.N, eta, p.kappa) /
                 std::sqrt(metric_inner(eta, eta, p.kappa));
      } else {
        const Vec4 rad = f.psi - e4();
        cosang = rad.euclid_dot(f.N) / rad.euclid_norm();
      }
      worst_angle = std::max(worst_angle, std::abs(std::asin(std::clamp(cosang, -1.0, 1.0))));
    }
  }
  cert.residuals.orthogonality = worst_angle;

  // mesh-based checks: closure, containment, symmetries, rotation index
  const AnnulusMesh mesh = sample_annulus_mesh(p, m, n, nu, n * nv_per_n, tol);
  const int NV = mesh.nv();
  double closure = 0;
  for (int i = 0; i < mesh.nu(); ++i)
    closure = std::max(closure, (mesh.at(i, NV) - mesh.at(i, 0)).euclid_norm());
  cert.residuals.closure = closure;

  double margin = 1e300;
  const double lv_min = std::min(lv_pos, lv_neg);
  for (int i = 1; i + 1 < mesh.nu(); ++i) {
    for (int j = 0; j < NV; ++j) {
      double mgn;
      if (p.kappa != 0.0)
        mgn = metric_inner(mesh.at(i, j), e4(), p.kappa) - lv_min;
      else
        mgn = cert.ball_level - (mesh.at(i, j) - e4()).euclid_norm();
      margin = std::min(margin, mgn);
    }
  }
  cert.residuals.containment = margin;

  // mirror x3 -> -x3 with u -> -u
  double mirror = 0;
  for (int i = 0; i < mesh.nu(); ++i) {
    const int im = mesh.nu() - 1 - i;
    for (int j = 0; j <= NV; ++j) {
      Vec4 w = mesh.at(im, j);
      w.x3 = -w.x3;
      mirror = std::max(mirror, (mesh.at(i, j) - w).euclid_norm());
    }
  }
  cert.residuals.mirror_sym = mirror;

  // n-fold rotation about L: shift by 2 sigma = NV/n columns, rotate by 2 pi q
  double dihedral = 0;
  {
    const int shift = NV / n;
    const double ang = 2.0 * M_PI * cert.q;
    const double cs = std::cos(ang), sn = std::sin(ang);
    for (int i = 0; i < mesh.nu(); ++i) {
      for (int j = 0; j + shift <= NV; ++j) {
        const Vec4& x = mesh.at(i, j);
        const Vec4 rot{cs * x.x1 - sn * x.x2, sn * x.x1 + cs * x.x2, x.x3, x.x4};
        dihedral = std::max(dihedral, (rot - mesh.at(i, j + shift)).euclid_norm());
      }
    }
    // one plane reflection x2 -> -x2 pairs v with 2 n sigma - v
    for (int i = 0; i < mesh.nu(); ++i) {
      for (int j = 0; j <= NV; ++j) {
        Vec4 w = mesh.at(i, NV - j);
        w.x2 = -w.x2;
        dihedral = std::max(dihedral, (mesh.at(i, j) - w).euclid_norm());
      }
    }
  }
  cert.residuals.dihedral_sym = dihedral;

  const RotationIndex ri = rotation_index(p, n, tol);
  cert.rotation_index = ri.index;
  cert.residuals.rotation_gap = ri.integer_gap;

  // verdict
  cert.accepted = true;
  const auto refuse = [&](const std::string& why) {
    if (cert.accepted) cert.refusal = why;
    cert.accepted = false;
  };
  if (!(cert.residuals.theta_gap < thr.theta_gap)) refuse("theta gap");
  if (!(cert.residuals.center_gap < thr.sphere_gap)) refuse("sphere center gap");
  if (!(cert.residuals.level_gap < thr.sphere_gap)) refuse("sphere level gap");
  if (!(cert.residuals.orthogonality < thr.orthogonality)) refuse("orthogonality");
  if (!(cert.residuals.closure < thr.closure)) refuse("closure");
  if (!(cert.residuals.containment > 0)) refuse("containment");
  if (!(cert.residuals.mirror_sym < thr.symmetry)) refuse("mirror symmetry");
  if (!(cert.residuals.dihedral_sym < thr.symmetry)) refuse("dihedral symmetry");
  if (cert.rotation_index != -m) refuse("rotation index");
  cert.symmetry_order = cert.accepted ? 4 * n : 0;
  return cert;
}

}  // namespace fbma

#endif
