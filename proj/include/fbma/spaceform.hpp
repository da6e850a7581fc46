#ifndef FBMA_SPACEFORM_HPP
#define FBMA_SPACEFORM_HPP

#include <array>
#include <cmath>
#include <stdexcept>

namespace fbma {

struct Vec3 {
  double x = 0, y = 0, z = 0;
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

struct Vec4 {
  double x1 = 0, x2 = 0, x3 = 0, x4 = 0;

  Vec4 operator+(const Vec4& o) const { return {x1 + o.x1, x2 + o.x2, x3 + o.x3, x4 + o.x4}; }
  Vec4 operator-(const Vec4& o) const { return {x1 - o.x1, x2 - o.x2, x3 - o.x3, x4 - o.x4}; }
  Vec4 operator*(double s) const { return {x1 * s, x2 * s, x3 * s, x4 * s}; }
  Vec4 operator/(double s) const { return {x1 / s, x2 / s, x3 / s, x4 / s}; }

  double euclid_dot(const Vec4& o) const {
    return x1 * o.x1 + x2 * o.x2 + x3 * o.x3 + x4 * o.x4;
  }
  double euclid_norm() const { return std::sqrt(euclid_dot(*this)); }
};

inline Vec4 e1() { return {1, 0, 0, 0}; }
inline Vec4 e2() { return {0, 1, 0, 0}; }
inline Vec4 e3() { return {0, 0, 1, 0}; }
inline Vec4 e4() { return {0, 0, 0, 1}; }

// Ambient metric of R^4_kappa: the fourth coordinate carries weight 1/kappa
// when kappa != 0 and weight 1 in the flat case.
inline double metric_inner(const Vec4& x, const Vec4& y, double kappa) {
  const double w4 = (kappa != 0.0) ? 1.0 / kappa : 1.0;
  return x.x1 * y.x1 + x.x2 * y.x2 + x.x3 * y.x3 + w4 * x.x4 * y.x4;
}

// Defining equation of M^3(kappa); zero iff x lies on the model (the sheet
// condition x4 > 0 for kappa < 0 is reported separately, not folded in here).
inline double manifold_residual(const Vec4& x, double kappa) {
  if (kappa != 0.0)
    return kappa * (x.x1 * x.x1 + x.x2 * x.x2 + x.x3 * x.x3) + x.x4 * x.x4 - 1.0;
  return x.x4 - 1.0;
}

inline bool on_positive_sheet(const Vec4& x, double kappa) {
  return kappa >= 0.0 || x.x4 > 0.0;
}

// Stereographic chart from -e4.
inline Vec3 stereographic(const Vec4& x, double kappa) {
  (void)kappa;
  if (!(x.x4 > -1.0))
    throw std::domain_error("stereographic: x4 <= -1 is not in the chart");
  const double s = 2.0 / (x.x4 + 1.0);
  return {s * x.x1, s * x.x2, s * x.x3};
}

// The v-line through u lies in a 2-sphere iff 4k(1+beta^2)+alpha^2 > 0.
inline bool sphere_test(double alpha, double beta, double kappa) {
  return 4.0 * kappa * (1.0 + beta * beta) + alpha * alpha > 0.0;
}

// Linear isometry of R^4_kappa acting on span{e1,e4}. The single matrix
//   [ p4  0 0 -p1 ]
//   [ 0   1 0  0  ]
//   [ 0   0 1  0  ]
//   [ kp1 0 0  p4 ]
// is a rotation for kappa > 0, a boost for kappa < 0, and restricts to the
// in-chart translation x1 -> x1 - p1 on {x4 = 1} when kappa = 0; in all cases
// it preserves <.,.>_kappa and sends p to e4.
struct Isometry {
  std::array<std::array<double, 4>, 4> m{};

  static Isometry identity() {
    Isometry I;
    for (int i = 0; i < 4; ++i) I.m[i][i] = 1.0;
    return I;
  }

  Vec4 operator()(const Vec4& v) const {
    const std::array<double, 4> in{v.x1, v.x2, v.x3, v.x4};
    std::array<double, 4> out{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) out[i] += m[i][j] * in[j];
    return {out[0], out[1], out[2], out[3]};
  }
};

inline Isometry recenter_isometry(const Vec4& p, double kappa, double tol = 1e-9) {
  if (std::abs(p.x2) > tol || std::abs(p.x3) > tol)
    throw std::domain_error("recenter_isometry: p must lie on the slice x2 = x3 = 0");
  if (std::abs(manifold_residual(p, kappa)) > tol)
    throw std::domain_error("recenter_isometry: p is off the manifold");
  if (kappa <= 0.0 && !(p.x4 > 0.0))
    throw std::domain_error("recenter_isometry: p must have x4 > 0 for kappa <= 0");
  Isometry I = Isometry::identity();
  I.m[0][0] = p.x4;
  I.m[0][3] = -p.x1;
  I.m[3][0] = kappa * p.x1;
  I.m[3][3] = p.x4;
  return I;
}

// Central projection onto M^3(kappa): rescales x so the quadric holds exactly
// (kappa != 0); for kappa = 0 it pins the chart coordinate x4 = 1.
inline Vec4 project_to_manifold(const Vec4& x, double kappa) {
  if (kappa == 0.0) return {x.x1, x.x2, x.x3, 1.0};
  const double r2 = x.x1 * x.x1 + x.x2 * x.x2 + x.x3 * x.x3;
  const double s = kappa * r2 + x.x4 * x.x4;
  if (!(s > 0.0))
    throw std::domain_error("project_to_manifold: point not radially above the quadric");
  return x / std::sqrt(s);
}

// M^3(kappa) -> H^3 (unit hyperboloid in L^4), kappa < 0: spatial homothety by
// sqrt(-kappa), fourth coordinate unchanged.
inline Vec4 to_h3(const Vec4& x, double kappa) {
  if (!(kappa < 0.0)) throw std::domain_error("to_h3: requires kappa < 0");
  const double s = std::sqrt(-kappa);
  return {s * x.x1, s * x.x2, s * x.x3, x.x4};
}

inline double h3_residual(const Vec4& x) {
  return x.x1 * x.x1 + x.x2 * x.x2 + x.x3 * x.x3 - x.x4 * x.x4 + 1.0;
}

// Poincare ball chart of H^3.
inline Vec3 to_poincare(const Vec4& x) {
  const double s = 1.0 / (1.0 + x.x4);
  return {s * x.x1, s * x.x2, s * x.x3};
}

}  // namespace fbma

#endif
