#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fbma/catenoid.hpp"
#include "fbma/immersion.hpp"

using namespace fbma;

TEST_CASE("profile trajectories by curvature sign", "[catenoid]") {
  SECTION("kappa = 0 closed form") {
    CatenoidProfile p(0.0);
    for (double s : {0.5, 2.0, 4.0, -3.0}) {
      const auto q = p.at(s);
      CHECK(std::abs(q.x - std::sqrt(s * s + 4.0)) < 1e-8);
      CHECK(std::abs(q.x3 - 2.0 * std::asinh(0.5 * s)) < 1e-8);
      CHECK(std::abs(q.x4 - 1.0) < 1e-10);
    }
    // s = 2: x = sqrt(8), x3 = 2 arcsinh(1)
    CHECK(p.at(2.0).x == Catch::Approx(std::sqrt(8.0)).epsilon(1e-10));
    CHECK(p.at(2.0).x3 == Catch::Approx(2.0 * std::asinh(1.0)).epsilon(1e-10));
  }
  SECTION("kappa > 0: x oscillates between the positive roots of h") {
    const double k = 0.1;
    CatenoidProfile p(k);
    // roots of h(x) = x^2 - k x^4 - delta^2
    const double d2 = p.delta() * p.delta();
    const double disc = std::sqrt(1.0 - 4.0 * k * d2);
    const double y1 = std::sqrt((1.0 - disc) / (2.0 * k));
    const double y2 = std::sqrt((1.0 + disc) / (2.0 * k));
    CHECK(p.at(0).x == Catch::Approx(y1).epsilon(1e-10));
    for (double s = 0; s < 8.0; s += 0.25) {
      CHECK(p.at(s).x > y1 - 1e-9);
      CHECK(p.at(s).x < y2 + 1e-9);
    }
    CHECK(p.at(p.first_max()).x == Catch::Approx(y2).epsilon(1e-8));
  }
  SECTION("kappa < 0: x strictly increasing") {
    CatenoidProfile p(-0.1);
    double prev = p.at(0).x;
    for (double s = 0.25; s < 8.0; s += 0.25) {
      CHECK(p.at(s).x > prev);
      prev = p.at(s).x;
    }
  }
  SECTION("conservation and quadric residuals") {
    for (double k : {-0.2, -0.05, 0.0, 0.1, 0.22}) {
      CHECK(CatenoidProfile(k).conservation_residual(6.0) < 1e-9);
    }
  }
}

TEST_CASE("contact function F", "[catenoid]") {
  SECTION("F(0) < 0 for all kappa") {
    for (double k : {-0.22, -0.1, 0.0, 0.1, 0.22})
      CHECK(F_of_s(CatenoidProfile(k), 0.0) < 0.0);
  }
  SECTION("kappa = 0 closed form") {
    // F = x3 x' - x3' x = 2 arcsinh(s/2) s/sqrt(s^2+4) - 2; the -2 makes the
    // root equation arcsinh(s/2) = sqrt(s^2+4)/s come out right
    CatenoidProfile p(0.0);
    for (double s : {0.5, 1.5, 3.0, 4.5}) {
      const double expect = 2.0 * std::asinh(0.5 * s) * s / std::sqrt(s * s + 4.0) - 2.0;
      CHECK(F_of_s(p, s) == Catch::Approx(expect).margin(1e-9));
    }
  }
  SECTION("F' closed form vs finite differences") {
    for (double k : {-0.1, 0.0, 0.12}) {
      CatenoidProfile p(k);
      for (double s : {0.8, 2.0, 3.2}) {
        const double h = 1e-5;
        const double fd = (F_of_s(p, s + h) - F_of_s(p, s - h)) / (2.0 * h);
        const double cf = F_prime_of_s(p, s);
        CHECK(std::abs(fd - cf) < 1e-6 * std::max(1.0, std::abs(cf)));
      }
    }
  }
}

TEST_CASE("first root s~ of F", "[catenoid]") {
  SECTION("kappa = 0 against the printed equation") {
    // independent oracle: bisect arcsinh(s/2) - sqrt(s^2+4)/s directly
    const double oracle = roots::brent(
        [](double s) { return std::asinh(0.5 * s) - std::sqrt(s * s + 4.0) / s; }, 1.0,
        8.0);
    CHECK(oracle == Catch::Approx(3.0177591).margin(1e-6));
    CHECK(s_tilde(0.0) == Catch::Approx(oracle).margin(1e-9));
  }
  SECTION("kappa > 0: s~ before the first maximum, phi reaches pi/2 before it") {
    CatenoidProfile p(0.1);
    const double st = s_tilde(p);
    const double s1 = p.first_max();
    CHECK(st < s1);
    const double s0 = roots::brent(
        [&](double s) { return phi_from_state(p, s) - 0.5 * M_PI; }, 0.1, s1);
    CHECK(s0 < s1);
    CHECK(phi_quadrature(p, s1) > 0.5 * M_PI);
  }
  SECTION("continuity in kappa") {
    // s~ grows steeply toward kappa = -1/4, so bound the relative change
    double prev = s_tilde(-0.2);
    for (double k = -0.18; k < 0.23; k += 0.02) {
      const double st = s_tilde(k);
      CHECK(std::abs(st - prev) < 0.12 * std::max(1.0, prev));
      prev = st;
    }
  }
  SECTION("monotonicity side conditions on [0, s~]") {
    for (double k : {-0.15, 0.0, 0.15}) {
      CatenoidProfile p(k);
      const double st = s_tilde(p);
      for (int i = 1; i <= 32; ++i) {
        const double s = st * i / 32;
        CHECK(p.at(s).xp > 0);
        CHECK(p.x3p(s) > 0);
        CHECK(p.x3p(-s) > 0);
        if (k != 0.0) CHECK(k * p.x4p(s) < 0);
      }
    }
  }
}

TEST_CASE("u~ and the a = 1 conformal metric", "[catenoid]") {
  SECTION("kappa = 0: root of G(u) = u - 2 coth(u/2)") {
    const double oracle =
        roots::brent([](double u) { return u - 2.0 / std::tanh(0.5 * u); }, 1.0, 5.0);
    CHECK(oracle == Catch::Approx(2.39935728).margin(1e-7));
    CHECK(u_tilde(0.0) == Catch::Approx(oracle).margin(1e-10));
    // cross-check via s(u) = 2 sinh(u/2)
    CHECK(std::abs(2.0 * std::sinh(0.5 * u_tilde(0.0)) - s_tilde(0.0)) < 1e-8);
  }
  SECTION("metric matches the full machinery for any b") {
    const double k = -0.08;
    CatenoidMetric cm(k);
    for (double b : {1.0, 1.5, 2.0}) {
      AlphaBetaTrajectory traj({1, b, k}, 4.0, 1e-12);
      const auto line = omega_line(traj, 1.0, 0.0, 3.0, 1e-12);
      for (double u : {0.5, 1.5, 2.8})
        CHECK(std::abs(line.omega(u) - cm.omega(u)) < 1e-9);
    }
  }
}

TEST_CASE("free boundary ball of the rotational annulus", "[catenoid]") {
  SECTION("kappa = 0 radius") {
    const auto b = fb_ball(0.0);
    CatenoidProfile p(0.0);
    const auto q = p.at(b.s_tilde);
    CHECK(b.level_or_radius == Catch::Approx(std::sqrt(q.x * q.x + q.x3 * q.x3)));
    // boundary circle sits on the sphere; interior profile points inside
    CHECK(std::abs(b.margin(p.point(b.s_tilde, 1.3))) < 1e-8);
    for (double s = -b.s_tilde + 0.05; s < b.s_tilde; s += 0.2)
      CHECK(b.margin(p.point(s, 0.7)) > 0);
  }
  SECTION("kappa = -0.1 level set") {
    const double k = -0.1;
    const auto b = fb_ball(k);
    CatenoidProfile p(k);
    CHECK(b.level_or_radius == Catch::Approx(p.at(b.s_tilde).x4 / k));
    for (double th : {0.0, 1.0, 2.5})
      CHECK(std::abs(b.margin(p.point(-b.s_tilde, th))) < 1e-8);
    for (double s = -b.s_tilde + 0.05; s < b.s_tilde; s += 0.2)
      CHECK(b.margin(p.point(s, 0.3)) > 0);
  }
  SECTION("kappa x4 is decreasing on (0, s~] (monotone containment)") {
    for (double k : {-0.12, 0.1}) {
      CatenoidProfile p(k);
      const double st = s_tilde(p);
      double prev = k * p.at(0).x4;
      for (int i = 1; i <= 24; ++i) {
        const double cur = k * p.at(st * i / 24).x4;
        CHECK(cur < prev + 1e-14);
        prev = cur;
      }
    }
  }
}

TEST_CASE("orthogonal radius of the Euclidean catenoid", "[catenoid]") {
  SECTION("exact value 5 at u-hat") {
    CHECK(std::abs(orth_radius(2.0 * std::asinh(2.0)) - 5.0) < 1e-12);
  }
  SECTION("minimum at u* = 2 arcsinh(1)") {
    const double us = 2.0 * std::asinh(1.0);
    const double h = 1e-4;
    CHECK(orth_radius(us - 0.3) > orth_radius(us));
    CHECK(orth_radius(us + 0.3) > orth_radius(us));
    CHECK((orth_radius(us + h) - orth_radius(us - h)) / (2 * h) ==
          Catch::Approx(0.0).margin(1e-6));
  }
  SECTION("agrees with the (alpha, beta) expression at a = 1, kappa = 0") {
    for (double b : {1.0, 1.3}) {
      AlphaBetaTrajectory traj({1, b, 0}, 6.0, 1e-12);
      for (double u : {0.8, 1.7, 2.9}) {
        const auto q = traj.eval(u);
        const double via_ab =
            2.0 / q.alpha - 2.0 * q.beta / (q.alpha * std::sinh(0.5 * u));
        CHECK(std::abs(via_ab - orth_radius(u)) < 1e-8);
      }
    }
  }
}

TEST_CASE("axis intersection map hat_p", "[catenoid]") {
  SECTION("vanishing ordinate at s~") {
    for (double k : {-0.15, 0.0, 0.12}) {
      CatenoidProfile p(k);
      const double st = s_tilde(p);
      CHECK(std::abs(hat_p(p, st).x3) < 1e-8);
      CHECK(std::abs(manifold_residual(hat_p(p, st), k)) < 1e-12);
    }
  }
  SECTION("kappa = 0 at u-hat: hat_p = c_perp") {
    CatenoidProfile p(0.0);
    const double uh = 2.0 * std::asinh(2.0);
    const double sh = 2.0 * std::sinh(0.5 * uh);  // s(u) = 2 sinh(u/2)
    const Vec4 hp = hat_p(p, sh);
    CHECK(hp.x3 == Catch::Approx(2.0 * std::asinh(2.0) - std::sqrt(5.0)).margin(1e-9));
    CHECK((hp - c_perp(uh)).euclid_norm() < 1e-9);
    CHECK(hp.x3 > 0);
  }
  SECTION("sign(hat_p3) = sign(F) near s~") {
    CatenoidProfile p(-0.06);
    const double st = s_tilde(p);
    for (double ds : {-0.4, -0.1, 0.1, 0.4}) {
      const double s = st + ds;
      CHECK((hat_p(p, s).x3 > 0) == (F_of_s(p, s) > 0));
    }
  }
}

TEST_CASE("frame integration matches the rotational profile", "[catenoid]") {
  // psi(u, v) = (x(s(u)) cos(th), -x(s(u)) sin(th), x3(s(u)), x4(s(u)))
  // with th = v / x(0); checked here for one curvature, the acceptance suite
  // covers kappa = +-0.1
  const double k = -0.1;
  const ParamTriple par{1, 1.4, k};
  Surface S(par);
  CatenoidProfile prof(k);
  CatenoidMetric cm(k);
  const Frame origin = S.start(true);
  const double x0 = 2.0 / std::sqrt(4.0 * k + 1.0);
  FrameULine up = S.u_line(origin, 2.0);
  up.require_complete(2.0);
  double worst = 0;
  for (double u : {0.0, 0.7, 1.5, 2.0}) {
    FrameVLine vl = S.v_line(up.at(u), 3.0);
    for (double v : {0.0, 1.2, 2.7}) {
      const Vec4 psi = vl.at(v).psi;
      const Vec4 expect = prof.point(cm.s_of_u(u), v / x0);
      worst = std::max(worst, (psi - expect).euclid_norm());
    }
  }
  CHECK(worst < 1e-6);
}
