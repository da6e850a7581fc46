#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fbma/fbsearch.hpp"

using namespace fbma;

namespace {
// the mu continuation is reused by most sections; compute it once
const std::vector<LevelCurvePoint>& shared_mu() {
  static const std::vector<LevelCurvePoint> mu = mu_curve(-0.2499, 0.01);
  return mu;
}
}  // namespace

TEST_CASE("f^ sign structure at kappa = 0", "[fbsearch]") {
  CHECK(f_hat(1.0, 0.0) > 0.0);
  CHECK(f_hat(1.9, 0.0) < 0.0);
  const double b0 = find_b0().b0;
  CHECK(b0 > 1.0);
  CHECK(b0 < 2.0);
  CHECK(std::abs(f_hat(b0, 0.0)) < 1e-8);
  // verified sign change on both sides
  CHECK(f_hat(b0 - 0.05, 0.0) > 0.0);
  CHECK(f_hat(b0 + 0.05, 0.0) < 0.0);
}

TEST_CASE("find_b0 is stable under tolerance halving", "[fbsearch]") {
  const double b0 = find_b0(1e-11).b0;
  const double b0_tight = find_b0(5e-12).b0;
  CHECK(std::abs(b0 - b0_tight) < 1e-6);
  const auto table = find_b0().table;
  CHECK(table.front().first == 1.0);
  CHECK(table.front().second > 0.0);
  CHECK(table.back().second < 0.0);
}

TEST_CASE("mu continuation", "[fbsearch]") {
  const auto& mu = shared_mu();
  REQUIRE(mu.size() > 10);
  SECTION("starts at (b0, 0)") {
    CHECK(mu.front().kappa == 0.0);
    CHECK(mu.front().b == Catch::Approx(find_b0().b0).margin(1e-10));
  }
  SECTION("each point solves f^ = 0 with a sign change in b") {
    for (std::size_t i = 0; i < mu.size(); i += 7) {
      const auto& pt = mu[i];
      CHECK(std::abs(pt.f_hat_res) < 1e-8);
      CHECK(f_hat(std::max(1.0, pt.b - 0.02), pt.kappa) > 0.0);
      CHECK(f_hat(pt.b + 0.02, pt.kappa) < 0.0);
    }
  }
  SECTION("Theta is not constant along mu") {
    const ThetaInterval J = theta_range(mu);
    CHECK(J.hi - J.lo > 0.01);
    CHECK(J.lo > -std::sqrt(0.5));
    CHECK(J.hi < -1.0 / std::sqrt(3.0) + 0.01);
  }
  SECTION("height vanishes along mu (free-boundary catenoids)") {
    for (std::size_t i = 0; i < mu.size(); i += 9)
      CHECK(std::abs(mu[i].height) < 1e-7);
  }
}

TEST_CASE("height map against the axis-intersection map at a = 1", "[fbsearch]") {
  for (double k : {-0.15, -0.06}) {
    for (double b : {1.1, 1.35}) {
      const ParamTriple p{1.0, b, k};
      const HeightData h = height_data(p);
      CatenoidProfile prof(k, 40.0, 1e-12);
      CatenoidMetric cm(k);
      const double s_at_tau = cm.s_of_u(h.tau);
      const Vec4 hp = hat_p(prof, s_at_tau);
      CHECK(std::abs(h.height - hp.x3) < 1e-7);
      // sign of h equals sign of tau - u~ nearby
      const double ut = u_tilde(k);
      CHECK((h.height > 0) == (h.tau > ut));
    }
  }
}

TEST_CASE("kappa_star for q = -3/5", "[fbsearch]") {
  const double q = -0.6;
  const KappaStar ks = kappa_star(q, shared_mu());
  CHECK(ks.kappa_star < 0.0);
  CHECK(ks.g_residual < 1e-8);
  SECTION("q must lie in (-1/sqrt2, -1/sqrt3)") {
    CHECK(q > -std::sqrt(0.5));
    CHECK(q < -1.0 / std::sqrt(3.0));
    CHECK_THROWS_AS(kappa_star(-0.70, shared_mu()), std::domain_error);
    CHECK_THROWS_WITH(kappa_star(-0.70, shared_mu()),
                      Catch::Matchers::ContainsSubstring("outside computed J"));
  }
  SECTION("g and g-tilde share the root and the sign change") {
    const auto gt = [&](double k) { return height_map({1.0, b_level(q, k), k}); };
    CHECK(std::abs(gt(ks.kappa_star)) < 1e-7);
    const double d = 0.004;
    const auto g = [&](double k) { return f_hat(b_level(q, k), k); };
    CHECK(g(ks.kappa_star - d) * g(ks.kappa_star + d) < 0.0);
    CHECK(gt(ks.kappa_star - d) * gt(ks.kappa_star + d) < 0.0);
    CHECK((g(ks.kappa_star - d) > 0) == (gt(ks.kappa_star - d) > 0));
  }
}

TEST_CASE("branch continuation into a > 1", "[fbsearch]") {
  const double q = -0.6;
  const KappaStar ks = kappa_star(q, shared_mu());
  const auto branch = branch_continue(q, ks.kappa_star, 4, 0.01);
  REQUIRE(branch.size() == 4);
  CHECK(branch.front().a == 1.0);
  CHECK(branch.front().kappa == Catch::Approx(ks.kappa_star));
  for (std::size_t i = 1; i < branch.size(); ++i) {
    const auto& pt = branch[i];
    CHECK(pt.a > 1.0);
    CHECK(pt.kappa < 0.0);
    CHECK(std::abs(pt.height) < 1e-7);          // outer constraint G = 0
    CHECK(std::abs(pt.theta - q) < 1e-8);       // inner constraint Theta = q
    CHECK(pt.arc > branch[i - 1].arc);
  }
}

TEST_CASE("annulus certificates", "[fbsearch]") {
  const double q = -0.6;
  const KappaStar ks = kappa_star(q, shared_mu());

  SECTION("eta = 0 reproduces the rotational free-boundary ball") {
    const AnnulusCertificate cert =
        assemble_annulus({1.0, ks.b_at, ks.kappa_star}, 3, 5);
    REQUIRE(cert.accepted);
    CHECK(cert.rotation_index == -3);
    CHECK(cert.symmetry_order == 20);
    const FreeBoundaryBall ball = fb_ball(ks.kappa_star);
    CHECK(cert.ball_level == Catch::Approx(ball.level_or_radius).margin(1e-6));
    CHECK(cert.tau == Catch::Approx(ball.u_tilde).margin(1e-7));
  }

  SECTION("branch point certificate and threshold monotonicity") {
    const auto branch = branch_continue(q, ks.kappa_star, 3, 0.01);
    const auto& pt = branch.back();
    const ParamTriple p{pt.a, pt.b, pt.kappa};
    const AnnulusCertificate cert = assemble_annulus(p, 3, 5);
    REQUIRE(cert.accepted);
    CHECK(cert.residuals.beta_at_tau < 1e-9);
    CHECK(cert.residuals.center_gap < 1e-6);
    CHECK(cert.residuals.orthogonality < 1e-5);
    CHECK(cert.residuals.closure < 1e-6);
    CHECK(cert.residuals.containment > 0.0);
    CHECK(cert.residuals.mirror_sym < 1e-5);
    CHECK(cert.residuals.dihedral_sym < 1e-5);

    // tightening thresholds below the measured residuals must refuse, and the
    // measured residual block must be identical on the same data
    CertificateThresholds tight;
    tight.orthogonality = cert.residuals.orthogonality * 0.5;
    const AnnulusCertificate refused = assemble_annulus(p, 3, 5, tight);
    CHECK_FALSE(refused.accepted);
    CHECK(refused.refusal == "orthogonality");
    CHECK(refused.residuals.orthogonality ==
          Catch::Approx(cert.residuals.orthogonality).epsilon(1e-12));
    CHECK(refused.symmetry_order == 0);
  }

  SECTION("wrong rotation data is refused") {
    // certify against the wrong (m, n): the theta gap clause must fire
    const AnnulusCertificate bad = assemble_annulus({1.0, ks.b_at, ks.kappa_star}, 2, 3);
    CHECK_FALSE(bad.accepted);
    CHECK(bad.refusal == "theta gap");
  }
}

TEST_CASE("rationals inside the computed J", "[fbsearch]") {
  const ThetaInterval J = theta_range(shared_mu());
  const auto qs = rationals_in(J, 7);
  REQUIRE_FALSE(qs.empty());
  CHECK(qs.front().m == 3);
  CHECK(qs.front().n == 5);
  for (const auto& r : qs) {
    CHECK(std::gcd(r.m, r.n) == 1);
    CHECK(J.contains(r.value()));
  }
}
