// Command-line front end: orchestration, sweeps, and all file output.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "fbma/io.hpp"

namespace fs = std::filesystem;
using namespace fbma;
using nlohmann::json;

namespace {

struct RunConfig {
  double a = 1, b = 1, kappa = 0;
  std::string q = "-3/5";
  double tol = 1e-11;
  int grid_u = 33, grid_v = 65;
  double u_max = 1.5;
  std::string out = "out";
  double kappa_min = -0.2499;
  double step = 0.01;
  int points = 4;  // branch points to continue
  int point = 0;   // which branch point a certificate refers to (0 = eta of 0)
  // sweep ranges
  double a_min = 1.0, a_max = 1.5;
  double b_min = 1.0, b_max = 2.0;
  double k_min = -0.2, k_max = 0.2;
  int na = 10, nb = 10, nk = 10;
  int threads = 0;
};

struct QRational {
  int m, n;
  double value() const { return -static_cast<double>(m) / n; }
};

QRational parse_q(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos)
    throw CLI::ValidationError("--q", "expected a fraction like -2/3");
  int m = std::stoi(s.substr(0, slash));
  const int n = std::stoi(s.substr(slash + 1));
  if (m > 0) m = -m;  // accept either sign convention for the numerator
  if (n <= 0 || m == 0) throw CLI::ValidationError("--q", "expected -m/n with m,n > 0");
  return {-m, n};
}

void load_config_file(int argc, char** argv, RunConfig& cfg) {
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      std::ifstream f(argv[i + 1]);
      if (!f) throw io::IoError(std::string("cannot read config ") + argv[i + 1]);
      json j = json::parse(f);
      const auto get = [&j](const char* key, auto& slot) {
        if (j.contains(key)) slot = j[key].get<std::decay_t<decltype(slot)>>();
      };
      get("a", cfg.a); get("b", cfg.b); get("kappa", cfg.kappa);
      get("q", cfg.q); get("tol", cfg.tol);
      get("grid_u", cfg.grid_u); get("grid_v", cfg.grid_v);
      get("u_max", cfg.u_max); get("out", cfg.out);
      get("kappa_min", cfg.kappa_min); get("step", cfg.step);
      get("points", cfg.points); get("point", cfg.point);
      get("a_min", cfg.a_min); get("a_max", cfg.a_max);
      get("b_min", cfg.b_min); get("b_max", cfg.b_max);
      get("k_min", cfg.k_min); get("k_max", cfg.k_max);
      get("na", cfg.na); get("nb", cfg.nb); get("nk", cfg.nk);
      get("threads", cfg.threads);
    }
  }
}

int pool_size(const RunConfig& cfg) {
  if (const char* env = std::getenv("FBMA_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  if (cfg.threads > 0) return cfg.threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 2;
}

void ensure_out(const RunConfig& cfg) { fs::create_directories(cfg.out); }

std::string opath(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.out) / name).string();
}

// ---------------------------------------------------------------------------

int cmd_period(const RunConfig& cfg, bool write_files) {
  const ParamTriple p{cfg.a, cfg.b, cfg.kappa};
  const double theta = period_theta(p, cfg.tol);
  std::cout << "Theta(" << fmt17(cfg.a) << ", " << fmt17(cfg.b) << ", "
            << fmt17(cfg.kappa) << ") = " << fmt17(theta) << "\n";
  if (cfg.a == 1.0) {
    const double gap = theta - theta_closed_form(cfg.b, cfg.kappa);
    std::cout << "closed-form gap = " << fmt17(gap) << "\n";
  }
  if (write_files) {
    ensure_out(cfg);
    const PlanarCurve c = gamma_curve(p, 0.0, 4096, cfg.tol);
    io::write_curve_csv(opath(cfg, "gamma.csv"), c, cfg.tol);
    json j = io::manifest(cfg.tol);
    j["params"] = {{"a", cfg.a}, {"b", cfg.b}, {"kappa", cfg.kappa}};
    j["theta"] = theta;
    j["sigma"] = c.sigma;
    j["closure_gap"] = c.closure_gap();
    j["gram_margin"] = c.gram_margin;
    if (cfg.a == 1.0) j["closed_form_gap"] = theta - theta_closed_form(cfg.b, cfg.kappa);
    io::write_json(opath(cfg, "period.json"), j);
  }
  return 0;
}

int cmd_solve(const RunConfig& cfg) {
  const ParamTriple p{cfg.a, cfg.b, cfg.kappa};
  ensure_out(cfg);
  AlphaBetaTrajectory traj(p, cfg.u_max + 1.0, cfg.tol);
  VProfile vp(p, cfg.tol);
  const MetricField f =
      omega_field(p, cfg.u_max, cfg.grid_u, cfg.grid_v, 2.0 * vp.half_period(), cfg.tol);
  io::write_field(opath(cfg, "field.bin"), f, vp.half_period(), cfg.tol);
  json j = io::manifest(cfg.tol);
  j["params"] = {{"a", cfg.a}, {"b", cfg.b}, {"kappa", cfg.kappa}};
  j["sigma"] = vp.half_period();
  j["u_strip"] = f.u_strip;
  j["strip_exhausted"] = f.exhausted;
  j["gauss_residual"] = gauss_residual(f, p.kappa);
  j["phi_residual"] = phi_residual(f, traj);
  j["c1_drift"] = traj.c1_drift(cfg.u_max);
  if (p.kappa >= 0) j["c2_drift"] = traj.c2_drift(cfg.u_max);
  j["x_energy_residual"] = vp.energy_residual();
  io::write_json(opath(cfg, "solve.json"), j);
  std::cout << "sigma = " << fmt17(vp.half_period())
            << "  gauss_residual = " << fmt17(j["gauss_residual"].get<double>())
            << "  u_strip = " << fmt17(f.u_strip) << "\n";
  return 0;
}

int cmd_immerse(const RunConfig& cfg) {
  const ParamTriple p{cfg.a, cfg.b, cfg.kappa};
  ensure_out(cfg);
  Surface S(p, cfg.u_max + 2.0, cfg.tol);
  std::vector<double> un, vn;
  for (int i = 0; i < cfg.grid_u; ++i)
    un.push_back(-cfg.u_max + 2.0 * cfg.u_max * i / (cfg.grid_u - 1));
  const double span = 2.0 * S.sigma();
  for (int j = 0; j < cfg.grid_v; ++j) vn.push_back(span * j / (cfg.grid_v - 1));
  const FrameGrid g = frame_grid(S, S.start(true), un, vn);
  io::write_frames_csv(opath(cfg, "frames.csv"), g.frames, cfg.tol);
  double worst = 0, min_x4 = 1e300;
  for (const Frame& f : g.frames) {
    worst = std::max(worst, frame_invariants(f, p.kappa).worst());
    min_x4 = std::min(min_x4, f.psi.x4);
  }
  std::cout << "frames: " << g.frames.size()
            << "  invariant_max = " << fmt17(worst) << "\n";
  // sheet condition is a warning, not a failure: integration states stay usable
  if (p.kappa < 0 && min_x4 <= 0)
    std::cout << "warning: frames cross the x4 = 0 sheet boundary (min x4 = "
              << fmt17(min_x4) << ")\n";
  return 0;
}

int cmd_tau(const RunConfig& cfg, bool write_files) {
  const ParamTriple p{cfg.a, cfg.b, cfg.kappa};
  AlphaBetaTrajectory traj(p, 40.0, cfg.tol);
  const double tv = tau(traj);
  const auto q = traj.eval(tv);
  std::cout << "tau = " << fmt17(tv) << "  beta'(tau) = " << fmt17(q.beta_p) << "\n";
  json j = io::manifest(cfg.tol);
  j["params"] = {{"a", cfg.a}, {"b", cfg.b}, {"kappa", cfg.kappa}};
  j["tau"] = tv;
  j["beta_p_at_tau"] = q.beta_p;
  j["c1_drift"] = traj.c1_drift();
  if (p.kappa > 0) {
    const CubicData c = cubic_roots(p);
    j["roots"] = {c.r1, c.r2, c.r3};
    const Periods per = periods_MN(p);
    j["M"] = per.M;
    if (per.N)
      j["N"] = *per.N;
    else
      j["N"] = "infinite";
    const double r1 = u1(traj);
    j["u1"] = r1;
    j["lambda_u1"] = lambda_of_u(traj, r1);
  } else if (p.kappa == 0.0 && p.a > 1.0) {
    j["u1"] = u1(traj);
  }
  if (write_files) {
    ensure_out(cfg);
    io::write_json(opath(cfg, "tau.json"), j);
    io::write_alphabeta_csv(opath(cfg, "alphabeta.csv"), traj, -tv - 1.0, tv + 1.0, 512,
                            cfg.tol);
  }
  return 0;
}

int cmd_catenoid_table(const RunConfig& cfg) {
  ensure_out(cfg);
  std::vector<std::vector<double>> rows;
  const int n = std::max(2, cfg.nk);
  for (int i = 0; i < n; ++i) {
    const double k = cfg.k_min + (cfg.k_max - cfg.k_min) * i / (n - 1);
    const FreeBoundaryBall ball = fb_ball(k, cfg.tol);
    rows.push_back({k, ball.s_tilde, ball.u_tilde, ball.level_or_radius});
  }
  io::write_csv(opath(cfg, "catenoid.csv"), io::manifest(cfg.tol),
                {"kappa", "s_tilde", "u_tilde", "ball_level_or_radius"}, rows);
  std::cout << "catenoid table: " << rows.size() << " rows\n";
  return 0;
}

int cmd_find_b0(const RunConfig& cfg, bool write_files) {
  const B0Result r = find_b0(cfg.tol);
  std::cout << "b0 = " << fmt17(r.b0) << "\n";
  std::cout << "bracketing table (b, f_hat):\n";
  for (const auto& [b, fh] : r.table)
    std::cout << "  " << fmt17(b) << "  " << fmt17(fh) << "\n";
  if (write_files) {
    ensure_out(cfg);
    json j = io::manifest(cfg.tol);
    j["b0"] = r.b0;
    j["table"] = json::array();
    for (const auto& [b, fh] : r.table) j["table"].push_back({b, fh});
    io::write_json(opath(cfg, "b0.json"), j);
  }
  return 0;
}

std::vector<std::vector<double>> mu_rows(const std::vector<LevelCurvePoint>& mu) {
  std::vector<std::vector<double>> rows;
  for (const auto& pt : mu)
    rows.push_back({pt.kappa, pt.b, pt.tau, pt.theta, pt.f_hat_res, pt.height});
  return rows;
}

int cmd_mu(const RunConfig& cfg) {
  ensure_out(cfg);
  const auto mu = mu_curve(cfg.kappa_min, cfg.step, cfg.tol);
  io::write_csv(opath(cfg, "mu.csv"), io::manifest(cfg.tol),
                {"kappa", "b", "tau", "theta", "f_hat", "height"}, mu_rows(mu));
  const ThetaInterval J = theta_range(mu);
  json j = io::manifest(cfg.tol);
  j["points"] = mu.size();
  j["kappa_extent"] = mu.back().kappa;
  j["b0"] = mu.front().b;
  j["theta_range"] = {J.lo, J.hi};
  io::write_json(opath(cfg, "mu.json"), j);
  std::cout << "mu: " << mu.size() << " points, kappa extent " << fmt17(mu.back().kappa)
            << ", Theta range (" << fmt17(J.lo) << ", " << fmt17(J.hi) << ")\n";
  return 0;
}

int cmd_kappa_star(const RunConfig& cfg) {
  const QRational q = parse_q(cfg.q);
  const auto mu = mu_curve(cfg.kappa_min, cfg.step, cfg.tol);
  const KappaStar ks = kappa_star(q.value(), mu, cfg.tol);
  std::cout << "kappa* = " << fmt17(ks.kappa_star) << "  b = " << fmt17(ks.b_at)
            << "  |g| = " << fmt17(ks.g_residual) << "\n";
  return 0;
}

int cmd_branch(const RunConfig& cfg) {
  ensure_out(cfg);
  const QRational q = parse_q(cfg.q);
  const auto mu = mu_curve(cfg.kappa_min, cfg.step, cfg.tol);
  const KappaStar ks = kappa_star(q.value(), mu, cfg.tol);
  const auto branch = branch_continue(q.value(), ks.kappa_star, cfg.points, cfg.step, cfg.tol);
  std::vector<std::vector<double>> rows;
  for (const auto& pt : branch)
    rows.push_back({pt.arc, pt.a, pt.b, pt.kappa, pt.tau, pt.theta, pt.height});
  io::write_csv(opath(cfg, "branch.csv"), io::manifest(cfg.tol),
                {"arc", "a", "b", "kappa", "tau", "theta", "height"}, rows);
  json j = io::manifest(cfg.tol);
  j["q"] = {{"m", q.m}, {"n", q.n}};
  j["kappa_star"] = ks.kappa_star;
  j["points"] = branch.size();
  j["arc_reached"] = branch.back().arc;
  io::write_json(opath(cfg, "branch.json"), j);
  std::cout << "branch: " << branch.size() << " points, arc " << fmt17(branch.back().arc)
            << "\n";
  return 0;
}

AnnulusCertificate make_certificate(const RunConfig& cfg, const QRational& q,
                                    AnnulusMesh* mesh_out) {
  const auto mu = mu_curve(cfg.kappa_min, cfg.step, cfg.tol);
  const KappaStar ks = kappa_star(q.value(), mu, cfg.tol);
  ParamTriple p{1.0, ks.b_at, ks.kappa_star};
  double arc = 0.0;
  if (cfg.point > 0) {
    const auto branch =
        branch_continue(q.value(), ks.kappa_star, cfg.point + 1, cfg.step, cfg.tol);
    const auto& pt = branch.back();
    p = ParamTriple{pt.a, pt.b, pt.kappa};
    arc = pt.arc;
  }
  AnnulusCertificate cert = assemble_annulus(p, q.m, q.n, {}, 33, 48, cfg.tol);
  cert.eta_arc = arc;
  if (mesh_out)
    *mesh_out = sample_annulus_mesh(p, q.m, q.n, cfg.grid_u, q.n * cfg.grid_v, cfg.tol);
  return cert;
}

int cmd_annulus(const RunConfig& cfg) {
  ensure_out(cfg);
  const QRational q = parse_q(cfg.q);
  const AnnulusCertificate cert = make_certificate(cfg, q, nullptr);
  nlohmann::json cj = io::certificate_json(cert);
  cj["tol"] = cfg.tol;
  io::write_json(opath(cfg, "certificate.json"), cj);
  std::cout << (cert.accepted ? "certificate accepted" : "certificate refused: " + cert.refusal)
            << "  (a, b, kappa) = (" << fmt17(cert.a) << ", " << fmt17(cert.b) << ", "
            << fmt17(cert.kappa) << ")  tau = " << fmt17(cert.tau) << "\n";
  if (!cert.accepted) {
    std::cerr << "certificate refused: " << cert.refusal << "\n";
    return 1;
  }
  return 0;
}

int cmd_export(const RunConfig& cfg) {
  ensure_out(cfg);
  const QRational q = parse_q(cfg.q);
  AnnulusMesh mesh;
  const AnnulusCertificate cert = make_certificate(cfg, q, &mesh);
  if (!cert.accepted) {
    std::cerr << "certificate refused: " << cert.refusal << "\n";
    return 1;
  }
  AnnulusCertificate c = cert;
  const std::string base = opath(cfg, "annulus_m" + std::to_string(q.m) + "_n" +
                                          std::to_string(q.n) + "_p" +
                                          std::to_string(cfg.point));
  io::write_annulus(base, c, mesh, cfg.tol);
  std::cout << "wrote " << base << ".obj, _h3.csv, .json\n";
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  ensure_out(cfg);
  struct Row {
    double a, b, kappa;
    json j;
    std::vector<double> csv;
  };
  std::vector<ParamTriple> pts;
  for (int i = 0; i < cfg.na; ++i) {
    for (int jdx = 0; jdx < cfg.nb; ++jdx) {
      for (int k = 0; k < cfg.nk; ++k) {
        const double a = cfg.a_min + (cfg.a_max - cfg.a_min) * i / std::max(1, cfg.na - 1);
        const double b = cfg.b_min + (cfg.b_max - cfg.b_min) * jdx / std::max(1, cfg.nb - 1);
        const double kk = cfg.k_min + (cfg.k_max - cfg.k_min) * k / std::max(1, cfg.nk - 1);
        pts.push_back({a, b, kk});
      }
    }
  }
  std::vector<Row> rows(pts.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= pts.size()) return;
      const ParamTriple p = pts[i];
      Row& r = rows[i];
      r.a = p.a;
      r.b = p.b;
      r.kappa = p.kappa;
      r.j = json{{"a", p.a}, {"b", p.b}, {"kappa", p.kappa}};
      const double nan = std::numeric_limits<double>::quiet_NaN();
      double theta = nan, tv = nan, height = nan, c1 = nan, c2 = nan, M = nan, N = nan,
             inv = nan;
      if (!p.in_O()) {
        r.j["error"] = "outside O";
      } else {
        try {
          AlphaBetaTrajectory traj(p, 40.0, cfg.tol);
          c1 = traj.c1_drift(std::min(3.0, traj.u_max_pos()));
          if (p.kappa >= 0) c2 = traj.c2_drift(std::min(3.0, traj.u_max_pos()));
          try {
            theta = period_theta(p, cfg.tol);
          } catch (const std::exception& e) {
            r.j["theta_error"] = e.what();
          }
          try {
            tv = tau(traj);
            const auto q = traj.eval(tv);
            if (sphere_test(q.alpha, q.beta, p.kappa) && q.alpha != 0.0)
              height = height_map(p, cfg.tol);
          } catch (const std::exception& e) {
            r.j["tau_error"] = e.what();
          }
          if (p.kappa > 0) {
            const Periods per = periods_MN(p);
            M = per.M;
            if (per.N) N = *per.N;
            r.j["M"] = M;
            r.j["N"] = per.N ? json(*per.N) : json("infinite");
          }
          // frame invariant maximum along a clamped u-line
          try {
            Surface S(p, 6.0, cfg.tol);
            const Frame o = S.start(false);
            FrameULine line = S.u_line(o, 1.0);
            const double u_hi = std::min(1.0, 0.9 * std::abs(line.u_reached()));
            double worst = 0;
            for (int s = 0; s <= 16; ++s)
              worst = std::max(worst,
                               frame_invariants(line.at(u_hi * s / 16), p.kappa).worst());
            inv = worst;
          } catch (const std::exception& e) {
            r.j["frame_error"] = e.what();
          }
        } catch (const std::exception& e) {
          r.j["error"] = e.what();
        }
      }
      if (std::isfinite(theta)) r.j["theta"] = theta;
      if (std::isfinite(tv)) r.j["tau"] = tv;
      if (std::isfinite(height)) r.j["height"] = height;
      if (std::isfinite(c1)) r.j["c1_drift"] = c1;
      if (std::isfinite(c2)) r.j["c2_drift"] = c2;
      if (std::isfinite(inv)) r.j["frame_invariant_max"] = inv;
      r.csv = {p.a, p.b, p.kappa, theta, tv, height, c1, c2, M, N, inv};
    }
  };
  std::vector<std::thread> threads;
  const int nthreads = std::min<std::size_t>(pool_size(cfg), pts.size());
  threads.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  // single writer keeps files well-formed and deterministic
  {
    auto f = io::open_out(opath(cfg, "sweep.jsonl"));
    nlohmann::json man = io::manifest(cfg.tol);
    man["grid"] = {cfg.na, cfg.nb, cfg.nk};
    f << man.dump() << "\n";  // line 1: manifest, then one row per point
    for (const Row& r : rows) f << r.j.dump() << "\n";
  }
  {
    auto f = io::open_out(opath(cfg, "sweep.csv"));
    f << "# " << io::manifest(cfg.tol).dump() << "\n";
    f << "a,b,kappa,theta,tau,height,c1_drift,c2_drift,M,N,frame_invariant_max\n";
    for (const Row& r : rows) {
      for (std::size_t i = 0; i < r.csv.size(); ++i) {
        if (std::isfinite(r.csv[i])) f << fmt17(r.csv[i]);
        f << (i + 1 < r.csv.size() ? "," : "");
      }
      f << "\n";
    }
  }
  std::cout << "sweep: " << rows.size() << " points, " << nthreads << " threads\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  try {
    load_config_file(argc, argv, cfg);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"minimal annuli with spherical curvature lines in M^3(kappa)"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file; flags override its keys");

  const auto add_common = [&](CLI::App* c) {
    c->add_option("--config", config_path, "JSON config file; flags override its keys");
    c->add_option("--a", cfg.a, "parameter a");
    c->add_option("--b", cfg.b, "parameter b");
    c->add_option("--kappa", cfg.kappa, "sectional curvature kappa");
    c->add_option("--tol", cfg.tol, "integrator tolerance");
    c->add_option("--out", cfg.out, "output directory");
    c->add_option("--grid-u", cfg.grid_u, "grid nodes in u");
    c->add_option("--grid-v", cfg.grid_v, "grid nodes in v");
    c->add_option("--u-max", cfg.u_max, "u half-range");
  };

  auto* c_solve = app.add_subcommand("solve", "omega field and PDE diagnostics");
  add_common(c_solve);
  auto* c_immerse = app.add_subcommand("immerse", "frame curves of the immersion");
  add_common(c_immerse);
  auto* c_period = app.add_subcommand("period", "period map Theta");
  add_common(c_period);
  auto* c_tau = app.add_subcommand("tau", "orthogonality root tau and diagnostics");
  add_common(c_tau);
  auto* c_cat = app.add_subcommand("catenoid-table", "rotational free-boundary table");
  add_common(c_cat);
  c_cat->add_option("--kappa-min", cfg.k_min, "table lower kappa");
  c_cat->add_option("--kappa-max", cfg.k_max, "table upper kappa");
  c_cat->add_option("--steps", cfg.nk, "table rows");
  auto* c_b0 = app.add_subcommand("find-b0", "Euclidean free-boundary catenoid locus");
  add_common(c_b0);
  auto* c_mu = app.add_subcommand("mu", "continuation of f^ = 0 into kappa < 0");
  add_common(c_mu);
  c_mu->add_option("--kappa-min", cfg.kappa_min, "continuation target");
  c_mu->add_option("--step", cfg.step, "continuation step");
  auto* c_ks = app.add_subcommand("kappa-star", "level crossing of Theta = q with mu");
  add_common(c_ks);
  c_ks->add_option("--q", cfg.q, "rational -m/n");
  c_ks->add_option("--kappa-min", cfg.kappa_min, "mu extent");
  c_ks->add_option("--step", cfg.step, "mu step");
  auto* c_br = app.add_subcommand("branch", "continuation of the branch mu^_q");
  add_common(c_br);
  c_br->add_option("--q", cfg.q, "rational -m/n");
  c_br->add_option("--points", cfg.points, "branch points");
  c_br->add_option("--step", cfg.step, "arc step");
  c_br->add_option("--kappa-min", cfg.kappa_min, "mu extent");
  auto* c_ann = app.add_subcommand("annulus", "assemble and certify one annulus");
  add_common(c_ann);
  c_ann->add_option("--q", cfg.q, "rational -m/n");
  c_ann->add_option("--point", cfg.point, "branch point index (0 = rotational limit)");
  c_ann->add_option("--step", cfg.step, "branch arc step");
  c_ann->add_option("--kappa-min", cfg.kappa_min, "mu extent");
  auto* c_exp = app.add_subcommand("export", "mesh of a certified annulus in H^3");
  add_common(c_exp);
  c_exp->add_option("--q", cfg.q, "rational -m/n");
  c_exp->add_option("--point", cfg.point, "branch point index");
  c_exp->add_option("--step", cfg.step, "branch arc step");
  c_exp->add_option("--kappa-min", cfg.kappa_min, "mu extent");
  auto* c_sw = app.add_subcommand("sweep", "grid sweep over (a, b, kappa)");
  add_common(c_sw);
  c_sw->add_option("--a-min", cfg.a_min, "");
  c_sw->add_option("--a-max", cfg.a_max, "");
  c_sw->add_option("--b-min", cfg.b_min, "");
  c_sw->add_option("--b-max", cfg.b_max, "");
  c_sw->add_option("--kappa-min", cfg.k_min, "");
  c_sw->add_option("--kappa-max", cfg.k_max, "");
  c_sw->add_option("--na", cfg.na, "");
  c_sw->add_option("--nb", cfg.nb, "");
  c_sw->add_option("--nk", cfg.nk, "");
  c_sw->add_option("--threads", cfg.threads, "worker cap (FBMA_THREADS overrides)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (c_solve->parsed()) return cmd_solve(cfg);
    if (c_immerse->parsed()) return cmd_immerse(cfg);
    if (c_period->parsed()) return cmd_period(cfg, c_period->count("--out") > 0);
    if (c_tau->parsed()) return cmd_tau(cfg, c_tau->count("--out") > 0);
    if (c_cat->parsed()) return cmd_catenoid_table(cfg);
    if (c_b0->parsed()) return cmd_find_b0(cfg, c_b0->count("--out") > 0);
    if (c_mu->parsed()) return cmd_mu(cfg);
    if (c_ks->parsed()) return cmd_kappa_star(cfg);
    if (c_br->parsed()) return cmd_branch(cfg);
    if (c_ann->parsed()) return cmd_annulus(cfg);
    if (c_exp->parsed()) return cmd_export(cfg);
    if (c_sw->parsed()) return cmd_sweep(cfg);
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
