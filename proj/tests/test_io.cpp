#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <map>

#include "fbma/io.hpp"

using namespace fbma;
namespace fs = std::filesystem;

namespace {
struct TempDir {
  fs::path p;
  TempDir() : p(fs::temp_directory_path() / ("fbma_io_" + std::to_string(::getpid()))) {
    fs::create_directories(p);
  }
  ~TempDir() { fs::remove_all(p); }
  std::string operator/(const std::string& name) const { return (p / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}
}  // namespace

TEST_CASE("csv format: manifest comment, header row, LF, 17 digits", "[io]") {
  TempDir tmp;
  const std::string path = tmp / "t.csv";
  io::write_csv(path, io::manifest(1e-11), {"x", "y"},
                {{1.0 / 3.0, 2.0}, {-0.1, 1e-17}});
  const std::string body = slurp(path);
  CHECK(body.find("# {") == 0);
  CHECK(body.find("x,y\n") != std::string::npos);
  CHECK(body.find("0.33333333333333331") != std::string::npos);  // 17 significant digits
  CHECK(body.find("\r") == std::string::npos);                   // LF only
  // deterministic: rewrite gives identical bytes
  const std::string again = tmp / "t2.csv";
  io::write_csv(again, io::manifest(1e-11), {"x", "y"},
                {{1.0 / 3.0, 2.0}, {-0.1, 1e-17}});
  CHECK(slurp(path) == slurp(again));
}

TEST_CASE("metric field binary round-trip", "[io]") {
  TempDir tmp;
  const ParamTriple p{1.4, 1.3, 0.06};
  VProfile vp(p);
  const MetricField f = omega_field(p, 0.8, 17, 17, 2.0 * vp.half_period());
  const std::string path = tmp / "f.bin";
  io::write_field(path, f, vp.half_period(), 1e-11);
  nlohmann::json hdr;
  const MetricField g = io::read_field(path, &hdr);
  REQUIRE(g.nu() == f.nu());
  REQUIRE(g.nv() == f.nv());
  for (int i = 0; i < f.nu(); ++i) {
    for (int j = 0; j < f.nv(); ++j) {
      CHECK(g.at(i, j) == f.at(i, j));  // bit-exact payload
    }
  }
  CHECK(hdr["params"]["a"].get<double>() == p.a);
  CHECK(hdr["sigma"].get<double>() == vp.half_period());
  CHECK(std::abs(g.u_nodes[3] - f.u_nodes[3]) < 1e-15);

  // truncated payload is rejected
  {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string all = ss.str();
    const std::string cut = tmp / "cut.bin";
    std::ofstream out(cut, std::ios::binary);
    out.write(all.data(), static_cast<std::streamsize>(all.size() / 2));
    out.close();
    CHECK_THROWS_AS(io::read_field(cut), io::IoError);
  }
}

TEST_CASE("trajectory and curve csv columns", "[io]") {
  TempDir tmp;
  AlphaBetaTrajectory traj({1.2, 1.4, 0.0}, 3.0);
  io::write_alphabeta_csv(tmp / "ab.csv", traj, -2.0, 2.0, 16, 1e-11);
  const std::string ab = slurp(tmp / "ab.csv");
  CHECK(ab.find("u,alpha,beta,alpha_p,beta_p") != std::string::npos);

  const PlanarCurve c = gamma_curve({1, 1.4, 0.0}, 0.0, 64);
  io::write_curve_csv(tmp / "curve.csv", c, 1e-11);
  CHECK(slurp(tmp / "curve.csv").find("v,x,y,tangent_angle") != std::string::npos);
}

TEST_CASE("annulus export: obj inside the ball, h3 quadric, manifest", "[io]") {
  TempDir tmp;
  // small certified rotational annulus
  const auto mu = mu_curve(-0.2499, 0.01);
  const KappaStar ks = kappa_star(-0.6, mu);
  const ParamTriple p{1.0, ks.b_at, ks.kappa_star};
  AnnulusCertificate cert = assemble_annulus(p, 3, 5, {}, 9, 24);
  REQUIRE(cert.accepted);
  const AnnulusMesh mesh = sample_annulus_mesh(p, 3, 5, 9, 40);
  io::write_annulus(tmp / "ann", cert, mesh, 1e-11);

  SECTION("obj: vertices inside the unit ball, annulus topology") {
    std::ifstream f(tmp / "ann.obj");
    std::string tok;
    int nv = 0, nf = 0;
    double x, y, z;
    std::string line;
    std::map<std::pair<int, int>, int> edge_use;
    while (std::getline(f, line)) {
      std::istringstream ss(line);
      ss >> tok;
      if (tok == "v") {
        ss >> x >> y >> z;
        CHECK(std::sqrt(x * x + y * y + z * z) < 1.0);
        ++nv;
      } else if (tok == "f") {
        int a, b, c;
        ss >> a >> b >> c;
        for (auto [p1, p2] : {std::pair{a, b}, {b, c}, {c, a}})
          ++edge_use[{std::min(p1, p2), std::max(p1, p2)}];
        ++nf;
      }
    }
    CHECK(nv == mesh.nu() * mesh.nv());
    CHECK(nf == 2 * (mesh.nu() - 1) * mesh.nv());  // wrapped quads, two triangles each
    // boundary edges (used by one face) form exactly the two boundary circles
    int boundary_edges = 0;
    for (const auto& [e, uses] : edge_use) {
      CHECK(uses <= 2);
      if (uses == 1) ++boundary_edges;
    }
    CHECK(boundary_edges == 2 * mesh.nv());
  }

  SECTION("h3 csv satisfies the hyperboloid quadric") {
    std::ifstream f(tmp / "ann_h3.csv");
    std::string line;
    std::getline(f, line);  // manifest
    std::getline(f, line);  // header
    int rows = 0;
    while (std::getline(f, line)) {
      double u, v, x1, x2, x3, x4;
      REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf", &u, &v, &x1, &x2, &x3,
                          &x4) == 6);
      CHECK(std::abs(x1 * x1 + x2 * x2 + x3 * x3 - x4 * x4 + 1.0) < 1e-8);
      ++rows;
    }
    CHECK(rows == mesh.nu() * (mesh.nv() + 1));
  }

  SECTION("boundary mesh rows sit on the certified sphere") {
    for (int i : {0, mesh.nu() - 1}) {
      for (int j = 0; j <= mesh.nv(); j += 3) {
        const double lvl = metric_inner(mesh.at(i, j), e4(), mesh.p.kappa);
        CHECK(std::abs(lvl - cert.ball_level) < 1e-6);
      }
    }
  }

  SECTION("sidecar json carries the full manifest") {
    const auto j = nlohmann::json::parse(slurp(tmp / "ann.json"));
    CHECK(j["tool"] == kToolVersion);
    CHECK(j["q"]["m"] == 3);
    CHECK(j["q"]["n"] == 5);
    CHECK(j["accepted"] == true);
    CHECK(j.contains("residuals"));
    CHECK(j.contains("thresholds"));
    CHECK(j["ball"]["center"][3] == 1.0);
    CHECK(j["params"]["kappa"].get<double>() < 0.0);
  }
}
