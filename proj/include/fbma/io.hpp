#ifndef FBMA_IO_HPP
#define FBMA_IO_HPP

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fbma/fbsearch.hpp"
#include "fbma/util/format.hpp"
#include "fbma/wente.hpp"

namespace fbma::io {

using nlohmann::json;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
  if (!f) throw IoError("cannot open for writing: " + path);
  return f;
}

inline json manifest(double tol) {
  return json{{"tool", kToolVersion}, {"tol", tol}};
}

// CSV: one '#' manifest line, then a header row, then fmt17 cells; LF endings.
inline void write_csv(const std::string& path, const json& man,
                      const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  auto f = open_out(path);
  f << "# " << man.dump() << "\n";
  for (std::size_t i = 0; i < header.size(); ++i)
    f << header[i] << (i + 1 < header.size() ? "," : "");
  f << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      f << fmt17(row[i]) << (i + 1 < row.size() ? "," : "");
    f << "\n";
  }
}

inline void write_json(const std::string& path, const json& j) {
  auto f = open_out(path);
  f << j.dump(2) << "\n";
}

inline void write_alphabeta_csv(const std::string& path, const AlphaBetaTrajectory& traj,
                                double u_lo, double u_hi, int n, double tol) {
  std::vector<std::vector<double>> rows;
  rows.reserve(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double u = u_lo + (u_hi - u_lo) * i / n;
    const auto q = traj.eval(u);
    rows.push_back({u, q.alpha, q.beta, q.alpha_p, q.beta_p});
  }
  write_csv(path, manifest(tol), {"u", "alpha", "beta", "alpha_p", "beta_p"}, rows);
}

inline void write_frames_csv(const std::string& path, const std::vector<Frame>& frames,
                             double tol) {
  std::vector<std::vector<double>> rows;
  rows.reserve(frames.size());
  for (const Frame& f : frames) {
    rows.push_back({f.u, f.v, f.psi.x1, f.psi.x2, f.psi.x3, f.psi.x4, f.N.x1, f.N.x2,
                    f.N.x3, f.N.x4});
  }
  write_csv(path, manifest(tol),
            {"u", "v", "psi_x1", "psi_x2", "psi_x3", "psi_x4", "N_x1", "N_x2", "N_x3",
             "N_x4"},
            rows);
}

inline void write_curve_csv(const std::string& path, const PlanarCurve& c, double tol) {
  std::vector<std::vector<double>> rows;
  rows.reserve(c.v.size());
  for (std::size_t i = 0; i < c.v.size(); ++i)
    rows.push_back({c.v[i], c.x[i], c.y[i], c.theta[i]});
  write_csv(path, manifest(tol), {"v", "x", "y", "tangent_angle"}, rows);
}

// Binary grid: magic, u64 little-endian header length, JSON header, then
// row-major float64 omega and omega_u planes.
inline constexpr char kGridMagic[8] = {'F', 'B', 'M', 'A', 'G', 'R', 'D', '1'};

inline void write_field(const std::string& path, const MetricField& f, double sigma_v,
                        double tol) {
  json hdr = manifest(tol);
  hdr["nu"] = f.nu();
  hdr["nv"] = f.nv();
  hdr["u_max"] = f.u_nodes.back();
  hdr["v_span"] = f.v_nodes.back();
  hdr["sigma"] = sigma_v;
  hdr["u_strip"] = f.u_strip;
  hdr["exhausted"] = f.exhausted;
  hdr["params"] = {{"a", f.p.a}, {"b", f.p.b}, {"kappa", f.p.kappa}};
  const std::string h = hdr.dump();
  auto out = open_out(path, true);
  out.write(kGridMagic, 8);
  const std::uint64_t len = h.size();
  out.write(reinterpret_cast<const char*>(&len), 8);
  out.write(h.data(), static_cast<std::streamsize>(h.size()));
  out.write(reinterpret_cast<const char*>(f.omega.data()),
            static_cast<std::streamsize>(f.omega.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(f.omega_u.data()),
            static_cast<std::streamsize>(f.omega_u.size() * sizeof(double)));
}

inline MetricField read_field(const std::string& path, json* header_out = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::string(magic, 8) != std::string(kGridMagic, 8))
    throw IoError("bad grid magic in " + path);
  std::uint64_t len = 0;
  in.read(reinterpret_cast<char*>(&len), 8);
  std::string h(len, '\0');
  in.read(h.data(), static_cast<std::streamsize>(len));
  const json hdr = json::parse(h);
  if (header_out) *header_out = hdr;
  MetricField f;
  f.p = ParamTriple{hdr["params"]["a"], hdr["params"]["b"], hdr["params"]["kappa"]};
  const int nu = hdr["nu"], nv = hdr["nv"];
  const double umax = hdr["u_max"], vspan = hdr["v_span"];
  for (int i = 0; i < nu; ++i)
    f.u_nodes.push_back(-umax + 2.0 * umax * i / (nu - 1));
  for (int j = 0; j < nv; ++j) f.v_nodes.push_back(vspan * j / (nv - 1));
  f.u_strip = hdr["u_strip"];
  f.exhausted = hdr["exhausted"];
  f.omega.resize(static_cast<std::size_t>(nu) * nv);
  f.omega_u.resize(f.omega.size());
  in.read(reinterpret_cast<char*>(f.omega.data()),
          static_cast<std::streamsize>(f.omega.size() * sizeof(double)));
  in.read(reinterpret_cast<char*>(f.omega_u.data()),
          static_cast<std::streamsize>(f.omega_u.size() * sizeof(double)));
  if (!in) throw IoError("truncated grid file: " + path);
  return f;
}

inline json residuals_json(const ResidualBlock& r) {
  return json{{"beta_at_tau", r.beta_at_tau},
              {"theta_gap", r.theta_gap},
              {"center_gap", r.center_gap},
              {"level_gap", r.level_gap},
              {"orthogonality", r.orthogonality},
              {"closure", r.closure},
              {"containment_margin", r.containment},
              {"mirror_symmetry", r.mirror_sym},
              {"dihedral_symmetry", r.dihedral_sym},
              {"rotation_integer_gap", r.rotation_gap}};
}

inline json thresholds_json(const CertificateThresholds& t) {
  return json{{"orthogonality", t.orthogonality},
              {"sphere_gap", t.sphere_gap},
              {"closure", t.closure},
              {"theta_gap", t.theta_gap},
              {"symmetry", t.symmetry}};
}

inline json certificate_json(const AnnulusCertificate& c) {
  json j;
  j["tool"] = kToolVersion;
  j["q"] = {{"m", c.m}, {"n", c.n}, {"value", c.q}};
  j["eta_arc"] = c.eta_arc;
  j["params"] = {{"a", c.a}, {"b", c.b}, {"kappa", c.kappa}};
  j["tau"] = c.tau;
  j["sigma"] = c.sigma;
  j["ball"] = {{"center", {c.ball_center.x1, c.ball_center.x2, c.ball_center.x3,
                           c.ball_center.x4}},
               {"level", c.ball_level}};
  j["rotation_index"] = c.rotation_index;
  j["symmetry_order"] = c.symmetry_order;
  j["residuals"] = residuals_json(c.residuals);
  j["thresholds"] = thresholds_json(c.thresholds);
  j["accepted"] = c.accepted;
  if (!c.accepted) j["refusal"] = c.refusal;
  return j;
}

// OBJ in Poincare-ball coordinates, v wrap closed; quads split to triangles.
inline void write_annulus_obj(const std::string& path, const AnnulusMesh& mesh) {
  if (!(mesh.p.kappa < 0))
    throw std::domain_error("write_annulus_obj: the H^3 picture needs kappa < 0");
  auto f = open_out(path);
  f << "# " << kToolVersion << " minimal annulus, Poincare ball coordinates\n";
  const int nu = mesh.nu(), nv = mesh.nv();
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      const Vec4 snapped = project_to_manifold(mesh.at(i, j), mesh.p.kappa);
      const Vec3 q = to_poincare(to_h3(snapped, mesh.p.kappa));
      f << "v " << fmt17(q.x) << " " << fmt17(q.y) << " " << fmt17(q.z) << "\n";
    }
  }
  const auto vid = [nv](int i, int j) { return i * nv + (j % nv) + 1; };
  for (int i = 0; i + 1 < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      f << "f " << vid(i, j) << " " << vid(i + 1, j) << " " << vid(i + 1, j + 1) << "\n";
      f << "f " << vid(i, j) << " " << vid(i + 1, j + 1) << " " << vid(i, j + 1) << "\n";
    }
  }
}

inline void write_annulus_h3_csv(const std::string& path, const AnnulusMesh& mesh,
                                 double tol) {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < mesh.nu(); ++i) {
    for (int j = 0; j <= mesh.nv(); ++j) {
      const Vec4 h = to_h3(project_to_manifold(mesh.at(i, j), mesh.p.kappa), mesh.p.kappa);
      rows.push_back({mesh.u_nodes[i], mesh.v_nodes[j], h.x1, h.x2, h.x3, h.x4});
    }
  }
  write_csv(path, manifest(tol), {"u", "v", "x1", "x2", "x3", "x4"}, rows);
}

inline void write_annulus(const std::string& base, const AnnulusCertificate& cert,
                          const AnnulusMesh& mesh, double tol) {
  write_annulus_obj(base + ".obj", mesh);
  write_annulus_h3_csv(base + "_h3.csv", mesh, tol);
  json man = certificate_json(cert);
  man["tol"] = tol;
  man["mesh"] = {{"nu", mesh.nu()},
                 {"nv", mesh.nv()},
                 {"manifold_drift", mesh.manifold_drift},
                 {"obj", base + ".obj"}};
  write_json(base + ".json", man);
}

}  // namespace fbma::io

#endif
