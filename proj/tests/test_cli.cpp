#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {
std::string bin() {
  const char* b = std::getenv("FBMA_BIN");
  return b ? b : "";
}

struct Run {
  int exit_code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string out_file =
      (fs::temp_directory_path() / "fbma_cli_out.txt").string();
  const int rc = std::system((bin() + " " + args + " > " + out_file + " 2>&1").c_str());
  std::ifstream f(out_file);
  std::ostringstream ss;
  ss << f.rdbuf();
  return {WEXITSTATUS(rc), ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}
}  // namespace

TEST_CASE("cli basics", "[cli]") {
  if (bin().empty()) {
    SKIP("FBMA_BIN not set");
  }
  const fs::path tmp = fs::temp_directory_path() / "fbma_cli_test";
  fs::remove_all(tmp);
  fs::create_directories(tmp);

  SECTION("period prints Theta and the closed-form gap") {
    const Run r = run("period --a 1 --b 1 --kappa 0");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("-0.7071067811") != std::string::npos);
    CHECK(r.out.find("closed-form gap") != std::string::npos);
  }

  SECTION("usage errors exit with 2") {
    CHECK(run("").exit_code == 2);
    CHECK(run("nonsense-subcommand").exit_code == 2);
    CHECK(run("period --a notanumber").exit_code == 2);
  }

  SECTION("q outside the computed J exits 1 with a diagnostic") {
    const Run r = run("annulus --q -2/3 --out " + (tmp / "ann").string());
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("outside computed J") != std::string::npos);
  }

  SECTION("numerical failure (tau outside W) exits 1") {
    const Run r = run("tau --a 1 --b 2.5 --kappa 0");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("numerical failure") != std::string::npos);
  }

  SECTION("default 10x10x10 sweep completes with all rows present") {
    const auto d = tmp / "full";
    CHECK(run("sweep --out " + d.string()).exit_code == 0);
    const std::string jl = slurp(d / "sweep.jsonl");
    int lines = 0;
    for (char ch : jl)
      if (ch == '\n') ++lines;
    CHECK(lines == 1001);  // manifest line + 10^3 rows
    // kappa > 0 rows carry the (s,t)-reduction period diagnostics
    std::istringstream ss(jl);
    std::string row;
    int with_MN = 0;
    while (std::getline(ss, row)) {
      if (row.find("\"kappa\":0.2") != std::string::npos) {
        CHECK(row.find("\"M\":") != std::string::npos);
        CHECK(row.find("\"N\":") != std::string::npos);
        ++with_MN;
      }
    }
    CHECK(with_MN == 100);
  }

  SECTION("sweep reruns are byte-identical and config flags override") {
    const auto d1 = tmp / "s1";
    const auto d2 = tmp / "s2";
    const std::string grid = " --na 2 --nb 2 --nk 3 --a-min 1 --a-max 1.2 --b-min 1.1 "
                             "--b-max 1.6 --kappa-min -0.1 --kappa-max 0.1";
    CHECK(run("sweep" + grid + " --out " + d1.string()).exit_code == 0);
    CHECK(run("sweep" + grid + " --out " + d2.string()).exit_code == 0);
    CHECK(slurp(d1 / "sweep.csv") == slurp(d2 / "sweep.csv"));
    CHECK(slurp(d1 / "sweep.jsonl") == slurp(d2 / "sweep.jsonl"));
    CHECK(slurp(d1 / "sweep.csv").find("a,b,kappa,theta") != std::string::npos);

    // config file provides the grid; a flag overrides one key
    const auto cfgp = tmp / "cfg.json";
    {
      std::ofstream f(cfgp);
      f << R"({"na":2,"nb":2,"nk":3,"a_min":1,"a_max":1.2,"b_min":1.1,"b_max":1.6,)"
        << R"("k_min":-0.1,"k_max":0.1,"out":")" << (tmp / "s3").string() << R"("})";
    }
    CHECK(run("sweep --config " + cfgp.string()).exit_code == 0);
    CHECK(slurp(tmp / "s3" / "sweep.csv") == slurp(d1 / "sweep.csv"));
    CHECK(run("sweep --config " + cfgp.string() + " --out " + (tmp / "s4").string())
              .exit_code == 0);
    CHECK(slurp(tmp / "s4" / "sweep.csv") == slurp(d1 / "sweep.csv"));
  }

  fs::remove_all(tmp);
}
