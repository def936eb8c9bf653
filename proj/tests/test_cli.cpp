#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sqa/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path dir;
  TempDir() : dir(fs::temp_directory_path() / "sqa_cli_tests") { fs::create_directories(dir); }
  ~TempDir() { fs::remove_all(dir); }

  fs::path write(const std::string& name, const std::string& content) const {
    const fs::path p = dir / name;
    std::ofstream out(p);
    out << content;
    return p;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
};

int run(std::initializer_list<std::string> args) {
  return sqa::cli::run(std::vector<std::string>(args));
}

const char* kProblem = "{\"n\": 2, \"bonds\": [[0, 1, 1.0]]}";
const char* kPolicy = "{\"c3\": 1.0, \"c4\": 2.0, \"g\": 0.25, \"h\": 1.0}";
const char* kBadPolicy = "{\"c3\": 1.0, \"c4\": 2.0, \"g\": 0.25, \"h\": 0.5}";  // h = 2g

}  // namespace

TEST_CASE("argument errors exit with code 2") {
  CHECK(run({"--help"}) == 0);
  CHECK(run({}) == 2);
  CHECK(run({"unknown-subcommand"}) == 2);
  CHECK(run({"coeff"}) == 2);  // missing required options
  CHECK(run({"coeff", "--grid", "bogus", "--beta-over-m", "1", "--b", "4"}) == 2);
}

TEST_CASE("coeff emits the kernel table") {
  TempDir tmp;
  const fs::path out = tmp.dir / "coeff.csv";
  CHECK(run({"coeff", "--grid", "gamma=1:1:1,kappa=0.05:0.45:0.4", "--beta-over-m", "1", "--b",
             "4", "--out", out.string()}) == 0);
  const std::string csv = TempDir::slurp(out);
  std::istringstream in(csv);
  std::string header, row_free, row_bad;
  std::getline(in, header);
  std::getline(in, row_free);
  std::getline(in, row_bad);
  CHECK(header == "a,b_k,C0,C1,C2,alpha1,alpha2,lambda,sign_free");
  // Gamma = 1, K = 0.05: inside the sign-free region.
  CHECK(row_free.substr(row_free.size() - 2) == ",1");
  CHECK(row_free.find("nan") == std::string::npos);
  // Gamma = 1, K = 0.45: above the boundary, couplings undefined.
  CHECK(row_bad.substr(row_bad.size() - 2) == ",0");
  CHECK(row_bad.find("nan") != std::string::npos);
}

TEST_CASE("validate-schedule exit codes") {
  TempDir tmp;
  const fs::path good = tmp.write("good.json", kPolicy);
  const fs::path bad = tmp.write("bad.json", kBadPolicy);
  CHECK(run({"validate-schedule", "--policy", good.string(), "--n", "2"}) == 0);
  CHECK(run({"validate-schedule", "--policy", bad.string(), "--n", "2"}) == 1);
  CHECK(run({"validate-schedule", "--policy", (tmp.dir / "missing.json").string(), "--n", "2"}) ==
        2);
}

TEST_CASE("simulate writes a trace and rejects bad input") {
  TempDir tmp;
  const fs::path problem = tmp.write("problem.json", kProblem);
  const fs::path policy = tmp.write("policy.json", kPolicy);
  const fs::path out = tmp.dir / "trace.csv";

  CHECK(run({"simulate", "--problem", problem.string(), "--policy", policy.string(), "--beta",
             "2", "--slices", "4", "--sweeps", "100", "--replicas", "2", "--seed", "9",
             "--measure-every", "10", "--out", out.string()}) == 0);
  const std::string csv = TempDir::slurp(out);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line ==
        "sweep,t,gamma,kappa,alpha1,alpha2,energy_ising,corr_mean,acc_single,acc_double,replica");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 20);  // 10 records per replica

  const fs::path broken = tmp.write("broken.json", "{\"n\": 2}");
  CHECK(run({"simulate", "--problem", broken.string(), "--policy", policy.string(), "--beta",
             "2", "--slices", "4", "--sweeps", "10", "--seed", "1", "--out",
             (tmp.dir / "x.csv").string()}) == 2);

  // Schedule that leaves the sign-free region: validation failure, exit 1.
  const fs::path doomed = tmp.write(
      "doomed.json",
      "{\"c3\": 1.0, \"c4\": 2.0, \"g\": 0.25,"
      " \"h\": {\"t\": [1.0, 50.0, 100.0, 1e6], \"y\": [1.0, 1.0, 0.1, 0.1]}}");
  CHECK(run({"simulate", "--problem", problem.string(), "--policy", doomed.string(), "--beta",
             "2", "--slices", "4", "--sweeps", "1000", "--seed", "1", "--out",
             (tmp.dir / "y.csv").string()}) == 1);
}

TEST_CASE("simulate runs a ramped policy") {
  TempDir tmp;
  const fs::path problem = tmp.write("problem.json", kProblem);
  // gamma0 without t_switch: the switch point is resolved from the base.
  const fs::path policy = tmp.write(
      "ramped.json", "{\"c3\": 1.0, \"c4\": 2.0, \"g\": 0.25, \"h\": 1.0, \"gamma0\": 1.5}");
  const fs::path out = tmp.dir / "ramped.csv";
  CHECK(run({"simulate", "--problem", problem.string(), "--policy", policy.string(), "--beta",
             "2", "--slices", "4", "--sweeps", "200", "--seed", "3", "--measure-every", "1",
             "--out", out.string()}) == 0);
  // First record sits in the ramp: kappa still rising from zero.
  std::istringstream in(TempDir::slurp(out));
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK_FALSE(first.empty());
  // kappa is the fourth column.
  std::istringstream row(first);
  std::string field;
  for (int i = 0; i < 4; ++i) std::getline(row, field, ',');
  CHECK(std::stod(field) == 0.0);  // t = 0 record: K exactly zero
}

TEST_CASE("spectrum emits the gap table") {
  TempDir tmp;
  const fs::path problem = tmp.write("problem.json", kProblem);
  const fs::path policy = tmp.write("policy.json", kPolicy);
  const fs::path out = tmp.dir / "spectrum.csv";
  CHECK(run({"spectrum", "--problem", problem.string(), "--policy", policy.string(), "--beta",
             "2", "--slices", "2", "--t-lo", "100", "--t-hi", "1000", "--t-points", "3", "--out",
             out.string()}) == 0);
  std::istringstream in(TempDir::slurp(out));
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,gamma,kappa,alpha1,alpha2,gap_H,gap_Hcal,norm_dHdt,ratio");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("verify pair passes") { CHECK(run({"verify", "pair", "--samples", "20"}) == 0); }

TEST_CASE("identical invocations produce identical bytes") {
  TempDir tmp;
  const fs::path problem = tmp.write("problem.json", kProblem);
  const fs::path policy = tmp.write("policy.json", kPolicy);
  const fs::path out_a = tmp.dir / "a.csv";
  const fs::path out_b = tmp.dir / "b.csv";
  auto once = [&](const fs::path& out) {
    return run({"simulate", "--problem", problem.string(), "--policy", policy.string(), "--beta",
                "2", "--slices", "4", "--sweeps", "200", "--seed", "42", "--out", out.string()});
  };
  CHECK(once(out_a) == 0);
  CHECK(once(out_b) == 0);
  CHECK(TempDir::slurp(out_a) == TempDir::slurp(out_b));
  CHECK_FALSE(TempDir::slurp(out_a).empty());
}
