#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "mlnhardy/io.hpp"

namespace fs = std::filesystem;

namespace {

std::string binary() {
  const char* env = std::getenv("MLNHARDY_BIN");
  REQUIRE_MESSAGE(env != nullptr, "MLNHARDY_BIN must point at the CLI binary");
  return env;
}

int run(const std::string& args, const std::string& log) {
  const std::string cmd = binary() + " " + args + " >" + log + " 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

struct TempDir {
  fs::path path;
  TempDir(const std::string& tag) : path(fs::temp_directory_path() / ("mlnhardy_test_" + tag)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("cli solve end to end") {
  TempDir tmp("solve");
  write(tmp.path / "cfg.json", R"({
    "n": 3, "s": 0.5, "gamma": 0.15,
    "domain": {"kind": "ball", "radius": 1.0},
    "N": 10, "box_halfwidth": 1.25,
    "f": {"kind": "constant", "value": 1.0},
    "tol": 1e-10
  })");
  int rc = run("solve --config " + (tmp.path / "cfg.json").string() + " --output " +
                   (tmp.path / "out").string(),
               (tmp.path / "log.txt").string());
  CHECK(rc == 0);
  CHECK(fs::exists(tmp.path / "out" / "report.json"));
  CHECK(fs::exists(tmp.path / "out" / "solution.csv"));
  const std::string rep = slurp(tmp.path / "out" / "report.json");
  CHECK(rep.find("residual_norm") != std::string::npos);
  CHECK(rep.find("\"command\": \"solve\"") != std::string::npos);  // config echoed
}

TEST_CASE("cli validation failures exit 1 with a named field") {
  TempDir tmp("bad");
  write(tmp.path / "missing.json", R"({"n": 3, "s": 0.5})");
  int rc = run("solve --config " + (tmp.path / "missing.json").string() + " --output " +
                   (tmp.path / "o1").string(),
               (tmp.path / "log1.txt").string());
  CHECK(rc == 1);
  CHECK(slurp(tmp.path / "log1.txt").find("missing field: N") != std::string::npos);

  // sweep with gamma at the threshold must cite γ(m)
  write(tmp.path / "sweep.json", R"({
    "n": 3, "s": 0.5, "m": 1.3,
    "domain": {"kind": "ball", "radius": 1.0},
    "N": 10, "box_halfwidth": 1.25,
    "f": {"kind": "constant", "value": 1.0},
    "gammas": [0.25]
  })");
  rc = run("sweep --config " + (tmp.path / "sweep.json").string() + " --output " +
               (tmp.path / "o2").string(),
           (tmp.path / "log2.txt").string());
  CHECK(rc == 1);
  CHECK(slurp(tmp.path / "log2.txt").find("γ(m)") != std::string::npos);

  rc = run("frobnicate --config x.json", (tmp.path / "log3.txt").string());
  CHECK(rc != 0);
}

TEST_CASE("cli numerical failure exits 2") {
  TempDir tmp("num");
  write(tmp.path / "cfg.json", R"({
    "n": 3, "s": 0.5, "gamma": 60.0, "local_only": true,
    "domain": {"kind": "ball", "radius": 1.0},
    "N": 10, "box_halfwidth": 1.25,
    "f": {"kind": "constant", "value": 1.0}
  })");
  int rc = run("solve --config " + (tmp.path / "cfg.json").string() + " --output " +
                   (tmp.path / "out").string(),
               (tmp.path / "log.txt").string());
  CHECK(rc == 2);
  CHECK(slurp(tmp.path / "log.txt").find("numerical failure") != std::string::npos);
}

TEST_CASE("cli outputs are byte-identical across thread counts and reruns") {
  TempDir tmp("det");
  write(tmp.path / "cfg.json", R"({
    "n": 3, "s": 0.5, "gamma": 0.1,
    "domain": {"kind": "ball", "radius": 1.0},
    "N": 10, "box_halfwidth": 1.25,
    "f": {"kind": "power", "beta": 1.0},
    "K": 6, "seed": 777
  })");
  const std::string cfg = (tmp.path / "cfg.json").string();
  int rc1 = run("iterate --config " + cfg + " --output " + (tmp.path / "a").string() +
                    " --threads 1",
                (tmp.path / "l1.txt").string());
  int rc2 = run("iterate --config " + cfg + " --output " + (tmp.path / "b").string() +
                    " --threads 4",
                (tmp.path / "l2.txt").string());
  int rc3 = run("iterate --config " + cfg + " --output " + (tmp.path / "c").string() +
                    " --threads 4",
                (tmp.path / "l3.txt").string());
  REQUIRE(rc1 == 0);
  REQUIRE(rc2 == 0);
  REQUIRE(rc3 == 0);
  for (const char* name : {"trace.csv", "solution.csv"}) {
    const std::string a = slurp(tmp.path / "a" / name);
    const std::string b = slurp(tmp.path / "b" / name);
    const std::string c = slurp(tmp.path / "c" / name);
    CHECK(a == b);
    CHECK(b == c);
    CHECK(!a.empty());
  }
}

TEST_CASE("cli constant command emits the exponent table") {
  TempDir tmp("const");
  write(tmp.path / "cfg.json", R"({"n": 3, "s": 0.5, "m": 1.2})");
  int rc = run("constant --config " + (tmp.path / "cfg.json").string() + " --output " +
                   (tmp.path / "out").string(),
               (tmp.path / "log.txt").string());
  CHECK(rc == 0);
  const std::string rep = slurp(tmp.path / "out" / "report.json");
  CHECK(rep.find("\"lambda_n\": 0.25") != std::string::npos);
  CHECK(rep.find("gamma_m") != std::string::npos);
  CHECK(fs::exists(tmp.path / "out" / "constants.csv"));
}

TEST_CASE("field serialization round trip") {
  // header + CSV value table; doubles round-trip exactly through %.17g
  TempDir tmp("field");
  using namespace mlnhardy;
  Mesh mesh = Mesh::build(Domain::ball(3, 1.0), 8, 1.25);
  FieldVector u = sample_field(
      [](std::span<const double> x) { return std::sin(13.7 * x[0]) + x[1] * x[2]; }, mesh);
  io::write_field((tmp.path / "field").string(), u);
  CHECK(fs::exists(tmp.path / "field.json"));
  FieldVector back = io::read_field_csv((tmp.path / "field.csv").string(), mesh);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(back[i] == u[i]);
}

TEST_CASE("cli verify runs the property suite") {
  TempDir tmp("verify");
  write(tmp.path / "cfg.json", R"({})");
  int rc = run("verify --config " + (tmp.path / "cfg.json").string() + " --output " +
                   (tmp.path / "out").string(),
               (tmp.path / "log.txt").string());
  CHECK(rc == 0);
  const std::string log = slurp(tmp.path / "log.txt");
  CHECK(log.find("[ok]") != std::string::npos);
  CHECK(log.find("[FAIL]") == std::string::npos);
}
