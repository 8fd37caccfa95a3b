#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "cli/app.hpp"
#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "ponomarev/errors.hpp"

namespace fs = std::filesystem;
using namespace ponomarev;
using namespace ponomarev::cli;

namespace {

const fs::path kData = PONOMAREV_TEST_DATA;

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("ponomarev_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "ponomarev");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return {std::istreambuf_iterator<char>(in), {}};
}

Json read_json(const fs::path& p) { return Json::parse(slurp(p)); }

fs::path write_config(const fs::path& dir, const std::string& text) {
  auto p = dir / "config.json";
  std::ofstream(p) << text;
  return p;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

// --- config ----------------------------------------------------------------------------

TEST_CASE("config parsing") {
  auto cfg = parse_config(Json::parse(R"({"gauge": {"n": 3, "tau": {"family": "log"}}, "theorem": 1, "depth": 7,
                                          "seed": 11, "eps_grid": "0.01:1:5"})"));
  CHECK(cfg.gauge.n == 3);
  CHECK(cfg.theorem == Theorem::thm1);
  CHECK(cfg.depth == 7);
  CHECK(cfg.seed == 11);
  CHECK(cfg.eps_grid().size() == 5);
  CHECK(cfg.eps_grid().front() == 0.01);
  CHECK(cfg.eps_grid().back() == 1.0);

  auto custom = parse_config(Json::parse(R"({"gauge": {"n": 2},
                                             "sequence": {"a": [1, 0.5, 0.1], "b": "standard"}})"));
  CHECK(custom.theorem == Theorem::custom);
  const auto pack = build_pack(custom);
  CHECK(pack.depth() == 2);
  CHECK(pack.b(2) == 0.55);

  // Default eps grid ends at n - 1.
  CHECK(parse_config(Json::parse(R"({"gauge": {"n": 3}})")).eps_grid().back() == 2.0);
}

TEST_CASE("config errors") {
  for (const char* bad : {
           R"({})",
           R"({"gauge": {"n": 1}})",
           R"({"gauge": {"n": 2}, "depth": 0})",
           R"({"gauge": {"n": 2}, "theorem": 3})",
           R"({"gauge": {"n": 2}, "eps_grid": "1:2"})",
           R"({"gauge": {"n": 2, "tau": {"family": "nope"}}})",
           R"({"gauge": {"n": 2}, "sequence": {"a": "reciprocal", "b": "wobbly"}})",
           R"({"gauge": "missing.json"})",
       })
    CHECK_THROWS_AS(parse_config(Json::parse(bad), kData), ConfigError);
  CHECK_THROWS_AS(load_config(kData / "no_such_file.json"), ConfigError);
}

TEST_CASE("eps grid strings") {
  const auto g = parse_eps_grid("1e-3:0.5:10");
  CHECK(g.lo == 1e-3);
  CHECK(g.hi == 0.5);
  CHECK(g.count == 10);
  CHECK_THROWS_AS(parse_eps_grid("a:b:c"), ConfigError);
  CHECK_THROWS_AS(parse_eps_grid("0.5:0.1:3"), ConfigError);
}

TEST_CASE("config digest is stable and sensitive") {
  const auto a = load_config(kData / "reciprocal.json");
  const auto b = load_config(kData / "reciprocal.json");
  CHECK(a.digest() == b.digest());
  CHECK(a.digest().size() == 64);
  auto c = a;
  c.seed += 1;
  CHECK(c.digest() != a.digest());
  CHECK(provenance_line(a) == "# config_digest=" + a.digest() + " seed=1");
}

// --- exit codes ------------------------------------------------------------------------

TEST_CASE("verify exit codes") {
  const auto out = scratch("exit");
  CHECK(invoke({"verify", "--config", (kData / "reciprocal.json").string(), "--out",
                (out / "std").string()})
            .code == exit_pass);
  CHECK(invoke({"verify", "--config", (kData / "tampered.json").string(), "--out",
                (out / "bad").string()})
            .code == exit_verification_failed);
  CHECK(invoke({"verify", "--config", (out / "absent.json").string(), "--out",
                (out / "x").string()})
            .code == exit_config_error);
  CHECK(invoke({"verify"}).code == exit_config_error);
  CHECK(invoke({"frobnicate"}).code == exit_config_error);

  // Clamped log-log gauge: the roots stop decreasing, so the sequence cannot
  // be built.
  const auto clamped = write_config(
      out, R"({"gauge": {"n": 2, "tau": {"family": "iterated_log", "iterations": 2,
                                          "exponent": 1, "shift": 4}},
              "theorem": 1, "depth": 8})");
  CHECK(invoke({"sequence", "--config", clamped.string(), "--out", (out / "c").string()})
            .code == exit_numeric_error);

  const auto n3 = write_config(out, R"({"gauge": {"n": 3}, "depth": 4})");
  CHECK(invoke({"render", "--config", n3.string(), "--out", (out / "r").string()}).code ==
        exit_config_error);
}

TEST_CASE("tampered pack fails only the pack checks") {
  const auto out = scratch("tampered");
  invoke({"verify", "--config", (kData / "tampered.json").string(), "--out", out.string()});
  const auto j = read_json(out / "verify.json");
  CHECK(j["report"]["passed"] == false);
  for (const auto& c : j["report"]["checks"]) {
    const std::string name = c["name"];
    if (name == "gluing" || name == "standard_coefficients")
      CHECK(c["status"] == "fail");
    else
      CHECK(c["status"] != "fail");
  }
}

TEST_CASE("standalone binary") {
  const char* exe = std::getenv("PONOMAREV_EXE");
  if (!exe) return;
  const auto out = scratch("exe");
  const std::string base = std::string("\"") + exe + "\" verify --out \"" + out.string() +
                           "\" --config \"" + (kData / "%s").string() + "\" > /dev/null 2>&1";
  auto status = [&](const char* file) {
    std::string cmd = base;
    cmd.replace(cmd.find("%s"), 2, file);
    const int s = std::system(cmd.c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  CHECK(status("reciprocal.json") == 0);
  CHECK(status("tampered.json") == 2);
  CHECK(status("absent.json") == 3);
}

// --- outputs ---------------------------------------------------------------------------

TEST_CASE("identity pack verifies with unit Jacobian") {
  const auto out = scratch("identity");
  CHECK(invoke({"verify", "--config", (kData / "identity.json").string(), "--out",
                out.string()})
            .code == exit_pass);
  const auto j = read_json(out / "verify.json");
  bool saw_identity = false;
  for (const auto& c : j["report"]["checks"])
    if (c["name"] == "identity") {
      saw_identity = true;
      CHECK(c["status"] == "pass");
    }
  CHECK(saw_identity);
  const auto map = build_map(load_config(kData / "identity.json"));
  for (double x : {-0.9, -0.3, 0.0, 0.41, 0.77}) {
    Point p(2);
    p << x, 0.5 * x + 0.1;
    CHECK(map.jacobian_det(p) == 1.0);
    CHECK((map.eval(p) - p).cwiseAbs().maxCoeff() <= 4 * std::numeric_limits<double>::epsilon());
  }
}

TEST_CASE("sequence table") {
  const auto out = scratch("sequence");
  REQUIRE(invoke({"sequence", "--config", (kData / "thm2.json").string(), "--out",
                  out.string()})
              .code == exit_pass);
  const auto rows = read_csv(out / "sequence.csv");
  REQUIRE(rows.size() == 32);
  CHECK(rows[0] == std::vector<std::string>{"k", "a", "b", "r", "rt", "alpha", "beta",
                                            "check_value", "check_bound", "check"});
  CHECK(std::stod(rows[1][1]) == 1.0);
  CHECK(std::stod(rows[1][2]) == 1.0);
  for (std::size_t i = 2; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][5]) == 0.5);
    CHECK(rows[i][9] == "true");
  }
  const auto j = read_json(out / "sequence.json");
  CHECK(j["report"]["all_checks"] == true);
}

TEST_CASE("eval keeps the boundary fixed") {
  const auto out = scratch("eval");
  const auto pts = out / "points.txt";
  std::ofstream(pts) << "# boundary and interior\n1,0.3\n-1;-1\n0.25 1\n0,0\n0.1,0.2\n";
  REQUIRE(invoke({"eval", "--config", (kData / "reciprocal.json").string(), "--points",
                  pts.string(), "--out", out.string()})
              .code == exit_pass);
  const auto rows = read_csv(out / "eval.csv");
  REQUIRE(rows.size() == 6);
  // Columns: x1,x2,y1,y2,xr1,xr2,roundtrip_error,depth,region,error.
  for (int i = 1; i <= 3; ++i) {
    CHECK(rows[i][0] == rows[i][2]);
    CHECK(rows[i][1] == rows[i][3]);
  }
  CHECK(std::stod(rows[4][2]) == 0.0);
  CHECK(std::stod(rows[4][3]) == 0.0);
}

TEST_CASE("eval reports bad points and continues") {
  const auto out = scratch("eval_bad");
  const auto pts = out / "points.txt";
  std::ofstream(pts) << "0.5,0.5\n2,0\n0.1,0.1\n";
  const auto r = invoke({"eval", "--config", (kData / "reciprocal.json").string(),
                         "--points", pts.string(), "--out", out.string()});
  CHECK(r.code == exit_pass);
  const auto rows = read_csv(out / "eval.csv");
  REQUIRE(rows.size() == 4);
  CHECK(rows[2].back() != "");
}

TEST_CASE("outputs are byte-identical across runs") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  for (const auto& dir : {a, b}) {
    for (const char* cmd : {"verify", "render", "norms", "hausdorff", "sequence"})
      REQUIRE(invoke({cmd, "--config", (kData / "thm2.json").string(), "--out", dir.string()})
                  .code == exit_pass);
  }
  int files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    const auto name = e.path().filename();
    CHECK_MESSAGE(slurp(e.path()) == slurp(b / name), name.string());
    ++files;
  }
  CHECK(files >= 12);
  const auto pgm = slurp(a / "regions.pgm");
  CHECK(pgm.rfind("P5\n# config_digest=", 0) == 0);
}

TEST_CASE("command line overrides") {
  const auto out = scratch("override");
  REQUIRE(invoke({"norms", "--config", (kData / "reciprocal.json").string(), "--out",
                  out.string(), "--depth", "9", "--seed", "4", "--eps-grid", "0.1:1:3"})
              .code == exit_pass);
  const auto j = read_json(out / "norms.json");
  CHECK(j["seed"] == 4);
  CHECK(j["report"]["depth"] == 9);
  CHECK(j["report"]["eps"].size() == 3);
}
