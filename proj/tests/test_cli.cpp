#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "blowup/cli/commands.hpp"
#include "blowup/format.hpp"
#include "blowup/verify/rng.hpp"

using namespace blowup;
using namespace blowup::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("blowup_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p.parent_path());
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void put(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
}

int run_quiet(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  return run(args, out, err);
}

}  // namespace

TEST_SUITE("format") {
  TEST_CASE("shortest round trip") {
    verify::Rng rng(3, 0);
    for (int i = 0; i < 2000; ++i) {
      const double x = std::ldexp(rng.uniform(-1.0, 1.0), static_cast<int>(rng.uniform(-300.0, 300.0)));
      CHECK(parse_real(format_real(x)) == x);
    }
    CHECK(format_real(0.1) == "0.1");
    CHECK(format_real(1e-10) == "1e-10");
    CHECK(parse_real("+2.5") == 2.5);
    CHECK_THROWS_AS(parse_real("1.0x"), InvalidArgument);
    CHECK_THROWS_AS(parse_real(""), InvalidArgument);
  }
}

TEST_SUITE("config") {
  TEST_CASE("defaults and decimal strings") {
    const auto c = parse_config(R"({"tol": "1e-11", "glue": {"D": "3.5", "epsilon": ["1e-2"]}})");
    CHECK(c.tol == 1e-11);
    CHECK(c.glue.D == 3.5);
    CHECK(c.glue.epsilon == std::vector<double>{1e-2});
    CHECK(c.delaunay.n == std::vector<int>{3, 4, 5, 6});
    CHECK(c.seed == 1);
  }

  TEST_CASE("top-level n fills sections without their own n") {
    const auto c = parse_config(R"({"n": 5, "glue": {"n": [3, 4]}})");
    CHECK(c.delaunay.n == std::vector<int>{5});
    CHECK(c.glue.n == std::vector<int>{3, 4});
    CHECK(c.verify.lipschitz.n == std::vector<int>{5});
  }

  TEST_CASE("fail-loud validation") {
    CHECK_THROWS_AS(parse_config(R"({"bogus": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"glue": {"DD": 3}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"verify": {"lipschitz": {"pairz": 3}}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"delaunay": {"T": []}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"tol": "abc"})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"tol": -1})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"n": 2})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"verify": {"suites": ["nope"]}})"), ConfigError);
    CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
  }

  TEST_CASE("full-range seeds") {
    CHECK(parse_config(R"({"seed": "18446744073709551615"})").seed == 18446744073709551615ULL);
    CHECK(parse_config(R"({"seed": 18446744073709551615})").seed == 18446744073709551615ULL);
    CHECK_THROWS_AS(parse_config(R"({"seed": -1})"), ConfigError);
  }

  TEST_CASE("normalized config is a fixed point") {
    const auto c = parse_config(R"({"seed": 9, "n": [3], "tol": 3e-11})");
    for (const std::string sub : {"delaunay", "glue", "construct", "verify"}) {
      const auto j = normalized_config(c, sub);
      const auto again = normalized_config(parse_config(j.dump()), sub);
      CHECK(j.dump() == again.dump());
    }
  }
}

TEST_SUITE("bundle") {
  TEST_CASE("sha256 known vectors") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  }

  TEST_CASE("csv dialect") {
    Csv c({"a", "b"});
    c.row({"1", "x,y"});
    c.row({"he said \"hi\"", ""});
    CHECK(c.str() == "a,b\n1,\"x,y\"\n\"he said \"\"hi\"\"\",\n");
    CHECK_THROWS(c.row({"only one"}));
  }

  TEST_CASE("plot data has one header line") {
    const auto s = plot_data("t", "K", 4, {0.0, 0.5}, {1.0, 2.0});
    CHECK(s == "# t K seed=4\n0 1\n0.5 2\n");
  }
}

TEST_SUITE("commands") {
  TEST_CASE("delaunay bundle is deterministic and hashed") {
    const auto dir = scratch("cfg");
    fs::create_directories(dir);
    put(dir / "c.json", R"({"delaunay": {"n": [3, 5], "T": [15, 20, 25], "energy_fractions": ["0.5"]}})");
    const auto a = scratch("a"), b = scratch("b");
    CHECK(run_quiet({"delaunay", "--config", (dir / "c.json").string(), "--out", a.string(), "--seed", "7"}) == 0);
    CHECK(run_quiet({"delaunay", "--config", (dir / "c.json").string(), "--out", b.string(), "--seed", "7"}) == 0);
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(a)) {
      ++files;
      CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
    }
    CHECK(files >= 8);
    const auto m = Json::parse(slurp(a / "manifest.json"));
    for (const auto& f : m.at("files")) {
      CHECK(sha256_hex(slurp(a / f.at("path").get<std::string>())) == f.at("sha256").get<std::string>());
      CHECK(f.at("command").get<std::string>() == "blowup delaunay --config config.json --seed 7 --tol 1e-10 --out .");
    }
    const auto csv = slurp(a / "delaunay_n3.csv");
    CHECK(csv.rfind("n,T,eta,ln_eta,H_drift,status,seed\n", 0) == 0);
    CHECK(csv.find('\r') == std::string::npos);
    // The listed command regenerates the bundle in place.
    const auto cwd = fs::current_path();
    fs::current_path(a);
    CHECK(run_quiet({"delaunay", "--config", "config.json", "--seed", "7", "--tol", "1e-10", "--out", "."}) == 0);
    fs::current_path(cwd);
    for (const auto& e : fs::directory_iterator(a)) CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
  }

  TEST_CASE("exit codes and summaries on failure") {
    const auto dir = scratch("cfg2");
    fs::create_directories(dir);
    put(dir / "empty.json", R"({"delaunay": {"T": []}})");
    const auto e = scratch("e");
    CHECK(run_quiet({"delaunay", "--config", (dir / "empty.json").string(), "--out", e.string()}) == kExitUsage);
    const auto s = Json::parse(slurp(e / "summary.json"));
    CHECK(s.at("status") == "error");
    CHECK(run_quiet({"delaunay"}) == kExitUsage);
    CHECK(run_quiet({}) == kExitUsage);
    CHECK(run_quiet({"delaunay", "--out", e.string(), "--tol", "zz"}) == kExitUsage);

    put(dir / "short.json", R"({"glue": {"T": [10, 12], "series_T": 13, "epsilon": ["0.5"], "fd_points": 101}})");
    const auto g = scratch("g");
    CHECK(run_quiet({"glue", "--config", (dir / "short.json").string(), "--out", g.string()}) == kExitCheckFailed);
    const auto gs = Json::parse(slurp(g / "summary.json"));
    CHECK(gs.at("passed") == false);
    CHECK(slurp(g / "glue_n3.csv").find("must exceed 4D") != std::string::npos);

    put(dir / "all_bad.json", R"({"glue": {"T": [10, 11], "series_T": 13, "epsilon": ["0.5"], "fd_points": 101}})");
    const auto g2 = scratch("g2");
    CHECK(run_quiet({"glue", "--config", (dir / "all_bad.json").string(), "--out", g2.string()}) == kExitCheckFailed);

    put(dir / "refuse.json", R"({"verify": {"suites": ["lipschitz"], "lipschitz": {"n": 3}}})");
    const auto v = scratch("v");
    CHECK(run_quiet({"verify", "--config", (dir / "refuse.json").string(), "--out", v.string()}) == kExitCheckFailed);
    CHECK(slurp(v / "lipschitz_n3.json").find("requires n > 4") != std::string::npos);
  }

  TEST_CASE("report aggregates bundles and rechecks hashes") {
    const auto dir = scratch("cfg3");
    fs::create_directories(dir);
    put(dir / "d.json", R"({"delaunay": {"n": 3, "T": [15, 20, 25], "energy_fractions": ["0.5"]}})");
    const auto d = scratch("d");
    REQUIRE(run_quiet({"delaunay", "--config", (dir / "d.json").string(), "--out", d.string()}) == 0);
    put(dir / "r.json", R"({"report": {"inputs": ["../d"]}})");
    const auto r = scratch("r");
    CHECK(run_quiet({"report", "--config", (dir / "r.json").string(), "--out", r.string()}) == 0);
    CHECK(Json::parse(slurp(r / "report.json")).at("passed") == true);
    put(d / "delaunay_n3.csv", "tampered\n");
    CHECK(run_quiet({"report", "--config", (dir / "r.json").string(), "--out", r.string()}) == kExitCheckFailed);
    put(dir / "none.json", R"({"report": {}})");
    CHECK(run_quiet({"report", "--config", (dir / "none.json").string(), "--out", r.string()}) == kExitUsage);
  }
}
