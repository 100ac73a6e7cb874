#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "doctest.h"
#include "fogdrip/cli.hpp"
#include "fogdrip/config.hpp"
#include "fogdrip/errors.hpp"

using namespace fogdrip;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "fogdrip");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fogdrip-cli-" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("no arguments prints usage and fails") {
  const Run r = run({});
  CHECK(r.code == kExitConfig);
  CHECK(r.err.find("simulate") != std::string::npos);
  CHECK(r.err.find("phase-diagram") != std::string::npos);
}

TEST_CASE("unknown flags and subcommands are usage errors") {
  CHECK(run({"wulff", "--no-such-flag"}).code == kExitConfig);
  CHECK(run({"no-such-command"}).code == kExitConfig);
  CHECK(run({"phase-diagram", "--pv", "0.9", "--ps", "0.8", "--out", scratch("bad").string()}).code ==
        kExitConfig);
  CHECK(run({"wulff", "--directions", "abc"}).code == kExitConfig);
}

TEST_CASE("configuration files round-trip and reject unknown keys") {
  RunConfig c;
  c.N = 17;
  c.beta = 1.2345678901234567;
  c.deltas = {0.1, 0.25, 3};
  c.tension_beta = 0.7;
  c.allow_unfit = true;
  std::stringstream ss;
  write_config(c, ss);
  const RunConfig back = parse_config(ss);
  for (const auto& k : config_keys()) CHECK_MESSAGE(k.get(back) == k.get(c), k.key);
  CHECK(back.beta == c.beta);

  std::istringstream unknown("[model]\nbeta = 2\ncolour = red\n");
  CHECK_THROWS_AS(parse_config(unknown), ConfigError);
  std::istringstream bad("[geometry]\nN = twelve\n");
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  std::istringstream section("[nowhere]\nx = 1\n");
  CHECK_THROWS_AS(parse_config(section), ConfigError);
}

TEST_CASE("flags override the configuration file") {
  const fs::path dir = scratch("override");
  fs::create_directories(dir);
  {
    std::ofstream ini(dir / "in.ini");
    ini << "[model]\nbeta = 3\n[tension]\nmodel = lattice-L1\n";
  }
  const Run r = run({"wulff", "--config", (dir / "in.ini").string(), "--beta", "1.5", "--out", (dir / "w").string()});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["costUnit"].get<double>() == doctest::Approx(6.0));  // 4 beta for the L1 square
  CHECK(j["S1"].get<double>() == 1.0);
  CHECK(read_config((dir / "w" / "config.ini").string()).beta == 1.5);
}

TEST_CASE("oracle-check agrees with the reference enumeration") {
  const Run r = run({"oracle-check", "--L", "2", "--hmax", "1", "--beta", "2", "--out", scratch("oracle").string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("PASS") != std::string::npos);
  CHECK(run({"oracle-check", "--L", "2", "--hmax", "1", "--beta", "2.5", "--out", scratch("o2").string()}).code ==
        kExitConfig);
}

TEST_CASE("phase-diagram refuses a box the critical droplet does not fit") {
  const fs::path dir = scratch("pd");
  Run r = run({"phase-diagram", "--pv", "0.2", "--ps", "0.8", "--beta", "2", "--R", "8", "--tension", "isotropic",
               "--out", (dir / "a").string()});
  CHECK(r.code == kExitConfig);
  CHECK(r.err.find("9.05") != std::string::npos);

  r = run({"phase-diagram", "--pv", "0.2", "--ps", "0.8", "--beta", "2", "--R", "16", "--tension", "isotropic",
           "--points", "20", "--out", (dir / "b").string()});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  // (3/2) (D^2 w1^2 / psv)^{1/3} R^{4/3} with the disc value of w1.
  const double D = 0.16 + 0.16, psv = 0.6, w1 = 4 * std::sqrt(M_PI);
  const double expected = 1.5 * std::cbrt(D * D * w1 * w1 / psv) * std::pow(16.0, 4.0 / 3.0);
  CHECK(j["delta1Analytic"].get<double>() == doctest::Approx(expected).epsilon(1e-4));
  CHECK(j["delta1"].get<double>() == doctest::Approx(expected).epsilon(2e-4));
  CHECK(j["fits"].get<bool>());
  const std::string csv = slurp(dir / "b" / "phase_diagram.csv");
  CHECK(csv.rfind("delta,rhoStar,k,r1,r1tilde,r2,Fmin,multiplicity\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 21);
}

TEST_CASE("simulate runs are reproducible from their manifest configuration") {
  const fs::path dir = scratch("sim");
  const Run a = run({"simulate", "--N", "8", "--R", "1", "--hmax", "2", "--ensemble", "canonical", "--delta", "1",
                     "--sweeps", "300", "--thinning", "100", "--seed", "9", "--out", (dir / "a").string()});
  REQUIRE(a.code == kExitOk);
  const Run b = run({"simulate", "--config", (dir / "a" / "config.ini").string(), "--out", (dir / "b").string()});
  REQUIRE(b.code == kExitOk);
  for (const char* f : {"series.csv", "final.csv", "contours.json", "summary.json", "snapshots/snapshot_300.csv"})
    CHECK_MESSAGE(slurp(dir / "a" / f) == slurp(dir / "b" / f), f);
  const auto m = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
  CHECK(m["status"] == "complete");
  CHECK(m["seed"] == 9);
  CHECK(m["config"]["simulate"]["ensemble"] == "canonical");
}

TEST_CASE("an unconverged density estimate is flagged") {
  const fs::path dir = scratch("wl");
  const Run r = run({"simulate", "--N", "8", "--R", "1", "--hmax", "2", "--sweeps", "10", "--wang-landau", "--b-min",
                     "-10", "--b-max", "10", "--max-window-sweeps", "20", "--out", dir.string()});
  CHECK(r.code == kExitIncomplete);
  CHECK(nlohmann::json::parse(slurp(dir / "manifest.json"))["status"] == "partial");
  CHECK(slurp(dir / "dos.csv").rfind("b,logG\n", 0) == 0);
}

TEST_CASE("sweeps: empty grid, budget flag") {
  const fs::path dir = scratch("sweep");
  Run r = run({"sweep", "--N", "8", "--R", "1", "--hmax", "2", "--out", (dir / "empty").string()});
  CHECK(r.code == kExitOk);
  CHECK(nlohmann::json::parse(r.out)["rows"].empty());

  r = run({"sweep", "--N", "8", "--R", "1", "--hmax", "2", "--deltas", "0,1,2", "--replicates", "2", "--sweeps", "20",
           "--budget-sweeps", "80", "--out", (dir / "budget").string()});
  CHECK(r.code == kExitIncomplete);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["partial"].get<bool>());
  CHECK(j["rows"].size() == 2);
  CHECK(nlohmann::json::parse(slurp(dir / "budget" / "manifest.json"))["status"] == "partial");
}

}  // TEST_SUITE
