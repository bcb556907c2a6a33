#include <catch_amalgamated.hpp>

#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using tvkit::cli::run;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("tvkit-cli-" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path run_dir(const Result& r) { return fs::path(r.out.substr(0, r.out.find('\n'))); }

}  // namespace

TEST_CASE("exit code matrix", "[cli]") {
  const auto out = scratch("codes").string();
  struct Case {
    std::vector<std::string> args;
    int code;
    std::string mention;
  };
  const std::vector<Case> cases{
      {{}, 2, ""},
      {{"frobnicate"}, 2, ""},
      {{"modulus", "--poly", "0,0,x", "--out", out}, 2, "'x'"},
      {{"modulus", "--poly", "0,0,1", "--density", "cauchy", "--out", out}, 2, "cauchy"},
      {{"modulus", "--poly", "0,0,1", "--u", "0:1:10", "--out", out}, 2, "--u"},
      {{"modulus", "--poly", "0,0,1", "--u", "1e-3:1", "--out", out}, 2, "--u"},
      {{"modulus", "--poly", "0,0,1", "--format", "xml", "--out", out}, 2, ""},
      {{"certify", "--poly", "0,0,1", "--density", "lebesgue:0,1", "--out", out}, 2, "Gaussian"},
      {{"bound", "--f", "0,0,1", "--g", "0,0,1", "--cf", "1", "--out", out}, 2, "together"},
      {{"tv", "--f", "0,1", "--out", out}, 2, ""},
      {{"experiment", "nope", "--out", out}, 2, ""},
      {{"experiment", "vandermonde", "--n", "40", "--out", out}, 2, ""},
      {{"tv", "--f", "0,1", "--g", "0,1", "--mc-samples", "10", "--out", out}, 2, "samples"},
      {{"pushforward", "--poly", "0,0,1", "--at", "0", "--out", out}, 3, "critical"},
      {{"pushforward", "--poly", "0,0,1", "--at", "0.5", "--out", out}, 0, ""},
      {{"--help"}, 0, ""},
  };
  for (const auto& c : cases) {
    const auto r = call(c.args);
    INFO("args: " << Catch::StringMaker<std::vector<std::string>>::convert(c.args) << "\nstderr: " << r.err);
    CHECK(r.code == c.code);
    if (!c.mention.empty()) CHECK(r.err.find(c.mention) != std::string::npos);
  }
}

TEST_CASE("run directory layout", "[cli]") {
  const auto out = scratch("layout");
  const auto r = call({"modulus", "--poly", "0,0,1", "--u", "1e-4:1:30", "--out", out.string()});
  REQUIRE(r.code == 0);
  const fs::path dir = run_dir(r);
  CHECK(dir.parent_path() == out);
  CHECK(dir.filename().string().rfind("modulus-", 0) == 0);
  for (const char* f : {"report.json", "curve.csv", "plot.dat", "timing.json"}) CHECK(fs::exists(dir / f));
  const auto csv = slurp(dir / "curve.csv");
  CHECK(csv.rfind("u,delta,error_estimate\n", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 31);
  const auto report = tvkit::Json::parse(slurp(dir / "report.json"));
  CHECK(report["result"]["fit"]["alpha"].get<double>() == Catch::Approx(0.5).margin(0.05));

  const auto again = call({"modulus", "--poly", "0,0,1", "--u", "1e-4:1:30", "--out", out.string(), "--format", "json"});
  REQUIRE(again.code == 0);
  CHECK(run_dir(again) != dir);
  CHECK(fs::exists(run_dir(again) / "report.json"));
  CHECK_FALSE(fs::exists(run_dir(again) / "curve.csv"));
}

TEST_CASE("bound example", "[cli]") {
  const auto out = scratch("bound");
  const auto r = call({"bound", "--f", "0,0,1", "--g", "0,0.1,1", "--density", "gauss", "--out", out.string()});
  REQUIRE(r.code == 0);
  const auto j = tvkit::Json::parse(slurp(run_dir(r) / "report.json"));
  CHECK(j["result"]["bound"]["l1"].get<double>() == Catch::Approx(0.0797885).margin(1e-7));
  CHECK(j["result"]["checks"]["tv_below_sum"].get<bool>());
  CHECK(j["result"]["checks"]["sum_below_bound"].get<bool>());
}

TEST_CASE("gauss-poly suite slope", "[cli]") {
  const auto out = scratch("gauss");
  const auto r = call({"experiment", "gauss-poly", "--m", "2", "--deltas", "1e-4:1e-1:10", "--seed", "7", "--out", out.string()});
  REQUIRE(r.code == 0);
  const auto j = tvkit::Json::parse(slurp(run_dir(r) / "report.json"));
  const double slope = j["result"]["primary"]["fit_delta"]["slope"].get<double>();
  CHECK(slope >= 1.0 / 3 - 0.05);
  CHECK(slope <= 0.5 + 0.1);
}

TEST_CASE("seeded runs are byte identical", "[cli]") {
  const auto out = scratch("determinism");
  const std::vector<std::vector<std::string>> commands{
      {"tv", "--f", "0,0,1", "--g", "0.05,0,1", "--mc-samples", "100000", "--seed", "9"},
      {"experiment", "radial", "--d", "3", "--m", "1", "--mc-samples", "50000", "--seed", "4"},
      {"experiment", "vandermonde"},
  };
  for (auto args : commands) {
    args.push_back("--out");
    args.push_back(out.string());
    const auto a = call(args), b = call(args);
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    for (const char* f : {"report.json", "curve.csv", "plot.dat"})
      CHECK(slurp(run_dir(a) / f) == slurp(run_dir(b) / f));
  }
}
