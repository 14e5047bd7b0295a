#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "spheroidal/cli.hpp"

using spheroidal::run_cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("format_double uses 17 significant digits") {
  CHECK(spheroidal::format_double(0.1) == "0.10000000000000001");
  CHECK(spheroidal::format_double(-0.5) == "-0.5");
}

TEST_CASE("coeffs") {
  Result r = run({"coeffs", "--m", "1", "--order", "3", "--format", "structured-text"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["energy"] == nlohmann::json::array({"0/1", "-1/1", "-11/20", "-3/40"}));

  r = run({"coeffs", "--m", "1", "--order", "0", "--format", "structured-text"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["energy"] == nlohmann::json::array({"0/1"}));
  CHECK(nlohmann::json::parse(r.out)["orders"].empty());

  r = run({"coeffs", "--m", "0", "--order", "2"});
  CHECK(r.code == 1);
  CHECK(r.err.find("m >= 1") != std::string::npos);

  r = run({"coeffs", "--m", "1", "--order", "2"});
  CHECK(r.code == 0);
  CHECK(lines_of(r.out).at(1) == "kind,n,k,value");
}

TEST_CASE("invalid invocations exit 1") {
  CHECK(run({}).code == 1);
  CHECK(run({"bogus"}).code == 1);
  CHECK(run({"coeffs", "--order", "-1"}).code == 1);
  CHECK(run({"coeffs", "--m", "x"}).code == 1);
  CHECK(run({"coeffs", "--format", "xml"}).code == 1);
  CHECK(run({"eval", "--beta", "0.1,0.2"}).code == 1);
  CHECK(run({"eval", "--beta", "abc"}).code == 1);
  CHECK(run({"eval", "--theta-points", "0"}).code == 1);
  CHECK(run({"verify", "--tol", "bogus=1"}).code == 1);
  CHECK(run({"verify", "--tol", "eigenvalue"}).code == 1);
  CHECK(run({"coeffs", "--unknown"}).code == 1);
  CHECK(run({"coeffs", "--help"}).code == 0);
}

TEST_CASE("I/O failure exits 2") {
  const Result r = run({"coeffs", "--out", "/nonexistent-dir/table.json"});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("--out writes the same bytes as stdout") {
  const auto path = std::filesystem::temp_directory_path() / "spheroidal_cli_test.json";
  const Result to_file = run({"coeffs", "--m", "2", "--order", "5", "--format", "structured-text", "--out", path.string()});
  REQUIRE(to_file.code == 0);
  CHECK(to_file.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == run({"coeffs", "--m", "2", "--order", "5", "--format", "structured-text"}).out);
  std::filesystem::remove(path);
}

TEST_CASE("eval") {
  Result r = run({"eval", "--m", "1", "--order", "3", "--beta", "0.1", "--theta-points", "181"});
  REQUIRE(r.code == 0);
  auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 183);
  CHECK(lines[0] == "# m=1 N=3 beta=0.10000000000000001 E0=-0.105575");
  CHECK(lines[1] == "theta,psi,theta_big,w,residual");

  r = run({"eval", "--m", "1", "--order", "3", "--beta", "0.1", "--theta-points", "1"});
  REQUIRE(r.code == 0);
  lines = lines_of(r.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[2].rfind(spheroidal::format_double(std::numbers::pi / 2) + ",", 0) == 0);

  // beta = 0: psi is proportional to (1 - cos) sin^{1/2} for m = 1.
  r = run({"eval", "--m", "1", "--order", "4", "--beta", "0", "--theta-points", "9"});
  REQUIRE(r.code == 0);
  lines = lines_of(r.out);
  double ratio0 = 0.0;
  for (std::size_t i = 2; i < lines.size(); ++i) {
    std::stringstream row(lines[i]);
    std::string cell;
    std::getline(row, cell, ',');
    const double t = std::stod(cell);
    std::getline(row, cell, ',');
    const double ratio = std::stod(cell) / ((1 - std::cos(t)) * std::sqrt(std::sin(t)));
    if (i == 2) ratio0 = ratio;
    CHECK(ratio == doctest::Approx(ratio0).epsilon(1e-13));
  }

  r = run({"eval", "--beta", "1.5", "--theta-points", "3"});
  CHECK(r.code == 0);
  CHECK(r.err.find("caution") != std::string::npos);

  r = run({"eval", "--beta", "0.2", "--theta-points", "3", "--format", "structured-text"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["rows"].size() == 3);
}

TEST_CASE("output is deterministic") {
  const std::vector<std::string> args = {"eval", "--m", "2", "--order", "6", "--beta", "0.3", "--theta-points", "50"};
  CHECK(run(args).out == run(args).out);
  const std::vector<std::string> v = {"verify", "--m", "1", "--order", "3", "--beta", "0.05"};
  CHECK(run(v).out == run(v).out);
}

TEST_CASE("verify") {
  Result r = run({"verify", "--m", "1", "--order", "8", "--beta", "0.05,0.1"});
  CHECK(r.code == 0);
  CHECK(lines_of(r.out).at(0) == "# m=1 N=8 passed=true");

  r = run({"verify", "--m", "1", "--order", "8", "--beta", "0", "--format", "structured-text"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["passed"] == true);
  for (const auto& rep : j["reports"]) {
    if (rep["check"] == "residual_slope") continue;
    CHECK(std::stod(rep["abs_gap"].get<std::string>()) <= 5e-5);
  }

  r = run({"verify", "--m", "1", "--order", "3", "--beta", "0.1", "--corrupt-coefficient"});
  CHECK(r.code == 3);
  CHECK(r.err.find("FAILED eigenvalue") != std::string::npos);

  // Tolerance overrides reach the reports: N = 2 misses E0 by about 1e-4 at beta = 0.1.
  CHECK(run({"verify", "--m", "1", "--order", "2", "--beta", "0.1"}).code == 3);
  CHECK(run({"verify", "--m", "1", "--order", "2", "--beta", "0.1", "--tol", "eigenvalue=1e-3"}).code == 0);
}
