#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "revtp/cli.hpp"
#include "revtp/fixtures.hpp"
#include "revtp/io.hpp"
#include "support/helpers.hpp"

using namespace revtp;
using namespace testing;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "revtp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return (default_fixture_dir() / name).string(); }

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   (name + "-" + std::to_string(std::random_device{}()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("reduce prints the objective direction") {
    const Run r = run({"reduce", fixture("table3.json")});
    CHECK(r.code == 0);
    CHECK(r.out.find("unlv: (-0.22486, 0.974391)") != std::string::npos);
    const Run j = run({"reduce", fixture("table3.json"), "--json"});
    const Json body = Json::parse(j.out);
    CHECK(max_diff(vector_from_json(body["unlv"]), vec({-0.225, 0.974})) < 5e-4);
    CHECK(body["constraints"]["rhs"].size() == 6);
  }

  TEST_CASE("solve returns the cheapest plan") {
    const Json body = Json::parse(run({"--json", "solve", fixture("table3.json")}).out);
    CHECK(matrix_from_json(body["plan"]) == mat({{0, 10, 0}, {5, 5, 15}}));
    CHECK(body["cost"] == 250.0);
  }

  TEST_CASE("classify and polygon") {
    const Run c = run({"classify", "--dms", R"({"supply":[5,3],"demand":[4,2,2]})", "--json"});
    REQUIRE(c.code == 0);
    CHECK(Json::parse(c.out)["active_constraints"] == Json::parse("[2,3,4,5,6]"));
    const Run p = run({"polygon", "2", "3", "1", "--json"});
    REQUIRE(p.code == 0);
    const Dms d = dms_from_json(Json::parse(p.out));
    CHECK(d.supply()[0] == doctest::Approx(2 + std::sqrt(2.0)));
  }

  TEST_CASE("validation errors exit with code 2 and the error name") {
    const Run r = run({"classify", "--dms", R"({"supply":[5,3],"demand":[4,2,3]})"});
    CHECK(r.code == 2);
    CHECK(r.err.rfind("BalanceError:", 0) == 0);
    CHECK(run({"polygon", "3", "3", "1"}).err.rfind("UnsupportedDimension", 0) == 0);
    CHECK(run({"classify", "--dms", "{"}).err.rfind("ParseError", 0) == 0);
    CHECK(run({"frobnicate"}).code != 0);
  }

  TEST_CASE("estimate reads an observation log") {
    const auto dir = fresh_dir("revtp-cli");
    const auto path = dir / "log.csv";
    std::ofstream(path) << "step,a1,a2,b1,b2,b3,x22,x23\n1,10,25,5,15,15,5,15\n2,5,3,4,2,2,0,2\n";
    const Run r = run({"estimate", path.string(), "--json"});
    REQUIRE(r.code == 0);
    const Json trace = Json::parse(r.out);
    REQUIRE(trace.size() == 2);
    CHECK(max_diff(vector_from_json(trace[0]["e"]), vec({-0.924, 0.383})) < 5e-4);
    const Run text = run({"estimate", path.string(), "--window", "1"});
    CHECK(text.out.find("2,4-5,") != std::string::npos);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("simulate the study") {
    const auto dir = fresh_dir("revtp-sim");
    const Run r = run({"simulate", "--fixture", "--json", "--out", dir.string()});
    REQUIRE(r.code == 0);
    const Json body = Json::parse(r.out);
    CHECK(body["steps"] == 25);
    CHECK(body["match_rate"] == 1.0);
    CHECK(std::filesystem::exists(dir / "result.csv"));
    CHECK(std::filesystem::exists(dir / "result.json"));

    const Run g = run({"simulate", "--truth", "1,2", "--steps", "10", "--seed", "5"});
    CHECK(g.code == 0);
    CHECK(g.out.find("steps: 10") != std::string::npos);
    CHECK(run({"simulate"}).code == 2);
    std::filesystem::remove_all(dir);
  }
}
