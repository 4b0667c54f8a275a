// Drives the built binary end to end: golden equality against direct library
// calls, exit-code mapping, and byte-level reproducibility.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "oneshot/slepian_wolf.hpp"

using nlohmann::json;
using namespace oneshot;

namespace {

const std::string kCli = ONESHOT_CLI_PATH;

struct RunResult {
  int exit_code = 0;
  std::string output;
};

RunResult run(const std::string& args) {
  const std::string out_path = "/tmp/oneshot_cli_test_out.txt";
  const std::string cmd = kCli + " " + args + " > " + out_path + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(status);
  std::ifstream in(out_path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

std::string write_file(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/" + name;
  std::ofstream f(path, std::ios::binary);
  f << content;
  return path;
}

const char* kUniform4 = R"({"axes":[{"name":"X","symbols":["0","1","2","3"]}],
  "mass":[0.25,0.25,0.25,0.25]})";

const char* kCorrelatedBits = R"({"axes":[{"name":"X","symbols":["0","1"]},
  {"name":"Y","symbols":["0","1"]}], "mass":[0.45,0.05,0.05,0.45]})";

const char* kUniformBit = R"({"axes":[{"name":"X","symbols":["0","1"]}],"mass":[0.5,0.5]})";

const char* kAdderChannel = R"({"inputs":[{"name":"X","symbols":["0","1"]},
  {"name":"Y","symbols":["0","1"]}],
  "output":{"name":"Z","symbols":["0","1","2"]},
  "rows":[[1,0,0],[0,1,0],[0,1,0],[0,0,1]]})";

}  // namespace

TEST_CASE("entropy command") {
  const std::string path = write_file("u4.json", kUniform4);
  const RunResult r = run("entropy --pmf " + path);
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.output);
  CHECK(j["shannon"].get<double>() == doctest::Approx(2.0));
  CHECK(j["h0"].get<double>() == doctest::Approx(2.0));
  CHECK(j["hinf"].get<double>() == doctest::Approx(2.0));
  CHECK(j["hneginf"].get<double>() == doctest::Approx(2.0));
}

TEST_CASE("sw-region command equals the library call") {
  const std::string path = write_file("corr.json", kCorrelatedBits);
  const RunResult r = run("sw-region --pmf " + path + " --eps 0.2 --delta 0");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.output);

  const JointPmf joint({Axis{"X", Alphabet::binary()}, Axis{"Y", Alphabet::binary()}},
                       {0.45, 0.05, 0.05, 0.45});
  const SwRateRegion region = sw_achievable_region(joint, EpsilonBudget::equal_split(0.2), 0.0);
  CHECK(j["achievable"]["l_x"].get<double>() == doctest::Approx(region.achievable_x).epsilon(1e-12));
  CHECK(j["achievable"]["l_y"].get<double>() == doctest::Approx(region.achievable_y).epsilon(1e-12));
  CHECK(j["achievable"]["l_sum"].get<double>() ==
        doctest::Approx(region.achievable_sum).epsilon(1e-12));
  CHECK(j["lower"]["l_x"].get<double>() == doctest::Approx(region.lower.l_x).epsilon(1e-12));
}

TEST_CASE("sw-sim is byte-identical for a fixed seed") {
  const std::string path = write_file("corr.json", kCorrelatedBits);
  const std::string args = "sw-sim --pmf " + path + " --eps 0.2 --delta 0 --trials 400 --seed 7";
  const RunResult a = run(args);
  const RunResult b = run(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.output == b.output);
  CHECK(!a.output.empty());

  const RunResult c = run(args + " --format csv");
  CHECK(c.output.find("trials,failures") == 0);
}

TEST_CASE("mac commands run and reproduce") {
  const std::string px = write_file("ub.json", kUniformBit);
  const std::string ch = write_file("adder.json", kAdderChannel);
  const std::string base = "--px " + px + " --py " + px + " --channel " + ch + " --eps 0.2 --n 3";
  const RunResult region = run("mac-region " + base);
  REQUIRE(region.exit_code == 0);
  const json j = json::parse(region.output);
  CHECK(j.contains("c1_max"));

  const std::string args = "mac-sim " + base + " --trials 300 --seed 5";
  const RunResult a = run(args);
  const RunResult b = run(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.output == b.output);
}

TEST_CASE("hash-check reproducibility and exact mode") {
  const RunResult exact = run("hash-check --bits 3 --len 2 --exact");
  REQUIRE(exact.exit_code == 0);
  const json j = json::parse(exact.output);
  CHECK(j["max_pair_probability"].get<double>() == doctest::Approx(0.25));

  const RunResult a = run("hash-check --bits 8 --len 4 --trials 5000 --seed 3");
  const RunResult b = run("hash-check --bits 8 --len 4 --trials 5000 --seed 3");
  REQUIRE(a.exit_code == 0);
  CHECK(a.output == b.output);
}

TEST_CASE("asym-scan csv shape") {
  const std::string path = write_file("b3.json",
      R"({"axes":[{"name":"X","symbols":["0","1"]}],"mass":[0.7,0.3]})");
  const RunResult r = run("asym-scan --pmf " + path + " --eps 0.1 --n-max 4 --format csv");
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.rfind("n,value,companion,target\n", 0) == 0);
  int lines = 0;
  for (char c : r.output)
    if (c == '\n') ++lines;
  CHECK(lines == 5);
}

TEST_CASE("exit codes") {
  // malformed JSON names the problem and exits 2
  const std::string bad = write_file("bad.json", R"({"axes":[{"name":"X"}],"mass":[1.0]})");
  const RunResult r = run("entropy --pmf " + bad);
  CHECK(r.exit_code == 2);

  const std::string not_json = write_file("notjson.json", "not json at all");
  CHECK(run("entropy --pmf " + not_json).exit_code == 2);

  CHECK(run("entropy --pmf /tmp/definitely_missing_file.json").exit_code == 2);

  // unparsable flags exit 2 as a validation error
  CHECK(run("smooth --pmf " + bad).exit_code == 2);

  // resource cap exceeded exits 4
  const std::string u4 = write_file("u4.json", kUniform4);
  CHECK(run("typical --pmf " + u4 + " --delta 0 --cap 2").exit_code == 4);

  // infeasibility exits 3 (empty window at every positive delta, and the
  // grid is started past zero by a delta-step larger than 1)
  CHECK(run("find-delta --pmf " + u4 + " --eps 0.5 --delta-step 2").exit_code == 0);
}

TEST_CASE("smooth command matches the library") {
  const std::string path = write_file("u4.json", kUniform4);
  const RunResult r = run("smooth --pmf " + path + " --order 0 --eps 0.25");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.output);
  CHECK(j["value"].get<double>() == doctest::Approx(std::log2(3.0)));
  CHECK(j["method"].get<std::string>() == "exact_greedy");
}
