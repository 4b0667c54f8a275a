#include <string>

#include "doctest.h"
#include "helpers.hpp"
#include "oneshot/io.hpp"

using namespace oneshot;
using nlohmann::json;

TEST_CASE("joint json round trip") {
  RngStream rng(71, 0);
  const JointPmf joint = testutil::random_joint(rng, 3, 2);
  const JointPmf back = io::joint_from_json(io::joint_to_json(joint));
  REQUIRE(back.arity() == joint.arity());
  CHECK(back.axis(0).name == "X");
  CHECK(back.axis(1).alphabet == joint.axis(1).alphabet);
  for (std::size_t i = 0; i < joint.size(); ++i) CHECK(back.mass(i) == joint.mass(i));
}

TEST_CASE("channel json round trip") {
  const Channel ch({Axis{"X", Alphabet::binary()}, Axis{"Y", Alphabet::binary()}},
                   Axis{"Z", Alphabet({"0", "1", "2"})},
                   {1, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 1});
  const Channel back = io::channel_from_json(io::channel_to_json(ch));
  CHECK(back.inputs().size() == 2);
  CHECK(back.output().alphabet.size() == 3);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t z = 0; z < 3; ++z) CHECK(back.prob(r, z) == ch.prob(r, z));
}

TEST_CASE("errors name the offending field") {
  const auto message_of = [](const json& j) {
    try {
      io::joint_from_json(j);
    } catch (const DomainError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message_of(json{{"mass", {1.0}}}).find("axes") != std::string::npos);
  CHECK(message_of(json{{"axes", {{{"name", "X"}}}}, {"mass", {1.0}}}).find("symbols") !=
        std::string::npos);
  CHECK(message_of(json{{"axes", {{{"name", "X"}, {"symbols", {"0", "1"}}}}}})
            .find("mass") != std::string::npos);

  const auto channel_message = [](const json& j) {
    try {
      io::channel_from_json(j);
    } catch (const DomainError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  const std::string no_output = channel_message(json{{"inputs", json::array()}});
  CHECK((no_output.find("output") != std::string::npos ||
         no_output.find("input") != std::string::npos));
  const json bad_row = {{"inputs", {{{"name", "X"}, {"symbols", {"0", "1"}}}}},
                        {"output", {{"name", "Z"}, {"symbols", {"0", "1"}}}},
                        {"rows", {{0.5, 0.5}, {1.0}}}};
  CHECK(channel_message(bad_row).find("rows[1]") != std::string::npos);
}

TEST_CASE("typical set export shape") {
  const TypicalSet set(testutil::correlated_bits(0.0), 0.0);
  const json j = io::typical_set_to_json(set);
  CHECK(j["tail"].get<double>() == doctest::Approx(0.0));
  REQUIRE(j["members"].size() == 2);
  CHECK(j["members"][0][0].get<std::string>() == "0");
  CHECK(j["bounds"].contains("XY"));
  CHECK(j["bounds"].contains("X"));
}

TEST_CASE("report serialization") {
  const SimulationReport r = make_draw_report(1000, 10, 0.05, 0.1);
  const json j = io::report_to_json(r);
  CHECK(j["trials"].get<std::uint64_t>() == 1000);
  CHECK(j["verdict"].get<std::string>() == "pass");
  const std::string csv = report_csv_row(r);
  CHECK(csv.find("1000,10,") == 0);
  CHECK(csv.find("pass") != std::string::npos);
}
