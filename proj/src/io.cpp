#include "oneshot/io.hpp"

#include <fstream>

namespace oneshot::io {

using nlohmann::json;

namespace {

Alphabet alphabet_from_json(const json& j, const std::string& where) {
  if (!j.contains("symbols") || !j["symbols"].is_array())
    throw DomainError(where + ": missing or non-array field 'symbols'");
  std::vector<std::string> symbols;
  for (const auto& s : j["symbols"]) {
    if (!s.is_string()) throw DomainError(where + ".symbols: entries must be strings");
    symbols.push_back(s.get<std::string>());
  }
  return Alphabet(std::move(symbols));
}

Axis axis_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw DomainError(where + ": expected an object");
  if (!j.contains("name") || !j["name"].is_string())
    throw DomainError(where + ": missing or non-string field 'name'");
  return Axis{j["name"].get<std::string>(), alphabet_from_json(j, where)};
}

std::vector<double> mass_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw DomainError(where + ": expected an array of numbers");
  std::vector<double> mass;
  mass.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw DomainError(where + ": entries must be numbers");
    mass.push_back(v.get<double>());
  }
  return mass;
}

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw DomainError("malformed JSON in '" + path + "': " + e.what());
  }
  return j;
}

}  // namespace

JointPmf joint_from_json(const json& j) {
  if (!j.is_object()) throw DomainError("distribution file: expected a JSON object");
  if (!j.contains("axes") || !j["axes"].is_array())
    throw DomainError("distribution file: missing or non-array field 'axes'");
  std::vector<Axis> axes;
  std::size_t i = 0;
  for (const auto& a : j["axes"]) axes.push_back(axis_from_json(a, "axes[" + std::to_string(i++) + "]"));
  if (!j.contains("mass")) throw DomainError("distribution file: missing field 'mass'");
  return JointPmf(std::move(axes), mass_from_json(j["mass"], "mass"));
}

json joint_to_json(const JointPmf& p) {
  json axes = json::array();
  for (const Axis& a : p.axes()) axes.push_back({{"name", a.name}, {"symbols", a.alphabet.symbols()}});
  return json{{"axes", axes}, {"mass", p.masses()}};
}

JointPmf load_joint(const std::string& path) { return joint_from_json(load_file(path)); }

Channel channel_from_json(const json& j) {
  if (!j.is_object()) throw DomainError("channel file: expected a JSON object");
  if (!j.contains("inputs") || !j["inputs"].is_array())
    throw DomainError("channel file: missing or non-array field 'inputs'");
  std::vector<Axis> inputs;
  std::size_t i = 0;
  for (const auto& a : j["inputs"])
    inputs.push_back(axis_from_json(a, "inputs[" + std::to_string(i++) + "]"));
  if (!j.contains("output")) throw DomainError("channel file: missing field 'output'");
  Axis output = axis_from_json(j["output"], "output");
  if (!j.contains("rows") || !j["rows"].is_array())
    throw DomainError("channel file: missing or non-array field 'rows'");

  std::vector<double> rows;
  std::size_t r = 0;
  for (const auto& row : j["rows"]) {
    auto vals = mass_from_json(row, "rows[" + std::to_string(r++) + "]");
    if (vals.size() != output.alphabet.size())
      throw DomainError("rows[" + std::to_string(r - 1) + "]: expected " +
                        std::to_string(output.alphabet.size()) + " entries");
    rows.insert(rows.end(), vals.begin(), vals.end());
  }
  return Channel(std::move(inputs), std::move(output), std::move(rows));
}

json channel_to_json(const Channel& ch) {
  json inputs = json::array();
  for (const Axis& a : ch.inputs()) inputs.push_back({{"name", a.name}, {"symbols", a.alphabet.symbols()}});
  json rows = json::array();
  for (std::size_t r = 0; r < ch.input_size(); ++r) rows.push_back(ch.row(r).masses());
  return json{{"inputs", inputs},
              {"output", {{"name", ch.output().name}, {"symbols", ch.output().alphabet.symbols()}}},
              {"rows", rows}};
}

Channel load_channel(const std::string& path) { return channel_from_json(load_file(path)); }

json xi_to_json(const XiBounds& b) {
  return json{{"xi_min", b.xi_min},         {"xi_max", b.xi_max},
              {"delta", b.delta},           {"entropy", b.entropy},
              {"log_alphabet", b.log_alphabet}, {"hinf_smooth", b.hinf_smooth},
              {"hneginf_smooth", b.hneginf_smooth}};
}

json typical_set_to_json(const TypicalSet& set) {
  json members = json::array();
  for (std::size_t flat : set.members()) members.push_back(set.source().labels_of(flat));
  json bounds = json::object();
  for (const auto& [key, b] : set.bounds()) bounds[key] = xi_to_json(b);
  return json{{"delta", set.delta()}, {"tail", set.tail()}, {"members", members}, {"bounds", bounds}};
}

json report_to_json(const SimulationReport& r) {
  return json{{"trials", r.trials},
              {"failures", r.failures},
              {"estimate", r.point_estimate},
              {"std_error", r.std_error},
              {"wilson_95_upper", r.wilson_95_upper},
              {"analytic_bound", r.analytic_bound},
              {"target_eps", r.target_epsilon},
              {"verdict", r.pass ? "pass" : "fail"},
              {"mode", r.mode == SimMode::per_draw ? "per_draw" : "exact_per_seed"}};
}

}  // namespace oneshot::io
