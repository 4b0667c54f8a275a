#pragma once

#include <string>

#include "json.hpp"
#include "oneshot/pmf.hpp"
#include "oneshot/report.hpp"
#include "oneshot/typical.hpp"

namespace oneshot::io {

// {"axes":[{"name":"X","symbols":["0","1"]},...],"mass":[...]} with mass in
// row-major order, last axis fastest. Errors name the offending field.
JointPmf joint_from_json(const nlohmann::json& j);
nlohmann::json joint_to_json(const JointPmf& p);
JointPmf load_joint(const std::string& path);

// {"inputs":[axes...],"output":{...},"rows":[[...],...]} with rows in
// row-major input order.
Channel channel_from_json(const nlohmann::json& j);
nlohmann::json channel_to_json(const Channel& ch);
Channel load_channel(const std::string& path);

nlohmann::json typical_set_to_json(const TypicalSet& set);
nlohmann::json xi_to_json(const XiBounds& b);
nlohmann::json report_to_json(const SimulationReport& r);

}  // namespace oneshot::io
