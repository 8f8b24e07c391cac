// Serialisation of protocol traces: a JSON document per run and a CSV of
// the per-iteration angle tables.
#pragma once

#include "lose/protocol.hpp"
#include "lose/variants.hpp"

#include "json.hpp"

#include <string>

namespace lose {

// Exact "p/2^t" form when `exact` reproduces `p`, otherwise a decimal.
std::string probability_string(double p, const Dyadic& exact);

nlohmann::json to_json(const AngleTable& table);
nlohmann::json to_json(const ProtocolTrace& trace);
nlohmann::json to_json(const SteeringRun& run);
nlohmann::json to_json(const DSteerResult& result);
nlohmann::json to_json(const ApproxResult& result);

// Columns: iteration,state_index,bit_string,r_value,probability. Iteration t
// holds the table Bob works with before step t (t = 1..k+1); r_value is 0 at
// t = 1, -1 on the still-active chain and +1 on the all-zero table reached by
// halting at step t-1.
std::string angle_tables_csv(const std::vector<DyadicAngle>& angles, int k);

// Human-readable summary of a run, one branch per line.
std::string to_text(const SteeringRun& run);

}  // namespace lose
