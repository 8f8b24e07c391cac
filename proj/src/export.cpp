#include "lose/export.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace lose {

namespace {

std::string r_string(const std::vector<int>& r) {
  std::string s;
  for (int x : r) s += x > 0 ? '+' : '-';
  return s;
}

std::string decimal(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string probability_string(double p, const Dyadic& exact) {
  if (std::abs(exact.value() - p) <= 1e-12) return exact.str();
  return decimal(p);
}

nlohmann::json to_json(const AngleTable& table) {
  nlohmann::json j;
  j["width"] = table.width;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : table.rows)
    j["rows"].push_back({{"index", r.index}, {"angle", r.angle.literal()}, {"bits", r.bits}});
  return j;
}

nlohmann::json to_json(const ProtocolTrace& trace) {
  nlohmann::json j;
  j["input"] = trace.input_label;
  j["ebits"] = trace.ebits;
  j["audit"] = {{"alice_ops", trace.audit.alice_ops},
                {"bob_ops", trace.audit.bob_ops},
                {"nonlocal_ops", trace.audit.nonlocal_ops},
                {"measurements", trace.audit.measurements}};
  j["branches"] = nlohmann::json::array();
  for (const auto& b : trace.branches) {
    nlohmann::json jb;
    jb["r"] = r_string(b.r);
    jb["halt_step"] = b.halt_step;
    jb["probability"] = probability_string(b.probability, b.exact);
    jb["tables"] = nlohmann::json::array();
    for (const auto& t : b.tables) jb["tables"].push_back(to_json(t));
    jb["leaves"] = nlohmann::json::array();
    for (const auto& l : b.leaves) {
      nlohmann::json populations = nlohmann::json::array();
      for (Eigen::Index i = 0; i < l.populations.size(); ++i) populations.push_back(decimal(l.populations[i]));
      jb["leaves"].push_back({{"alice_record", l.alice_record},
                              {"bob_record", l.bob_record},
                              {"a_bits", l.alice_ancilla_bits},
                              {"kept_bits", l.kept_bits},
                              {"probability", probability_string(l.probability, l.exact)},
                              {"overlap", decimal(l.overlap)},
                              {"populations", populations},
                              {"decoded", l.decoded}});
    }
    j["branches"].push_back(std::move(jb));
  }
  return j;
}

nlohmann::json to_json(const SteeringRun& run) {
  nlohmann::json j;
  j["set"] = run.set_name;
  j["ebits"] = run.ebits;
  j["kept"] = run.kept;
  j["alice_tables"] = nlohmann::json::array();
  for (const auto& t : run.alice_tables) j["alice_tables"].push_back(to_json(t));
  j["traces"] = nlohmann::json::array();
  for (const auto& t : run.traces) j["traces"].push_back(to_json(t));
  j["decode_entries"] = run.decode.size();
  return j;
}

nlohmann::json to_json(const DSteerResult& result) {
  nlohmann::json j;
  j["ebits"] = result.ebits;
  j["traces"] = nlohmann::json::array();
  for (const auto& t : result.traces) j["traces"].push_back(to_json(t));
  j["decode_entries"] = result.decode.size();
  return j;
}

nlohmann::json to_json(const ApproxResult& r) {
  return {{"alpha", decimal(r.alpha)},
          {"epsilon", decimal(r.epsilon)},
          {"msb_position", r.msb},
          {"truncated", r.truncated.literal()},
          {"truncated_bits", r.truncated.bit_string()},
          {"ebits_used", r.ebits_used},
          {"beta", decimal(r.beta)},
          {"p_e_formula", decimal(r.p_e_formula)},
          {"p_e_simulated", decimal(r.p_e_simulated)},
          {"residual_verified", r.residual_verified}};
}

std::string angle_tables_csv(const std::vector<DyadicAngle>& angles, int k) {
  std::ostringstream out;
  out << "iteration,state_index,bit_string,r_value,probability\n";
  AngleTable active = build_table(angles);
  for (int t = 1; t <= k + 1; ++t) {
    const std::string p = Dyadic::make(1, static_cast<unsigned>(t - 1)).str();
    for (const auto& row : active.rows)
      out << t << ',' << row.index << ',' << row.bits << ',' << (t == 1 ? 0 : -1) << ',' << p << '\n';
    if (t > 1)
      for (const auto& row : active.rows) out << t << ',' << row.index << ",0,1," << p << '\n';
    active = double_table(active);
  }
  return out.str();
}

std::string to_text(const SteeringRun& run) {
  std::ostringstream out;
  out << "set " << run.set_name << ", ebits " << run.ebits << ", decode entries " << run.decode.size() << '\n';
  for (const auto& tr : run.traces) {
    out << "input " << tr.input_label << '\n';
    for (const auto& b : tr.branches) {
      out << "  r=" << (b.r.empty() ? std::string("(none)") : r_string(b.r)) << " halt " << b.halt_step
          << " p=" << probability_string(b.probability, b.exact) << '\n';
      for (const auto& l : b.leaves)
        out << "    a=" << l.alice_ancilla_bits << " kept=" << l.kept_bits << " p="
            << probability_string(l.probability, l.exact) << " -> " << l.decoded << '\n';
    }
  }
  return out.str();
}

}  // namespace lose
