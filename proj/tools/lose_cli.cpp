// lose-cli: run steering experiments, print traces and tables, and run the
// verification suite.
//
// Exit status: 0 all-pass, 1 check or decode failure, 2 usage error.

#include "lose/export.hpp"
#include "lose/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace lose;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string angles;
  std::optional<int> k;
  std::optional<double> epsilon;
  std::string mode = "enumerate";
  std::size_t n = 10000;
  std::optional<std::uint64_t> seed;
  std::string format = "text";
  std::string out;
};

std::vector<DyadicAngle> dyadic_angles(const std::string& text) {
  if (text.empty()) throw UsageError("--angles is required");
  std::vector<AngleLiteral> parsed;
  try {
    parsed = parse_angle_list(text);
  } catch (const std::exception& e) {
    throw UsageError(std::string("cannot parse --angles: ") + e.what());
  }
  std::vector<DyadicAngle> out;
  for (const auto& a : parsed) {
    if (!std::holds_alternative<DyadicAngle>(a))
      throw UsageError("exact steering needs dyadic angles such as 3/16pi; decimals are only accepted by approx");
    out.push_back(std::get<DyadicAngle>(a));
  }
  return out;
}

std::string decimal(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string ket_string(const PureState& s) {
  std::string out;
  for (std::size_t i = 0; i < s.dimension(); ++i) {
    const cplx a = s.amplitude(i);
    if (std::abs(a) < 1e-12) continue;
    char buf[96];
    if (std::abs(a.imag()) < 1e-12)
      std::snprintf(buf, sizeof buf, "%+.4f", a.real());
    else if (std::abs(a.real()) < 1e-12)
      std::snprintf(buf, sizeof buf, "%+.4fi", a.imag());
    else
      std::snprintf(buf, sizeof buf, "(%+.4f%+.4fi)", a.real(), a.imag());
    std::string bits;
    for (std::size_t q = s.reg().size(); q-- > 0;) bits += ((i >> q) & 1U) ? '1' : '0';
    out += std::string(out.empty() ? "" : " ") + buf + "|" + bits + ">";
  }
  return out;
}

std::string table_text(const std::vector<AngleTable>& tables) {
  std::ostringstream o;
  for (std::size_t t = 0; t < tables.size(); ++t) {
    o << "iteration " << t + 1 << '\n';
    for (const auto& row : tables[t].rows) o << "  " << row.index << "  " << row.bits << "  " << row.angle.literal() << '\n';
  }
  return o.str();
}

void require_format(const RunConfig& c, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed)
    if (c.format == f) return;
  throw UsageError("--format " + c.format + " is not available for this command");
}

// ------------------------------------------------------------ commands

int cmd_steer(const RunConfig& c, std::ostream& out) {
  const auto angles = dyadic_angles(c.angles);
  if (c.k && *c.k < 0) throw UsageError("--k must be non-negative");
  const StateSet set = build_A(angles);
  if (c.mode == "sample") {
    if (!c.seed) throw UsageError("sample mode requires --seed");
    require_format(c, {"text", "json"});
    const SteeringRun run = run_iterative(set, angles, c.k);
    const SampleSummary s = sample_runs(run, c.n, *c.seed);
    nlohmann::json freq = nlohmann::json::array();
    for (std::size_t t = 0; t < s.halt_counts.size(); ++t)
      freq.push_back(static_cast<double>(s.halt_counts[t]) / static_cast<double>(s.samples));
    if (c.format == "json") {
      out << nlohmann::json{{"samples", s.samples}, {"seed", *c.seed},       {"halt_counts", s.halt_counts},
                            {"halt_frequency", freq}, {"decoded_correctly", s.decoded_correctly}}
                 .dump(2)
          << '\n';
    } else {
      out << "samples " << s.samples << ", seed " << *c.seed << '\n';
      for (std::size_t t = 0; t < s.halt_counts.size(); ++t)
        out << "  halt at step " << t << ": " << s.halt_counts[t] << " ("
            << decimal(freq[t].get<double>(), 4) << ")\n";
      out << "decoded correctly: " << s.decoded_correctly << '\n';
    }
    return s.decoded_correctly == s.samples ? kOk : kFailure;
  }
  if (c.mode != "enumerate") throw UsageError("--mode must be enumerate or sample");
  const SteeringRun run = run_iterative(set, angles, c.k);
  if (c.format == "json") {
    out << to_json(run).dump(2) << '\n';
  } else if (c.format == "csv") {
    out << angle_tables_csv(angles, run.ebits);
  } else {
    require_format(c, {"text"});
    out << "bit tables\n" << table_text(run.alice_tables) << to_text(run);
  }
  return kOk;
}

int cmd_measure_i(const RunConfig& c, std::ostream& out) {
  const auto angles = dyadic_angles(c.angles);
  const unsigned i = measure_I(angles);
  const AngleTable t = build_table(angles);
  if (c.format == "json") {
    out << nlohmann::json{{"I", i}, {"table", to_json(t)}}.dump(2) << '\n';
  } else {
    require_format(c, {"text"});
    out << "I = " << i << '\n' << table_text({t});
  }
  return kOk;
}

int cmd_approx(const RunConfig& c, std::ostream& out) {
  if (!c.epsilon) throw UsageError("approx requires --epsilon");
  std::vector<AngleLiteral> parsed;
  try {
    parsed = parse_angle_list(c.angles);
  } catch (const std::exception& e) {
    throw UsageError(std::string("cannot parse --angles: ") + e.what());
  }
  if (parsed.size() != 1) throw UsageError("approx takes exactly one angle");
  const double alpha = std::holds_alternative<double>(parsed[0]) ? std::get<double>(parsed[0])
                                                                 : std::get<DyadicAngle>(parsed[0]).radians();
  ApproxResult r;
  try {
    r = approximate_steer(alpha, *c.epsilon);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::optional<double> sampled;
  if (c.mode == "sample") {
    if (!c.seed) throw UsageError("sample mode requires --seed");
    sampled = sample_discrimination_error(r, c.n, *c.seed);
  } else if (c.mode != "enumerate") {
    throw UsageError("--mode must be enumerate or sample");
  }
  if (c.format == "json") {
    nlohmann::json j = to_json(r);
    if (sampled) j["p_e_sampled"] = *sampled, j["samples"] = c.n, j["seed"] = *c.seed;
    out << j.dump(2) << '\n';
  } else {
    require_format(c, {"text"});
    out << "alpha " << decimal(alpha, 12) << ", epsilon " << decimal(*c.epsilon, 12) << '\n'
        << "truncated " << r.truncated.literal() << ", ebits_used " << r.ebits_used << '\n'
        << "beta " << decimal(r.beta, 12) << '\n'
        << "p_e formula " << decimal(r.p_e_formula, 12) << ", simulated " << decimal(r.p_e_simulated, 12) << '\n';
    if (sampled) out << "p_e sampled " << decimal(*sampled, 6) << " (N=" << c.n << ", seed " << *c.seed << ")\n";
    out << "residual set verified: " << (r.residual_verified ? "yes" : "no") << '\n';
  }
  return r.residual_verified && r.p_e_formula <= *c.epsilon ? kOk : kFailure;
}

int cmd_dset(const RunConfig& c, std::ostream& out) {
  const auto angles = dyadic_angles(c.angles);
  if (angles.size() != 1) throw UsageError("dset takes exactly one angle");
  const DyadicAngle alpha = angles.front();
  const auto blocks = d_stage_one(alpha.radians());
  DSteerResult res;
  try {
    res = steer_D(alpha);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (c.format == "json") {
    nlohmann::json stage = nlohmann::json::array();
    for (const auto& b : blocks)
      stage.push_back({{"member", b.member}, {"x_a", b.x_a}, {"z_b", b.z_b}, {"probability", b.probability},
                       {"state", ket_string(b.state)}});
    nlohmann::json j = to_json(res);
    j["stage_one"] = stage;
    out << j.dump(2) << '\n';
  } else {
    require_format(c, {"text"});
    out << "first stage, alpha = " << alpha.literal() << " (kets |AB>)\n";
    for (const auto& b : blocks)
      out << "  " << b.member << "  x_a=" << (b.x_a > 0 ? "+1" : "-1") << " z_b=" << (b.z_b > 0 ? "+1" : "-1")
          << "  p=" << decimal(b.probability, 4) << "  " << ket_string(b.state) << '\n';
    out << "ebits " << res.ebits << ", decode entries " << res.decode.size() << '\n';
    for (const auto& [key, label] : res.decode) out << "  " << key << " -> " << label << '\n';
  }
  return kOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  const auto reports = run_verify_suite(c.seed.value_or(1));
  bool all = true;
  for (const auto& r : reports) all = all && r.passed;
  if (c.format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : reports) j.push_back(to_json(r));
    out << j.dump(2) << '\n';
  } else {
    require_format(c, {"text"});
    std::size_t width = 0;
    for (const auto& r : reports) width = std::max(width, r.name.size());
    for (const auto& r : reports) {
      out << (r.passed ? "PASS  " : "FAIL  ") << r.name << std::string(width - r.name.size() + 2, ' ') << r.summary
          << '\n';
    }
    std::size_t passed = 0;
    for (const auto& r : reports) passed += r.passed;
    out << passed << "/" << reports.size() << " checks pass\n";
  }
  return all ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steering experiments and verification for locally indistinguishable product sets"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::optional<int> k;
  std::optional<double> eps;
  std::optional<std::uint64_t> seed;

  auto common = [&](CLI::App* sc) {
    sc->add_option("--out", cfg.out, "Write output to this file instead of stdout");
    sc->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
    sc->add_option("--seed", seed, "Seed for sampling and randomized checks");
  };
  auto* steer = app.add_subcommand("steer", "Run the iterative steering protocol on A[angles]");
  steer->add_option("--angles", cfg.angles, "Comma-separated dyadic angles, e.g. \"3/16pi,1/4pi\"")->required();
  steer->add_option("--k", k, "Ebit budget (defaults to I of the angles)");
  steer->add_option("--mode", cfg.mode, "enumerate or sample")->check(CLI::IsMember({"enumerate", "sample"}));
  steer->add_option("--n", cfg.n, "Number of samples in sample mode")->check(CLI::PositiveNumber);
  common(steer);

  auto* mi = app.add_subcommand("measure-i", "Print I of the angles and the padded bit table");
  mi->add_option("--angles", cfg.angles, "Comma-separated dyadic angles")->required();
  common(mi);

  auto* approx = app.add_subcommand("approx", "Approximate steering of a single angle");
  approx->add_option("--angles", cfg.angles, "One angle: dyadic literal or radians")->required();
  approx->add_option("--epsilon", eps, "Target error in (0, 1)")->required();
  approx->add_option("--mode", cfg.mode, "enumerate or sample")->check(CLI::IsMember({"enumerate", "sample"}));
  approx->add_option("--n", cfg.n, "Number of samples in sample mode")->check(CLI::PositiveNumber);
  common(approx);

  auto* dset = app.add_subcommand("dset", "Steer the entangled set D[alpha]");
  dset->add_option("--angles", cfg.angles, "One dyadic angle")->required();
  common(dset);

  auto* verify = app.add_subcommand("verify", "Run the verification and stator suites");
  common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  cfg.k = k;
  cfg.epsilon = eps;
  cfg.seed = seed;

  std::ostringstream buffer;
  int status = kOk;
  try {
    if (steer->parsed()) status = cmd_steer(cfg, buffer);
    else if (mi->parsed()) status = cmd_measure_i(cfg, buffer);
    else if (approx->parsed()) status = cmd_approx(cfg, buffer);
    else if (dset->parsed()) status = cmd_dset(cfg, buffer);
    else status = cmd_verify(cfg, buffer);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DecodingFailure& e) {
    std::cerr << "decode failure: " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }

  if (cfg.out.empty()) {
    std::cout << buffer.str();
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) {
      std::cerr << "cannot open " << cfg.out << " for writing\n";
      return kUsage;
    }
    f << buffer.str();
  }
  return status;
}
