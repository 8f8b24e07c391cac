#include "lose/sets.hpp"

#include <cmath>
#include <stdexcept>

namespace lose {
namespace {

// Rotates the global phase so the first non-negligible amplitude is real and positive.
Amplitudes fix_phase(Amplitudes amps) {
  for (const auto& a : amps) {
    if (std::abs(a) > 1e-12) {
      const cplx ph = std::conj(a) / std::abs(a);
      for (auto& x : amps) x *= ph;
      break;
    }
  }
  return amps;
}

unsigned control_qubits(std::size_t n_angles) {
  unsigned q = 0;
  while ((std::size_t{1} << q) < n_angles + 1) ++q;
  return q;
}

Register control_register(std::size_t n_angles) {
  std::vector<Qubit> qs;
  for (const auto& l : control_labels(n_angles)) qs.push_back({l, Party::alice});
  qs.push_back({"B", Party::bob});
  return Register(std::move(qs));
}

// |value>_control (x) v_B
Amplitudes product_amplitudes(std::size_t dim_control, std::size_t value, const Eigen::Vector2cd& v) {
  Amplitudes amps(2 * dim_control, cplx{});
  amps[2 * value] = v[0];
  amps[2 * value + 1] = v[1];
  return amps;
}

StateSet build_A_impl(const std::vector<double>& radians, std::vector<std::string> literals,
                      const std::string& name) {
  if (radians.empty()) throw std::invalid_argument("build_A: need at least one angle");
  const Register reg = control_register(radians.size());
  const std::size_t dc = reg.dimension() / 2;
  std::vector<Member> members;
  members.push_back({"00", PureState(reg, product_amplitudes(dc, 0, plus_state(0.0)))});
  members.push_back({"01", PureState(reg, fix_phase(product_amplitudes(dc, 0, Eigen::Vector2cd(0, 1))))});
  for (std::size_t j = 1; j <= radians.size(); ++j) {
    const double a = radians[j - 1];
    members.push_back({std::to_string(j) + "+",
                       PureState(reg, fix_phase(product_amplitudes(dc, j, plus_state(a))))});
    members.push_back({std::to_string(j) + "-",
                       PureState(reg, fix_phase(product_amplitudes(dc, j, minus_state(a))))});
  }
  return StateSet(name, std::move(members), std::move(literals));
}

}  // namespace

StateSet::StateSet(std::string name, std::vector<Member> members, std::vector<std::string> angle_literals)
    : name_(std::move(name)), members_(std::move(members)), angles_(std::move(angle_literals)) {
  if (members_.empty()) throw std::invalid_argument("state set: no members");
  for (const auto& m : members_)
    if (!(m.state.reg() == members_.front().state.reg()))
      throw std::invalid_argument("state set: members use different registers");
  for (std::size_t i = 0; i < members_.size(); ++i)
    for (std::size_t j = i + 1; j < members_.size(); ++j)
      if (std::abs(inner_product(members_[i].state, members_[j].state)) > 1e-12)
        throw std::invalid_argument("state set: members " + members_[i].label + " and " +
                                    members_[j].label + " are not orthogonal");
}

std::size_t StateSet::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < members_.size(); ++i)
    if (members_[i].label == label) return i;
  throw std::invalid_argument("state set: unknown member '" + label + "'");
}

std::vector<std::string> control_labels(std::size_t n_angles) {
  const unsigned q = control_qubits(n_angles);
  if (q == 1) return {"A"};
  std::vector<std::string> out;
  for (unsigned i = 0; i < q; ++i) out.push_back("A" + std::to_string(i));
  return out;
}

Eigen::Vector2cd plus_state(double alpha) { return {std::cos(alpha), std::sin(alpha)}; }
Eigen::Vector2cd minus_state(double alpha) { return {std::sin(alpha), -std::cos(alpha)}; }

StateSet build_A(const std::vector<DyadicAngle>& angles) {
  std::vector<double> rad;
  std::vector<std::string> lit;
  for (const auto& a : angles) {
    rad.push_back(a.radians());
    lit.push_back(a.literal());
  }
  return build_A_impl(rad, std::move(lit), "A");
}

StateSet build_A_radians(const std::vector<double>& angles) {
  std::vector<std::string> lit;
  for (double a : angles) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", a);
    lit.emplace_back(buf);
  }
  return build_A_impl(angles, std::move(lit), "A");
}

StateSet build_B(std::size_t n) {
  if (n < 1) throw std::invalid_argument("build_B: n must be >= 1");
  const Register reg = control_register(n);
  std::vector<Member> members;
  for (std::size_t j = 0; j <= n; ++j)
    for (std::size_t x = 0; x < 2; ++x)
      members.push_back({std::to_string(j) + std::to_string(x), PureState::basis(reg, 2 * j + x)});
  return StateSet("B", std::move(members));
}

StateSet build_D(double alpha, KetOrder order) {
  const Register reg({{"A", Party::alice}, {"B", Party::bob}});
  const double c = std::cos(alpha), s = std::sin(alpha);
  // Amplitudes on |00>,|01>,|10>,|11> as listed (first ket symbol first).
  const double listed[4][4] = {{c, 0, 0, s}, {s, 0, 0, -c}, {0, c, s, 0}, {0, s, -c, 0}};
  std::vector<Member> members;
  for (int i = 0; i < 4; ++i) {
    Amplitudes amps(4);
    for (int idx = 0; idx < 4; ++idx) {
      // bob_first: the first symbol is B, so swap the two bits.
      const int target = order == KetOrder::alice_first ? idx : ((idx & 1) << 1) | (idx >> 1);
      amps[static_cast<std::size_t>(target)] = listed[i][idx];
    }
    members.push_back({"Psi" + std::to_string(i + 1), PureState(reg, fix_phase(std::move(amps)))});
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", alpha);
  return StateSet(order == KetOrder::alice_first ? "D" : "D(bob-first)", std::move(members), {buf});
}

StateSet build_two_entangled(const std::vector<cplx>& c, const std::vector<cplx>& d,
                             const std::vector<double>& angles) {
  if (angles.empty()) throw std::invalid_argument("two-state set: need at least one angle");
  const std::size_t n = angles.size();
  if (c.size() != n + 1 || d.size() != n + 1)
    throw std::invalid_argument("two-state set: coefficient lists must have n+1 entries");
  auto norm = [](const std::vector<cplx>& v) {
    double s = 0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
  };
  if (std::abs(norm(c) - 1.0) > 1e-12 || std::abs(norm(d) - 1.0) > 1e-12)
    throw std::invalid_argument("two-state set: coefficients must have unit norm");
  const Register reg = control_register(n);
  Amplitudes psi(reg.dimension(), cplx{}), phi(reg.dimension(), cplx{});
  psi[0] = c[0];
  phi[1] = d[0];
  for (std::size_t j = 1; j <= n; ++j) {
    const auto p = plus_state(angles[j - 1]), m = minus_state(angles[j - 1]);
    psi[2 * j] = c[j] * p[0];
    psi[2 * j + 1] = c[j] * p[1];
    phi[2 * j] = d[j] * m[0];
    phi[2 * j + 1] = d[j] * m[1];
  }
  std::vector<Member> members;
  members.push_back({"psi", PureState(reg, fix_phase(std::move(psi)))});
  members.push_back({"phi", PureState(reg, fix_phase(std::move(phi)))});
  return StateSet("two-state", std::move(members));
}

PureState build_ebits(int k, const std::string& alice_prefix, const std::string& bob_prefix,
                      int first_index) {
  if (k < 0) throw std::invalid_argument("build_ebits: k must be >= 0");
  PureState acc(Register{}, Amplitudes{1.0});
  const double h = 1.0 / std::sqrt(2.0);
  for (int t = 0; t < k; ++t) {
    const auto idx = std::to_string(first_index + t);
    PureState pair(Register({{alice_prefix + idx, Party::alice}, {bob_prefix + idx, Party::bob}}),
                   Amplitudes{h, 0.0, 0.0, h});
    acc = tensor(acc, pair);
  }
  return acc;
}

DensityMatrix build_werner(double F, double alpha, KetOrder order) {
  if (!(F >= 0.0 && F <= 1.0)) throw std::invalid_argument("build_werner: F must lie in [0,1]");
  const StateSet d = build_D(alpha, order);
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i) {
    Eigen::Map<const Eigen::Vector4cd> v(d[static_cast<std::size_t>(i)].state.amplitudes().data());
    rho += (i == 3 ? F : (1.0 - F) / 3.0) * (v * v.adjoint());
  }
  return DensityMatrix(d.reg(), rho);
}

EnsembleSpec::EnsembleSpec(StateSet s, std::vector<double> p) : set(std::move(s)), probabilities(std::move(p)) {
  if (probabilities.size() != set.size())
    throw std::invalid_argument("ensemble: one probability per member required");
  double total = 0;
  for (double x : probabilities) {
    if (x < 0) throw std::invalid_argument("ensemble: negative probability");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("ensemble: probabilities must sum to 1");
}

nlohmann::json to_json(const StateSet& set) {
  nlohmann::json j;
  j["name"] = set.name();
  j["angles"] = set.angle_literals();
  for (const auto& q : set.reg().qubits())
    j["register"].push_back({{"label", q.label}, {"party", std::string(to_string(q.party))}});
  for (const auto& m : set.members()) {
    nlohmann::json amps = nlohmann::json::array();
    for (const auto& a : m.state.amplitudes()) amps.push_back({a.real(), a.imag()});
    j["members"].push_back({{"label", m.label}, {"amplitudes", amps}});
  }
  return j;
}

}  // namespace lose
