#include "lose/stator.hpp"

#include "lose/gates.hpp"
#include "lose/protocol.hpp"
#include "lose/sets.hpp"

#include <cmath>
#include <sstream>

namespace lose {

Stator::Stator(Register ancillas, std::string target) : ancillas_(std::move(ancillas)), target_(std::move(target)) {
  if (ancillas_.contains(target_)) throw std::invalid_argument("stator: target is also an ancilla");
}

void Stator::add(std::string bits, const Eigen::Matrix2cd& op, cplx coefficient) {
  if (bits.size() != ancillas_.size() || bits.find_first_not_of("01") != std::string::npos)
    throw std::invalid_argument("stator: term '" + bits + "' does not fit the ancilla register");
  terms_.push_back(StatorTerm{std::move(bits), op, coefficient});
}

Eigen::MatrixXcd Stator::matrix() const {
  const auto n = static_cast<Eigen::Index>(ancillas_.dimension());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2 * n, 2);
  for (const auto& t : terms_) {
    const auto s = static_cast<Eigen::Index>(std::stoull(t.bits.empty() ? "0" : t.bits, nullptr, 2));
    m.block(2 * s, 0, 2, 2) += t.coefficient * t.op;
  }
  return m;
}

PureState Stator::apply(const Eigen::Vector2cd& psi) const {
  const Eigen::VectorXcd v = matrix() * psi;
  std::vector<Qubit> qs = ancillas_.qubits();
  qs.push_back({target_, Party::bob});
  return PureState::normalized(Register(std::move(qs)), Amplitudes(v.data(), v.data() + v.size()));
}

PureState Stator::apply(const PureState& member) const {
  const Register& reg = member.reg();
  if (reg.size() == 0 || reg[reg.size() - 1].label != target_)
    throw std::invalid_argument("stator: the target must be the member's last qubit");
  const Eigen::MatrixXcd m = matrix();
  const auto rest = static_cast<Eigen::Index>(reg.dimension() / 2);
  const Eigen::Index out_block = m.rows();
  Amplitudes out(static_cast<std::size_t>(rest * out_block));
  for (Eigen::Index r = 0; r < rest; ++r) {
    const Eigen::Vector2cd psi(member.amplitude(static_cast<std::size_t>(2 * r)),
                               member.amplitude(static_cast<std::size_t>(2 * r + 1)));
    const Eigen::VectorXcd v = m * psi;
    for (Eigen::Index i = 0; i < out_block; ++i) out[static_cast<std::size_t>(r * out_block + i)] = v[i];
  }
  std::vector<Qubit> qs(reg.qubits().begin(), reg.qubits().end() - 1);
  for (const auto& q : ancillas_.qubits()) qs.push_back(q);
  qs.push_back(reg[reg.size() - 1]);
  return PureState::normalized(Register(std::move(qs)), std::move(out));
}

Stator Stator::left_multiply(const Eigen::Matrix2cd& op) const {
  Stator s(ancillas_, target_);
  for (const auto& t : terms_) s.add(t.bits, op * t.op, t.coefficient);
  return s;
}

std::string Stator::to_string() const {
  std::ostringstream out;
  for (const auto& t : terms_) {
    out << "(" << t.coefficient.real() << (t.coefficient.imag() < 0 ? "" : "+") << t.coefficient.imag() << "i) |"
        << t.bits << "> (x) [";
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        const cplx x = t.op(r, c);
        out << (r || c ? ", " : "") << x.real() << (x.imag() < 0 ? "" : "+") << x.imag() << "i";
      }
    out << "]\n";
  }
  return out.str();
}

Stator compose(const Stator& outer, const Stator& inner) {
  if (outer.target() != inner.target()) throw std::invalid_argument("stator compose: different targets");
  Stator s(inner.ancillas().concat(outer.ancillas()), inner.target());
  for (const auto& ti : inner.terms())
    for (const auto& to : outer.terms()) s.add(ti.bits + to.bits, to.op * ti.op, to.coefficient * ti.coefficient);
  return s;
}

Stator build_S(int t, int sign, bool normalized) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("build_S: sign must be +1 or -1");
  const double c = normalized ? 1.0 / std::sqrt(2.0) : 1.0;
  Stator s(Register({{"a" + std::to_string(t), Party::alice}}));
  s.add("0", gates::identity(), c);
  s.add("1", gates::pauli_y(), sign * c);
  return s;
}

Stator build_step_stator(int t) {
  const std::string a = "a" + std::to_string(t), b = "b" + std::to_string(t);
  Stator s(Register({{b, Party::bob}, {a, Party::alice}}));
  s.add("00", gates::identity());
  s.add("01", gates::pauli_y());
  s.add("10", gates::identity());
  s.add("11", gates::pauli_y(), -1.0);
  return s;
}

namespace {

// The operator O (x) I_target on the stator's ancilla at position `pos`.
Eigen::MatrixXcd on_ancilla(const Stator& s, std::size_t pos, const Eigen::Matrix2cd& op) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t i = 0; i < s.ancillas().size(); ++i)
    m = gates::kron(m, i == pos ? Eigen::MatrixXcd(op) : Eigen::MatrixXcd(gates::identity()));
  return gates::kron(m, gates::identity());
}

Eigen::MatrixXcd on_target(const Stator& s, const Eigen::Matrix2cd& op) {
  const auto n = static_cast<Eigen::Index>(s.ancillas().dimension());
  return gates::kron(Eigen::MatrixXcd::Identity(n, n), op);
}

const Eigen::Matrix2cd& axis_matrix(Axis a) {
  static const Eigen::Matrix2cd x = gates::pauli_x(), y = gates::pauli_y(), z = gates::pauli_z();
  return a == Axis::x ? x : a == Axis::y ? y : z;
}

std::string axis_name(Axis a) { return a == Axis::x ? "x" : a == Axis::y ? "y" : "z"; }

}  // namespace

CheckReport check_eigen_operator(const Stator& s, int sign) {
  CheckReport r;
  r.name = "eigen_operator";
  if (s.ancillas().size() != 1) {
    r.summary = "expects a stator on one ancilla";
    return r;
  }
  const Eigen::MatrixXcd lhs = on_ancilla(s, 0, gates::pauli_x()) * s.matrix();
  const Eigen::MatrixXcd rhs = static_cast<double>(sign) * on_target(s, gates::pauli_y()) * s.matrix();
  const double err = (lhs - rhs).cwiseAbs().maxCoeff();
  r.passed = err <= 1e-12;
  r.details = {{"sign", sign}, {"max_error", err}};
  r.summary = std::string(r.passed ? "holds" : "fails") + " with sign " + (sign > 0 ? "+" : "-") +
              " (max deviation " + fmt(err) + ")";
  return r;
}

CheckReport check_rotation_propagation(double theta, Axis axis) {
  const Stator step = build_step_stator(1);  // ancillas (b1, a1)
  const Eigen::MatrixXcd lhs = on_ancilla(step, 1, gates::exp_i_pauli(gates::pauli_x(), theta)) * step.matrix();
  const Eigen::Matrix2cd& sigma = axis_matrix(axis);
  Stator plus = build_S(1, +1).left_multiply(gates::exp_i_pauli(sigma, theta));
  Stator minus = build_S(1, -1).left_multiply(gates::exp_i_pauli(sigma, -theta));
  Stator rhs_s(step.ancillas());
  for (const auto& t : plus.terms()) rhs_s.add("0" + t.bits, t.op, t.coefficient);
  for (const auto& t : minus.terms()) rhs_s.add("1" + t.bits, t.op, t.coefficient);
  const double err = (lhs - rhs_s.matrix()).cwiseAbs().maxCoeff();
  CheckReport r;
  r.name = "rotation_propagation";
  r.passed = err <= 1e-12;
  r.details = {{"theta", theta}, {"axis", axis_name(axis)}, {"max_error", err}};
  r.summary = std::string(r.passed ? "propagates" : "does not propagate") + " to the " + axis_name(axis) +
              " axis of B (max deviation " + fmt(err) + ")";
  return r;
}

Stator stator_chain(int t, bool all_minus) {
  if (t < 1) throw std::invalid_argument("stator_chain: t must be >= 1");
  Stator chain = build_S(1, (t == 1 && !all_minus) ? +1 : -1);
  for (int i = 2; i <= t; ++i) chain = compose(build_S(i, (i == t && !all_minus) ? +1 : -1), chain);
  return chain;
}

Superstator build_superstator(int k, const DyadicAngle& alpha) {
  if (k < 1) throw std::invalid_argument("build_superstator: k must be >= 1");
  std::vector<Qubit> qs;
  for (int i = 1; i <= k; ++i) {
    qs.push_back({"a" + std::to_string(i), Party::alice});
    qs.push_back({"b" + std::to_string(i), Party::bob});
  }
  Stator sup{Register(qs)};
  const double h = 1.0 / std::sqrt(2.0);
  // Terms t = 1..k halt on b_t = 0; the last (Theta) has every b equal to 1.
  for (int t = 1; t <= k + 1; ++t) {
    const bool theta = t == k + 1;
    const int len = theta ? k : t;
    const Stator chain = stator_chain(len, theta);
    const double weight = std::pow(2.0, -len / 2.0) * std::pow(h, len) * std::pow(h, k - len);
    for (const auto& term : chain.terms()) {
      // Phi+ pairs beyond the chain contribute |00> and |11> on (a_i, b_i).
      for (std::uint64_t pairs = 0; pairs < (std::uint64_t{1} << (k - len)); ++pairs) {
        std::string bits;
        for (int i = 1; i <= k; ++i) {
          if (i <= len) {
            bits += term.bits[static_cast<std::size_t>(i - 1)];
            bits += (i == len && !theta) ? '0' : '1';
          } else {
            const char c = ((pairs >> (k - i)) & 1U) ? '1' : '0';
            bits += c;
            bits += c;
          }
        }
        sup.add(bits, term.op, weight * term.coefficient);
      }
    }
  }
  ClosedForm cf = build_closed_form({alpha}, k);
  return Superstator{std::move(sup), alpha, k, std::move(cf.alice)};
}

CheckReport check_alice_identities(int k, const DyadicAngle& alpha) {
  CheckReport r;
  r.name = "alice_identities";
  double worst = 0.0;
  const double a = alpha.radians();
  for (int t = 1; t <= k + 1; ++t) {
    const bool theta = t == k + 1;
    const int len = theta ? k : t;
    const Stator chain = stator_chain(len, theta);
    Eigen::MatrixXcd rot = Eigen::MatrixXcd::Identity(1, 1);
    for (int i = 1; i <= len; ++i) rot = gates::kron(rot, gates::rx(std::ldexp(a, i - 1)));
    const Eigen::MatrixXcd lhs = gates::kron(rot, gates::identity()) * chain.matrix();
    // Rotation about y with the positive sign, exp(+i phi sigma_y).
    const double phi = theta ? a - std::acos(-1.0) / 2 : a;
    const Eigen::MatrixXcd rhs = on_target(chain, gates::exp_i_pauli(gates::pauli_y(), phi)) * chain.matrix();
    // Compare up to a global sign: the all-minus chain picks up (-1)^((m-1)/2).
    const double err = std::min((lhs - rhs).cwiseAbs().maxCoeff(), (lhs + rhs).cwiseAbs().maxCoeff());
    r.details["chains"].push_back({{"t", len}, {"all_minus", theta}, {"max_error", err}});
    worst = std::max(worst, err);
  }
  r.passed = worst <= 1e-10;
  r.summary = "max deviation over " + std::to_string(k + 1) + " chains: " + fmt(worst);
  return r;
}

CheckReport check_superstator(int k, const DyadicAngle& alpha, double tol) {
  const Superstator sup = build_superstator(k, alpha);
  const ClosedForm cf = build_closed_form({alpha}, k);
  const StateSet set = build_A({alpha});
  CheckReport r;
  r.name = "superstator";
  double worst = 0.0;
  for (const auto& m : set.members()) {
    const PureState via_stator = apply_local(sup.alice, sup.stator.apply(m.state));
    const PureState via_cf = reorder(apply_closed_form(cf, m.state), via_stator.reg().labels());
    double err = 0.0;
    for (std::size_t i = 0; i < via_cf.dimension(); ++i)
      err = std::max(err, std::abs(via_cf.amplitude(i) - via_stator.amplitude(i)));
    r.details["members"].push_back({{"label", m.label}, {"max_error", err}});
    worst = std::max(worst, err);
  }
  r.passed = worst <= tol;
  r.summary = "stator and closed form differ by at most " + fmt(worst);
  return r;
}

}  // namespace lose
