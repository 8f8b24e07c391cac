#include "lose/protocol.hpp"

#include "lose/gates.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

namespace lose {

// ----------------------------------------------------------------- Dyadic

Dyadic Dyadic::make(std::uint64_t num, unsigned log2_den) {
  while (log2_den > 0 && (num & 1U) == 0) {
    num >>= 1;
    --log2_den;
  }
  if (num == 0) log2_den = 0;
  return Dyadic{num, log2_den};
}

std::optional<Dyadic> Dyadic::snap(double p, unsigned max_log2, double tol) {
  if (!(p >= -tol && p <= 1.0 + tol)) return std::nullopt;
  for (unsigned e = 0; e <= max_log2; ++e) {
    const double scaled = std::ldexp(p, static_cast<int>(e));
    const double r = std::nearbyint(scaled);
    if (std::abs(p - std::ldexp(r, -static_cast<int>(e))) <= tol)
      return make(static_cast<std::uint64_t>(std::max(0.0, r)), e);
  }
  return std::nullopt;
}

double Dyadic::value() const { return std::ldexp(static_cast<double>(numerator), -static_cast<int>(log2_denominator)); }

std::string Dyadic::str() const {
  if (log2_denominator == 0) return std::to_string(numerator);
  return std::to_string(numerator) + "/" + std::to_string(std::uint64_t{1} << log2_denominator);
}

OpAudit& OpAudit::operator+=(const OpAudit& o) {
  alice_ops += o.alice_ops;
  bob_ops += o.bob_ops;
  nonlocal_ops += o.nonlocal_ops;
  measurements += o.measurements;
  return *this;
}

PureState audited_apply(const Operator& op, const PureState& state, OpAudit& audit) {
  PureState out = apply_local(op, state);
  if (state.reg().party_of(op.acts_on.front()) == Party::alice)
    ++audit.alice_ops;
  else
    ++audit.bob_ops;
  return out;
}

// --------------------------------------------------------------- building blocks

AngleSchedule dyadic_schedule(const std::vector<DyadicAngle>& angles, int k) {
  if (k < 0) throw std::invalid_argument("schedule: negative ebit count");
  const std::size_t values = std::size_t{1} << control_labels(angles.size()).size();
  AngleSchedule s;
  std::vector<DyadicAngle> cur = angles;
  for (int t = 0; t < k; ++t) {
    std::vector<double> row(values, 0.0);
    for (std::size_t j = 0; j < cur.size(); ++j) row[j + 1] = cur[j].radians();
    s.push_back(std::move(row));
    for (auto& a : cur) a = double_mod(a);
  }
  return s;
}

Operator bob_cnot(const std::string& bob_ancilla, const std::string& target) {
  return gates::controlled(bob_ancilla, target, gates::pauli_y());
}

Operator alice_rotation(const std::vector<std::string>& control, const std::string& alice_ancilla,
                        const std::vector<double>& angles) {
  std::vector<Eigen::Matrix2cd> blocks;
  for (double a : angles) blocks.push_back(gates::rx(a));
  return gates::controlled_by_value(control, alice_ancilla, blocks);
}

namespace {

struct GenericStep {
  double probability[2] = {0.0, 0.0};  // index 0: r = +1, index 1: r = -1
  std::optional<PureState> state[2];
};

struct StepOps {
  Operator cnot;
  Operator rotation;
  StepOps(int t, const SteeringLayout& layout, const std::vector<double>& angles)
      : cnot(bob_cnot(layout.bob_ancilla(t), layout.target)),
        rotation(alice_rotation(layout.control, layout.alice_ancilla(t), angles)) {}
};

GenericStep step_generic(const PureState& state, int t, const SteeringLayout& layout, const StepOps& ops,
                         OpAudit& audit) {
  const std::string a = layout.alice_ancilla(t), b = layout.bob_ancilla(t);
  if (!state.reg().contains(a) || !state.reg().contains(b))
    throw std::invalid_argument("step: ebit " + std::to_string(t) + " is not available");
  const PureState after_cnot = audited_apply(ops.cnot, state, audit);
  GenericStep out;
  for (int i = 0; i < 2; ++i) {
    Collapsed c = collapse(after_cnot, b, Basis::x(), i == 0 ? +1 : -1);
    ++audit.measurements;
    out.probability[i] = c.probability;
    if (c.state) out.state[i] = audited_apply(ops.rotation, *c.state, audit);
  }
  return out;
}

std::vector<double> table_angles(const AngleTable& table, std::size_t control_qubits) {
  std::vector<double> a(std::size_t{1} << control_qubits, 0.0);
  for (std::size_t j = 0; j < table.rows.size(); ++j) a.at(j + 1) = table.rows[j].angle.radians();
  return a;
}

AngleTable zero_table(const AngleTable& t) {
  AngleTable z;
  z.width = 1;
  for (const auto& r : t.rows) z.rows.push_back(AngleRow{r.index, DyadicAngle::zero(), "0"});
  return z;
}

std::set<std::string> ancilla_labels(const SteeringLayout& layout, int ebits) {
  std::set<std::string> s;
  for (int t = 1; t <= ebits; ++t) {
    s.insert(layout.alice_ancilla(t));
    s.insert(layout.bob_ancilla(t));
  }
  return s;
}

std::string r_string(const std::vector<int>& r) {
  std::string s;
  for (int x : r) s += x > 0 ? '+' : '-';
  return s;
}

std::string join_bits(const std::vector<std::pair<std::string, int>>& items) {
  std::string s;
  for (const auto& [label, bit] : items) {
    if (!s.empty()) s += ',';
    s += label + "=" + std::to_string(bit);
  }
  return s;
}

struct KeptInfo {
  std::vector<std::string> kept;
  std::vector<std::string> ancillas;  // a_1..a_k present in the register
};

KeptInfo kept_qubits(const Register& reg, const SteeringLayout& layout, int ebits) {
  const auto anc = ancilla_labels(layout, ebits);
  KeptInfo info;
  for (const auto& q : reg.qubits())
    if (!anc.count(q.label)) info.kept.push_back(q.label);
  for (int t = 1; t <= ebits; ++t)
    if (reg.contains(layout.alice_ancilla(t))) info.ancillas.push_back(layout.alice_ancilla(t));
  return info;
}

// Builds the per-party record strings for one readout.
void fill_records(Leaf& leaf, const Register& reg, const std::vector<std::string>& kept, std::uint64_t kept_value,
                  const std::string& a_bits, const std::vector<int>& r, const SteeringLayout& layout,
                  const PriorRecords& prior) {
  std::vector<std::pair<std::string, int>> alice, bob;
  leaf.control_value = 0;
  leaf.kept_bits.clear();
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const int bit = static_cast<int>((kept_value >> (kept.size() - 1 - i)) & 1U);
    leaf.kept_bits += static_cast<char>('0' + bit);
    (reg.party_of(kept[i]) == Party::alice ? alice : bob).push_back({kept[i], bit});
    if (std::find(layout.control.begin(), layout.control.end(), kept[i]) != layout.control.end())
      leaf.control_value = (leaf.control_value << 1) | static_cast<unsigned>(bit);
    if (kept[i] == layout.target) leaf.target_bit = bit;
  }
  leaf.alice_ancilla_bits = a_bits;
  leaf.alice_record = prior.alice + join_bits(alice) + ";a=" + a_bits;
  leaf.bob_record = prior.bob + "r=" + r_string(r) + ";" + join_bits(bob);
}

}  // namespace

std::pair<StepBranch, StepBranch> step_once(const PureState& state, int t, const SteeringLayout& layout,
                                            const AngleTable& table, OpAudit& audit) {
  const StepOps ops(t, layout, table_angles(table, layout.control.size()));
  const GenericStep g = step_generic(state, t, layout, ops, audit);
  StepBranch plus{+1, g.probability[0], g.state[0], zero_table(table)};
  StepBranch minus{-1, g.probability[1], g.state[1], double_table(table)};
  return {std::move(plus), std::move(minus)};
}

namespace {

struct Node {
  std::string a_bits;
  double probability;
  PureState state;
};

// Alice reads a_t in the computational basis; both outcomes are kept.
void read_out(std::vector<Node>& out, const Node& parent, const std::string& a, OpAudit& audit) {
  ++audit.measurements;
  for (int o : {+1, -1}) {
    Collapsed c = collapse(parent.state, a, Basis::computational(), o);
    if (!c.state) continue;
    out.push_back(Node{parent.a_bits + (o > 0 ? '0' : '1'), parent.probability * c.probability, std::move(*c.state)});
  }
}

Eigen::MatrixXcd outer(const PureState& s, double weight) {
  Eigen::Map<const Eigen::VectorXcd> v(s.amplitudes().data(), static_cast<Eigen::Index>(s.dimension()));
  return weight * (v * v.adjoint());
}

// Alice's step on a halted history. Bob never touches b_t again, so tracing
// it out leaves a_t maximally mixed: rho -> (1/2) sum_z K_z rho K_z^dagger
// with K_z = sum_j |j><j| <a|R(theta_j)|z>, diagonal in the kept basis. The
// map is therefore an entrywise product with the mask returned here.
Eigen::MatrixXcd halted_mask(Eigen::Index d, const std::vector<unsigned>& control_bits,
                             const std::vector<double>& angles, int a) {
  Eigen::MatrixXcd mask = Eigen::MatrixXcd::Zero(d, d);
  for (int z = 0; z < 2; ++z) {
    Eigen::VectorXcd k(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const auto j = gather_bits(static_cast<std::uint64_t>(i), control_bits);
      k[i] = gates::rx(j < angles.size() ? angles[j] : 0.0)(a, z);
    }
    mask += 0.5 * k * k.adjoint();
  }
  return mask;
}

}  // namespace

std::vector<RawBranch> enumerate_branches(const PureState& initial, const SteeringLayout& layout,
                                          const AngleSchedule& schedule, OpAudit& audit) {
  const int k = static_cast<int>(schedule.size());
  const Register& kept = initial.reg();
  std::vector<unsigned> control_bits;
  for (const auto& c : layout.control) {
    if (kept.party_of(c) != Party::alice) throw LocalityViolation("steering: control qubit " + c + " is not Alice's");
    control_bits.push_back(kept.bit_of(c));
  }
  std::vector<RawBranch> halted;
  std::vector<Node> active{Node{"", 1.0, initial}};
  std::vector<int> r;
  for (int t = 1; t <= k; ++t) {
    const auto& angles = schedule[static_cast<std::size_t>(t - 1)];
    const auto d = static_cast<Eigen::Index>(kept.dimension());
    const Eigen::MatrixXcd mask[2] = {halted_mask(d, control_bits, angles, 0), halted_mask(d, control_bits, angles, 1)};
    for (auto& h : halted) {
      std::vector<RawLeaf> next;
      next.reserve(2 * h.leaves.size());
      for (const auto& leaf : h.leaves)
        for (int a = 0; a < 2; ++a)
          next.push_back(RawLeaf{leaf.a_bits + static_cast<char>('0' + a), mask[a].cwiseProduct(leaf.rho)});
      ++audit.alice_ops;
      ++audit.measurements;
      h.leaves = std::move(next);
    }
    if (active.empty()) continue;
    const PureState pair = build_ebits(1, layout.alice_prefix, layout.bob_prefix, layout.first_index + t - 1);
    const StepOps ops(t, layout, angles);
    std::vector<Node> stop, go;
    for (const auto& node : active) {
      GenericStep g = step_generic(tensor(node.state, pair), t, layout, ops, audit);
      if (g.state[0]) read_out(stop, Node{node.a_bits, node.probability * g.probability[0], *g.state[0]},
                               layout.alice_ancilla(t), audit);
      if (g.state[1]) read_out(go, Node{node.a_bits, node.probability * g.probability[1], *g.state[1]},
                               layout.alice_ancilla(t), audit);
    }
    RawBranch h{r, 0.0, kept, {}};
    h.r.push_back(+1);
    for (const auto& n : stop) h.leaves.push_back(RawLeaf{n.a_bits, outer(n.state, n.probability)});
    halted.push_back(std::move(h));
    r.push_back(-1);
    active = std::move(go);
  }
  RawBranch last{r, 0.0, kept, {}};
  for (const auto& n : active) last.leaves.push_back(RawLeaf{n.a_bits, outer(n.state, n.probability)});
  halted.push_back(std::move(last));
  for (auto& h : halted)
    for (const auto& l : h.leaves) h.probability += l.rho.trace().real();
  return halted;
}

ProtocolTrace analyse_branches(const std::string& input_label, const std::vector<RawBranch>& raw,
                               const SteeringLayout& layout, int ebits, const PriorRecords& prior,
                               const std::vector<DyadicAngle>* angles, bool split_readout) {
  ProtocolTrace trace;
  trace.input_label = input_label;
  trace.ebits = ebits;
  for (const auto& rb : raw) {
    BobBranch b;
    b.r = rb.r;
    b.halt_step = !rb.r.empty() && rb.r.back() > 0 ? static_cast<int>(rb.r.size()) : 0;
    b.probability = rb.probability;
    b.exact = Dyadic::snap(rb.probability).value_or(Dyadic{});
    if (angles) {
      b.tables.push_back(build_table(*angles));
      for (int r : rb.r) b.tables.push_back(r > 0 ? zero_table(b.tables.back()) : double_table(b.tables.back()));
    }
    const auto kept = rb.kept.labels();
    for (const auto& rl : rb.leaves) {
      const double weight = rl.rho.trace().real();
      if (weight <= 1e-14) continue;
      const Eigen::VectorXd pops = rl.rho.diagonal().real() / weight;
      std::vector<Eigen::Index> outcomes;
      if (split_readout) {
        for (Eigen::Index i = 0; i < pops.size(); ++i)
          if (pops[i] * weight > 1e-14) outcomes.push_back(i);
      } else {
        Eigen::Index best = 0;
        pops.maxCoeff(&best);
        outcomes.push_back(best);
      }
      for (Eigen::Index o : outcomes) {
        Leaf leaf;
        if (split_readout) {
          leaf.populations = Eigen::VectorXd::Unit(pops.size(), o);
          leaf.overlap = 1.0;
          leaf.probability = weight * pops[o];
        } else {
          leaf.populations = pops;
          leaf.overlap = pops[o];
          leaf.probability = weight;
        }
        fill_records(leaf, rb.kept, kept, static_cast<std::uint64_t>(o), rl.a_bits, rb.r, layout, prior);
        leaf.exact = Dyadic::snap(leaf.probability).value_or(Dyadic{});
        b.leaves.push_back(std::move(leaf));
      }
    }
    trace.branches.push_back(std::move(b));
  }
  return trace;
}

std::string record_key(const Leaf& leaf) { return "bob[" + leaf.bob_record + "] alice[" + leaf.alice_record + "]"; }

DecodeTable build_decode_table(std::vector<ProtocolTrace>& traces, double tol) {
  DecodeTable table;
  for (auto& tr : traces)
    for (auto& br : tr.branches)
      for (auto& leaf : br.leaves) {
        if (leaf.overlap < 1.0 - tol) {
          std::ostringstream msg;
          msg << "input " << tr.input_label << ", history r=" << r_string(br.r)
              << ": readout is not a computational product state (overlap " << leaf.overlap << ")";
          throw DecodingFailure(msg.str());
        }
        const std::string key = record_key(leaf);
        const auto [it, inserted] = table.emplace(key, tr.input_label);
        if (!inserted && it->second != tr.input_label)
          throw DecodingFailure("records " + key + " occur for both " + it->second + " and " + tr.input_label);
        leaf.decoded = tr.input_label;
      }
  return table;
}

std::string decode(const DecodeTable& table, const Leaf& leaf) {
  if (leaf.overlap < 1.0 - 1e-9) throw DecodingFailure("leaf is not a computational product state");
  const auto it = table.find(record_key(leaf));
  if (it == table.end()) throw DecodingFailure("no decode entry for records " + record_key(leaf));
  return it->second;
}

SteeringRun run_iterative(const StateSet& set, const std::vector<DyadicAngle>& angles, std::optional<int> k) {
  if (angles.empty()) throw std::invalid_argument("run_iterative: no angles");
  const int need = static_cast<int>(measure_I(angles));
  const int ebits = k.value_or(need);
  if (ebits < need) throw std::invalid_argument("run_iterative: ebit budget below the set's nonlocality");
  SteeringLayout layout;
  layout.control = control_labels(angles.size());
  for (const auto& l : layout.control)
    if (!set.reg().contains(l)) throw std::invalid_argument("run_iterative: set does not match the angle list");
  if (set.reg().size() != layout.control.size() + 1)
    throw std::invalid_argument("run_iterative: set does not match the angle list");
  const AngleSchedule schedule = dyadic_schedule(angles, ebits);

  SteeringRun run;
  run.set_name = set.name();
  run.ebits = ebits;
  run.traces.resize(set.size());
  const auto n = static_cast<long long>(set.size());
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    const auto& m = set[static_cast<std::size_t>(i)];
    OpAudit audit;
    const auto raw = enumerate_branches(m.state, layout, schedule, audit);
    ProtocolTrace tr = analyse_branches(m.label, raw, layout, ebits, {}, &angles);
    tr.audit = audit;
    run.traces[static_cast<std::size_t>(i)] = std::move(tr);
  }
  run.kept = kept_qubits(set.reg(), layout, ebits).kept;
  run.alice_tables.push_back(build_table(angles));
  for (int t = 0; t < ebits; ++t) run.alice_tables.push_back(double_table(run.alice_tables.back()));
  run.decode = build_decode_table(run.traces);
  return run;
}

SampleSummary sample_runs(const SteeringRun& run, std::size_t n, std::uint64_t seed) {
  if (run.traces.empty()) throw std::invalid_argument("sample_runs: empty run");
  struct Flat {
    std::vector<double> cumulative;
    std::vector<std::pair<const BobBranch*, const Leaf*>> leaves;
  };
  std::vector<Flat> flat(run.traces.size());
  for (std::size_t i = 0; i < run.traces.size(); ++i) {
    double acc = 0.0;
    for (const auto& br : run.traces[i].branches)
      for (const auto& leaf : br.leaves) {
        acc += leaf.probability;
        flat[i].cumulative.push_back(acc);
        flat[i].leaves.emplace_back(&br, &leaf);
      }
    if (flat[i].leaves.empty()) throw std::invalid_argument("sample_runs: trace without leaves");
  }
  std::mt19937_64 rng(seed);
  auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  SampleSummary s;
  s.samples = n;
  s.halt_counts.assign(static_cast<std::size_t>(run.ebits) + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t m = std::min(run.traces.size() - 1, static_cast<std::size_t>(uniform() * run.traces.size()));
    const auto& f = flat[m];
    // Clamp at the top end where rounding can leave the total just below 1.
    const auto pos = std::min<std::size_t>(
        f.leaves.size() - 1,
        static_cast<std::size_t>(std::upper_bound(f.cumulative.begin(), f.cumulative.end(), uniform() * f.cumulative.back()) -
                                 f.cumulative.begin()));
    const auto [branch, leaf] = f.leaves[pos];
    ++s.halt_counts[static_cast<std::size_t>(branch->halt_step)];
    if (decode(run.decode, *leaf) == run.traces[m].input_label) ++s.decoded_correctly;
  }
  return s;
}

// ------------------------------------------------------------ closed form

Eigen::Matrix4cd omega_matrix() {
  const double h = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd plus0 = Eigen::Matrix2cd::Zero(), minus1 = Eigen::Matrix2cd::Zero();
  plus0(0, 0) = h;
  plus0(1, 0) = h;  // |+><0|
  minus1(0, 1) = h;
  minus1(1, 1) = -h;  // |-><1|
  return gates::kron(gates::identity(), plus0) + gates::kron(gates::pauli_y(), minus1);
}

namespace {

Register bob_local_register(const SteeringLayout& layout, int ebits) {
  std::vector<Qubit> qs{{layout.target, Party::bob}};
  for (int t = 1; t <= ebits; ++t) qs.push_back({layout.bob_ancilla(t), Party::bob});
  return Register(std::move(qs));
}

// Omega on (target, b_i), applied only when b_1..b_{i-1} all read 1.
Operator conditioned_omega(const SteeringLayout& layout, int i) {
  const Eigen::Index dim = Eigen::Index{4} << (i - 1);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim);
  m.bottomRightCorner(4, 4) = omega_matrix();
  std::vector<std::string> labels;
  for (int j = 1; j < i; ++j) labels.push_back(layout.bob_ancilla(j));
  labels.push_back(layout.target);
  labels.push_back(layout.bob_ancilla(i));
  return Operator(std::move(m), std::move(labels));
}

}  // namespace

ClosedForm build_closed_form(const SteeringLayout& layout, const AngleSchedule& schedule) {
  const int k = static_cast<int>(schedule.size());
  const std::size_t values = std::size_t{1} << layout.control.size();
  const Eigen::Index adim = static_cast<Eigen::Index>(values) << k;
  Eigen::MatrixXcd alice = Eigen::MatrixXcd::Zero(adim, adim);
  const Eigen::Index block = Eigen::Index{1} << k;
  for (std::size_t j = 0; j < values; ++j) {
    Eigen::MatrixXcd prod = Eigen::MatrixXcd::Identity(1, 1);
    for (int t = 0; t < k; ++t) {
      const auto& row = schedule[static_cast<std::size_t>(t)];
      prod = gates::kron(prod, gates::rx(j < row.size() ? row[j] : 0.0));
    }
    alice.block(static_cast<Eigen::Index>(j) * block, static_cast<Eigen::Index>(j) * block, block, block) = prod;
  }
  std::vector<std::string> alabels = layout.control;
  for (int t = 1; t <= k; ++t) alabels.push_back(layout.alice_ancilla(t));

  const Register breg = bob_local_register(layout, k);
  Eigen::MatrixXcd bob = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(breg.dimension()),
                                                    static_cast<Eigen::Index>(breg.dimension()));
  for (int i = 1; i <= k; ++i) bob = embed(conditioned_omega(layout, i), breg) * bob;

  ClosedForm cf{layout, k, 0, Operator(std::move(alice), std::move(alabels)), Operator(std::move(bob), breg.labels())};
  if (!cf.alice.is_unitary() || !cf.bob.is_unitary()) throw std::logic_error("closed form: factor is not unitary");
  return cf;
}

ClosedForm build_closed_form(const std::vector<DyadicAngle>& angles, int k) {
  if (angles.empty()) throw std::invalid_argument("closed form: no angles");
  if (k < static_cast<int>(measure_I(angles)))
    throw std::invalid_argument("closed form: ebit budget below the set's nonlocality");
  SteeringLayout layout;
  layout.control = control_labels(angles.size());
  return build_closed_form(layout, dyadic_schedule(angles, k));
}

ClosedForm pad_closed_form(const ClosedForm& cf, int extra) {
  if (extra < 0) throw std::invalid_argument("padding: negative count");
  const int total = cf.ebits + cf.padding + extra;
  const Eigen::Index ext = Eigen::Index{1} << extra;
  Eigen::MatrixXcd alice = gates::kron(cf.alice.matrix, Eigen::MatrixXcd::Identity(ext, ext));
  std::vector<std::string> alabels = cf.alice.acts_on;
  for (int t = cf.ebits + cf.padding + 1; t <= total; ++t) alabels.push_back(cf.layout.alice_ancilla(t));

  const Register breg = bob_local_register(cf.layout, total);
  Eigen::MatrixXcd bob = embed(cf.bob, breg);
  for (int t = cf.ebits + cf.padding + 1; t <= total; ++t)
    bob = embed(Operator(omega_matrix(), {cf.layout.target, cf.layout.bob_ancilla(t)}), breg) * bob;
  return ClosedForm{cf.layout, cf.ebits, cf.padding + extra, Operator(std::move(alice), std::move(alabels)),
                    Operator(std::move(bob), breg.labels())};
}

PureState with_ebits(const PureState& member, const ClosedForm& cf) {
  return tensor(member, build_ebits(cf.ebits + cf.padding, cf.layout.alice_prefix, cf.layout.bob_prefix,
                                    cf.layout.first_index));
}

PureState apply_closed_form(const ClosedForm& cf, const PureState& member, OpAudit* audit) {
  OpAudit local;
  OpAudit& a = audit ? *audit : local;
  return audited_apply(cf.bob, audited_apply(cf.alice, with_ebits(member, cf), a), a);
}

Operator closed_form_global(const ClosedForm& cf, const Register& reg) {
  return Operator(embed(cf.bob, reg) * embed(cf.alice, reg), reg.labels());
}

OutcomeDistribution closed_form_distribution(const ClosedForm& cf, const PureState& member) {
  if (cf.padding != 0) throw std::invalid_argument("closed_form_distribution: padded forms have no halting record");
  const PureState out = apply_closed_form(cf, member);
  const Register& reg = out.reg();
  const KeptInfo info = kept_qubits(reg, cf.layout, cf.ebits);
  std::vector<unsigned> kb, ab, bb;
  for (const auto& l : info.kept) kb.push_back(reg.bit_of(l));
  for (int t = 1; t <= cf.ebits; ++t) {
    ab.push_back(reg.bit_of(cf.layout.alice_ancilla(t)));
    bb.push_back(reg.bit_of(cf.layout.bob_ancilla(t)));
  }
  const auto probs = probabilities(out);
  OutcomeDistribution dist;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 1e-15) continue;
    std::vector<int> r;
    for (unsigned b : bb) {
      const bool one = (i >> b) & 1U;
      r.push_back(one ? -1 : +1);
      if (!one) break;  // Bob stops after his first +1
    }
    std::string a_bits;
    for (unsigned b : ab) a_bits += static_cast<char>('0' + ((i >> b) & 1U));
    Leaf leaf;
    fill_records(leaf, reg, info.kept, gather_bits(i, kb), a_bits, r, cf.layout, {});
    dist[record_key(leaf)] += probs[i];
  }
  return dist;
}

OutcomeDistribution iterative_distribution(const ProtocolTrace& trace) {
  OutcomeDistribution d;
  for (const auto& br : trace.branches)
    for (const auto& leaf : br.leaves) d[record_key(leaf)] += leaf.probability;
  return d;
}

std::map<std::string, double> target_marginal(const ClosedForm& cf, const PureState& member) {
  const PureState out = apply_closed_form(cf, member);
  std::vector<unsigned> cb;
  for (const auto& l : cf.layout.control) cb.push_back(out.reg().bit_of(l));
  const unsigned tb = out.reg().bit_of(cf.layout.target);
  const auto probs = probabilities(out);
  std::map<std::string, double> m;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 1e-15) continue;
    m["A=" + std::to_string(gather_bits(i, cb)) + ";B=" + std::to_string((i >> tb) & 1U)] += probs[i];
  }
  return m;
}

EnsembleOutcome run_on_ensemble(const EnsembleSpec& spec, const MemberRunner& protocol) {
  EnsembleOutcome out;
  out.traces = protocol(spec.set);
  if (out.traces.size() != spec.set.size()) throw std::logic_error("ensemble: runner returned wrong trace count");
  for (std::size_t i = 0; i < out.traces.size(); ++i)
    for (const auto& br : out.traces[i].branches)
      for (const auto& leaf : br.leaves) out.distribution[record_key(leaf)] += spec.probabilities[i] * leaf.probability;
  return out;
}

}  // namespace lose
