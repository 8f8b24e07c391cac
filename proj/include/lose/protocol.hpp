// Steering protocols: the iterative ebit-by-ebit protocol with mid-circuit
// measurement, its closed product-unitary form, decoding, and ensembles.
#pragma once

#include "lose/angles.hpp"
#include "lose/qsim.hpp"
#include "lose/sets.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lose {

struct DecodingFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact probability numerator / 2^log2_denominator, reduced.
struct Dyadic {
  std::uint64_t numerator = 0;
  unsigned log2_denominator = 0;

  static Dyadic make(std::uint64_t num, unsigned log2_den);
  // Snaps a floating-point probability to the nearest dyadic with denominator
  // at most 2^max_log2; empty if the distance exceeds tol.
  static std::optional<Dyadic> snap(double p, unsigned max_log2 = 32, double tol = 1e-13);
  double value() const;
  std::string str() const;  // "3/8", "1", "0"
  bool operator==(const Dyadic&) const = default;
};

// Counts of simulator calls made by a protocol executor, by party.
struct OpAudit {
  std::size_t alice_ops = 0;
  std::size_t bob_ops = 0;
  std::size_t nonlocal_ops = 0;
  std::size_t measurements = 0;
  OpAudit& operator+=(const OpAudit& o);
};

// Applies `op` via apply_local and books it to the owning party.
PureState audited_apply(const Operator& op, const PureState& state, OpAudit& audit);

// Which qubits play which role in one steering run.
struct SteeringLayout {
  std::vector<std::string> control;  // Alice's control register, big-endian
  std::string target = "B";          // Bob's qubit to be steered
  std::string alice_prefix = "a";
  std::string bob_prefix = "b";
  int first_index = 1;

  std::string alice_ancilla(int t) const { return alice_prefix + std::to_string(first_index + t - 1); }
  std::string bob_ancilla(int t) const { return bob_prefix + std::to_string(first_index + t - 1); }
};

// schedule[t-1][j]: Alice's rotation angle (radians) at step t for control value j.
using AngleSchedule = std::vector<std::vector<double>>;
AngleSchedule dyadic_schedule(const std::vector<DyadicAngle>& angles, int k);

// Bob's CNOT onto the target: |0><0| (x) I + |1><1| (x) sigma_y, control b_t.
Operator bob_cnot(const std::string& bob_ancilla, const std::string& target);
// Alice's controlled rotation sum_j |j><j| (x) exp(i*angle_j*sigma_x) on a_t.
Operator alice_rotation(const std::vector<std::string>& control, const std::string& alice_ancilla,
                        const std::vector<double>& angles);

struct StepBranch {
  int r = 0;
  double probability = 0.0;
  std::optional<PureState> state;  // b_t removed; empty if probability is 0
  AngleTable bob_table;            // table Bob uses next (all zero after r = +1)
};

// One iteration on a state that already holds ebit t: Bob's CNOT, his
// sigma_x measurement of b_t (outcome +1 halts him), and Alice's rotation.
std::pair<StepBranch, StepBranch> step_once(const PureState& state, int t, const SteeringLayout& layout,
                                            const AngleTable& table, OpAudit& audit);

// One readout history of Alice's ancillas inside a Bob history. Alice reads
// each a_t right after her rotation, which commutes with every later step.
// rho is the unnormalised state of the kept qubits; its trace is the joint
// probability of (Bob history, a bits). It is mixed only after Bob halted,
// when his untouched halves of the later pairs are traced out.
struct RawLeaf {
  std::string a_bits;
  Eigen::MatrixXcd rho;
};

// A measurement history of Bob with all its Alice readouts.
struct RawBranch {
  std::vector<int> r;
  double probability = 0.0;
  Register kept;  // register of every leaf's rho
  std::vector<RawLeaf> leaves;
};

// Runs k steps with lazily allocated ebits and returns Bob's k+1 histories
// (one for k = 0). Alice applies every step's rotation on every branch.
std::vector<RawBranch> enumerate_branches(const PureState& initial, const SteeringLayout& layout,
                                          const AngleSchedule& schedule, OpAudit& audit);

struct Leaf {
  std::string alice_ancilla_bits;  // a_1..a_k outcomes
  std::string kept_bits;           // outcomes of the kept qubits, register order
  std::uint64_t control_value = 0;
  int target_bit = 0;
  double probability = 0.0;  // joint with the Bob history
  Dyadic exact;
  double overlap = 0.0;  // weight of the most likely kept outcome
  std::string alice_record;
  std::string bob_record;
  std::string decoded;
  Eigen::VectorXd populations;  // normalised diagonal of the kept qubits
};

struct BobBranch {
  std::vector<int> r;
  int halt_step = 0;  // step of the +1 outcome; 0 when Bob never obtained +1
  double probability = 0.0;
  Dyadic exact;
  std::vector<AngleTable> tables;  // Bob's tables along this history
  std::vector<Leaf> leaves;
};

struct ProtocolTrace {
  std::string input_label;
  int ebits = 0;
  std::vector<BobBranch> branches;
  OpAudit audit;
};

using DecodeTable = std::map<std::string, std::string>;

struct SteeringRun {
  std::string set_name;
  int ebits = 0;
  std::vector<std::string> kept;  // qubits read out besides the ancillas
  std::vector<ProtocolTrace> traces;
  std::vector<AngleTable> alice_tables;  // Alice doubles every step regardless
  DecodeTable decode;
};

// Extra classical records produced before the steering proper (e.g. the
// one-ebit stage of the entangled-set protocol).
struct PriorRecords {
  std::string alice;
  std::string bob;
};

// Turns raw histories into a trace: leaves keyed by both parties' records.
// By default each Alice readout must leave the kept qubits in one
// computational basis state (the overlap is checked at decode time). With
// split_readout every populated outcome of the kept qubits becomes its own
// leaf, for inputs that are superpositions of steerable members.
ProtocolTrace analyse_branches(const std::string& input_label, const std::vector<RawBranch>& raw,
                               const SteeringLayout& layout, int ebits, const PriorRecords& prior,
                               const std::vector<DyadicAngle>* angles, bool split_readout = false);

// Builds the decode table from all traces; throws DecodingFailure on a leaf
// outside the computational product basis or on a record collision.
DecodeTable build_decode_table(std::vector<ProtocolTrace>& traces, double tol = 1e-9);
std::string decode(const DecodeTable& table, const Leaf& leaf);
std::string record_key(const Leaf& leaf);

// Iterative protocol on a set built by build_A. `k` defaults to measure_I.
SteeringRun run_iterative(const StateSet& set, const std::vector<DyadicAngle>& angles,
                          std::optional<int> k = std::nullopt);

// Sampling mode: draws inputs uniformly and walks the enumerated tree.
struct SampleSummary {
  std::size_t samples = 0;
  std::vector<std::size_t> halt_counts;  // index = halt step (0: no +1 outcome)
  std::size_t decoded_correctly = 0;
};
SampleSummary sample_runs(const SteeringRun& run, std::size_t n, std::uint64_t seed);

// ------------------------------------------------------------ closed form

struct ClosedForm {
  SteeringLayout layout;
  int ebits = 0;
  int padding = 0;  // extra pairs acted on unconditionally by Bob
  Operator alice;   // on control + a_1..a_k
  Operator bob;     // on target + b_1..b_k
};

Eigen::Matrix4cd omega_matrix();  // on (B, b): I (x) |+><0| + sigma_y (x) |-><1|

ClosedForm build_closed_form(const std::vector<DyadicAngle>& angles, int k);
ClosedForm build_closed_form(const SteeringLayout& layout, const AngleSchedule& schedule);
// Adds `extra` ebits on which Bob applies Omega unconditionally.
ClosedForm pad_closed_form(const ClosedForm& cf, int extra);

// Full register (control, target, a1, b1, ..., ak, bk) input for a member.
PureState with_ebits(const PureState& member, const ClosedForm& cf);
PureState apply_closed_form(const ClosedForm& cf, const PureState& member, OpAudit* audit = nullptr);
Operator closed_form_global(const ClosedForm& cf, const Register& reg);

// Outcome distributions keyed "bob[...] alice[...]"; unused Bob ancillas
// (after the first +1) are marginalised exactly as in the iterative run.
using OutcomeDistribution = std::map<std::string, double>;
OutcomeDistribution closed_form_distribution(const ClosedForm& cf, const PureState& member);
OutcomeDistribution iterative_distribution(const ProtocolTrace& trace);

// Marginal over (control value, target bit), keyed "A=j;B=x".
std::map<std::string, double> target_marginal(const ClosedForm& cf, const PureState& member);

// -------------------------------------------------------------- ensembles

struct EnsembleOutcome {
  std::vector<ProtocolTrace> traces;
  std::map<std::string, double> distribution;  // record key -> probability
};

using MemberRunner = std::function<std::vector<ProtocolTrace>(const StateSet&)>;
EnsembleOutcome run_on_ensemble(const EnsembleSpec& spec, const MemberRunner& protocol);

}  // namespace lose
