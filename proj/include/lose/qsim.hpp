// Dense state-vector simulation over small party-labelled qubit registers.
//
// Ordering is big-endian by register position: the first qubit of a register
// is the most significant bit of the basis index.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lose {

using cplx = std::complex<double>;
using Amplitudes = std::vector<cplx>;

enum class Party { alice, bob };

std::string_view to_string(Party p);
Party other(Party p);

// Raised when an operator handed to apply_local touches both parties.
struct LocalityViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Qubit {
  std::string label;
  Party party;
  bool operator==(const Qubit&) const = default;
};

class Register {
 public:
  Register() = default;
  explicit Register(std::vector<Qubit> qubits);

  std::size_t size() const { return qubits_.size(); }
  std::size_t dimension() const { return std::size_t{1} << qubits_.size(); }
  const std::vector<Qubit>& qubits() const { return qubits_; }
  const Qubit& operator[](std::size_t i) const { return qubits_[i]; }

  bool contains(std::string_view label) const;
  std::size_t index_of(std::string_view label) const;
  // Bit position inside the basis index (0 = least significant).
  unsigned bit_of(std::string_view label) const;
  Party party_of(std::string_view label) const;
  std::vector<std::string> labels() const;
  std::vector<std::string> labels_of(Party p) const;

  Register concat(const Register& other) const;
  // Kept qubits in this register's order.
  Register subset(std::span<const std::string> keep) const;
  Register without(std::string_view label) const;

  bool operator==(const Register&) const = default;

 private:
  std::vector<Qubit> qubits_;
};

class PureState {
 public:
  // Validates dimension and unit norm (tolerance 1e-12).
  PureState(Register reg, Amplitudes amps);
  static PureState basis(Register reg, std::size_t index);
  // Scales `amps` to unit norm; rejects the zero vector.
  static PureState normalized(Register reg, Amplitudes amps);

  const Register& reg() const { return reg_; }
  const Amplitudes& amplitudes() const { return amps_; }
  cplx amplitude(std::size_t i) const { return amps_[i]; }
  std::size_t dimension() const { return amps_.size(); }

 private:
  Register reg_;
  Amplitudes amps_;
};

struct Operator {
  Eigen::MatrixXcd matrix;
  std::vector<std::string> acts_on;

  Operator(Eigen::MatrixXcd m, std::vector<std::string> labels);
  bool is_unitary(double tol = 1e-12) const;
  Operator adjoint() const;
};

class DensityMatrix {
 public:
  // Validates Hermiticity, unit trace and positivity.
  DensityMatrix(Register reg, Eigen::MatrixXcd m);
  static DensityMatrix from_pure(const PureState& s);

  const Register& reg() const { return reg_; }
  const Eigen::MatrixXcd& matrix() const { return m_; }

 private:
  Register reg_;
  Eigen::MatrixXcd m_;
};

class Basis {
 public:
  enum class Kind { computational, x, rotated };

  static Basis computational() { return Basis(Kind::computational, 0.0); }
  static Basis x() { return Basis(Kind::x, 0.0); }
  // Outcome +1 is |+_theta> = cos(theta)|0> + sin(theta)|1>,
  // outcome -1 is |-_theta> = sin(theta)|0> - cos(theta)|1>.
  static Basis rotated(double theta) { return Basis(Kind::rotated, theta); }

  Kind kind() const { return kind_; }
  double angle() const { return angle_; }
  // vectors()[0] belongs to outcome +1, vectors()[1] to outcome -1.
  std::pair<Eigen::Vector2cd, Eigen::Vector2cd> vectors() const;
  std::string tag() const;

 private:
  Basis(Kind k, double a) : kind_(k), angle_(a) {}
  Kind kind_;
  double angle_;
};

struct Record {
  std::string qubit;
  std::string basis;
  int outcome;  // +1 or -1
  bool operator==(const Record&) const = default;
};

struct Branch {
  std::optional<PureState> state;  // empty when the branch has probability 0
  double probability = 0.0;
  std::vector<Record> records;
};

// Projection that also removes the measured qubit from the register.
struct Collapsed {
  double probability = 0.0;
  std::optional<PureState> state;
};

PureState tensor(const PureState& a, const PureState& b);
PureState tensor(std::span<const PureState> parts);

PureState apply_local(const Operator& op, const PureState& state);
PureState apply_global(const Operator& op, const PureState& state);

std::pair<Branch, Branch> measure(const PureState& state, std::string_view qubit,
                                  const Basis& basis);
Collapsed collapse(const PureState& state, std::string_view qubit, const Basis& basis,
                   int outcome);

DensityMatrix partial_trace(const PureState& state, std::span<const std::string> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::string> keep);

double von_neumann_entropy(const DensityMatrix& rho);
double entanglement_entropy(const PureState& state, Party cut);

cplx inner_product(const PureState& a, const PureState& b);
bool equal_up_to_global_phase(const PureState& a, const PureState& b, double tol);

double ppt_min_eigenvalue(const DensityMatrix& rho, Party transpose_party);

// Same state expressed over a permutation of its register.
PureState reorder(const PureState& state, std::span<const std::string> order);

std::vector<double> probabilities(const PureState& state);

// Dense matrix of `op` embedded into the full register `reg`.
Eigen::MatrixXcd embed(const Operator& op, const Register& reg);

// For every assignment of the `condition` qubits, the unnormalised reduced
// density matrix of `keep` (all remaining qubits traced out). Blocks are
// indexed by the condition bits read big-endian in the order given.
struct ConditionalBlock {
  std::uint64_t condition_bits = 0;
  double weight = 0.0;  // trace of rho
  Eigen::MatrixXcd rho;
};
std::vector<ConditionalBlock> condition_and_reduce(const PureState& state,
                                                   std::span<const std::string> condition,
                                                   std::span<const std::string> keep);

// Extracts the bits of `index` at the given register positions, big-endian.
std::uint64_t gather_bits(std::uint64_t index, std::span<const unsigned> bit_positions);

}  // namespace lose
