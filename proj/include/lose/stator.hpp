// State-operators ("stators"): operator-valued states sum_s c_s |s>_anc (x) M_s,
// where s runs over basis strings of an ancilla register and M_s acts on one
// target qubit. Stators are stored unnormalised; normalisation happens when
// one is applied to a state.
#pragma once

#include "lose/angles.hpp"
#include "lose/qsim.hpp"
#include "lose/report.hpp"

#include <string>
#include <vector>

namespace lose {

struct StatorTerm {
  std::string bits;  // one character per ancilla, register order
  Eigen::Matrix2cd op;
  cplx coefficient;
};

class Stator {
 public:
  explicit Stator(Register ancillas, std::string target = "B");

  void add(std::string bits, const Eigen::Matrix2cd& op, cplx coefficient = 1.0);

  const Register& ancillas() const { return ancillas_; }
  const std::string& target() const { return target_; }
  const std::vector<StatorTerm>& terms() const { return terms_; }

  // The linear map target -> ancillas (x) target, rows big-endian over
  // (ancillas..., target).
  Eigen::MatrixXcd matrix() const;

  // Applies the stator to a target state; the result lives on (ancillas..., target).
  PureState apply(const Eigen::Vector2cd& psi) const;
  // Applies it to the last qubit of `member` (which must be the target); the
  // result lives on (member qubits except target, ancillas..., target).
  PureState apply(const PureState& member) const;

  // M -> op * M on every term.
  Stator left_multiply(const Eigen::Matrix2cd& op) const;

  std::string to_string() const;

 private:
  Register ancillas_;
  std::string target_;
  std::vector<StatorTerm> terms_;
};

// outer o inner: registers concatenated (inner first), operators multiplied.
Stator compose(const Stator& outer, const Stator& inner);

// S_+ or S_- on a_t: |0>_a (x) I + sign |1>_a (x) sigma_y, optionally with 1/sqrt2.
Stator build_S(int t, int sign, bool normalized = false);
// |0>_{b_t} (x) S_+ + |1>_{b_t} (x) S_-, on (b_t, a_t), unnormalised.
Stator build_step_stator(int t);

// sigma_x on the ancilla versus sign * sigma_y on the target, as operators.
CheckReport check_eigen_operator(const Stator& s, int sign);

enum class Axis { x, y, z };
// exp(i theta sigma_x) on a_t applied to the step stator equals
// |0>_b (x) R(theta) S_+ + |1>_b (x) R(-theta) S_-, with R(phi) = exp(i phi sigma_axis)
// acting on the target. Only the y axis is consistent with the eigen-operator
// relation; other axes are accepted so the failure can be exhibited.
CheckReport check_rotation_propagation(double theta, Axis axis = Axis::y);

// Bob's k-ebit stator with Alice's rotation operator for the angle alpha.
// Register order is (a1, b1, ..., ak, bk); the S factors carry 1/sqrt2 so the
// stator equals Bob's closed-form unitary acting on psi (x) (Phi+)^k.
struct Superstator {
  Stator stator;
  DyadicAngle alpha;
  int ebits;
  Operator alice;  // on (A, a1, ..., ak), the same rotations as the closed form
};
Superstator build_superstator(int k, const DyadicAngle& alpha);

// Unnormalised chain S_+^(t) S_-^(t-1) ... S_-^(1) on (a1..at), or
// S_-^(t) ... S_-^(1) when all_minus is set.
Stator stator_chain(int t, bool all_minus);

// Alice's product of exp(i 2^(i-1) alpha sigma_x) on a_i turns every chain
// into a rotation of B: angle alpha for the halting chains and alpha - pi/2
// for the all-minus chain (up to a global sign).
CheckReport check_alice_identities(int k, const DyadicAngle& alpha);

// For every member of A[alpha], stator path and closed-form path agree
// amplitude by amplitude within `tol`.
CheckReport check_superstator(int k, const DyadicAngle& alpha, double tol = 1e-10);

}  // namespace lose
