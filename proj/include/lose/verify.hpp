// Executable evidence for the structural and optimality claims about the
// steering protocols. Every check is a deterministic function of its inputs
// (and seed) and returns a CheckReport carrying the measured quantities and,
// on failure, a witness.
#pragma once

#include "lose/protocol.hpp"
#include "lose/report.hpp"
#include "lose/variants.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace lose {

// ---------------------------------------------------------------- outputs

// One computational-basis term of an output state, split by party.
struct OutputTerm {
  std::string alice;  // bits of Alice's qubits, register order
  std::string bob;
  cplx amplitude;
};

// Output states of a protocol, one row per input member.
struct OutputTable {
  std::vector<std::string> labels;
  std::vector<std::vector<OutputTerm>> rows;
};

// Runs the closed form on every member and lists the non-negligible terms.
OutputTable output_table(const ClosedForm& cf, const StateSet& set, double tol = 1e-12);

// Term-by-term comparison (same strings, amplitudes within tol); the first
// mismatching entry is reported as the witness.
CheckReport compare_output_tables(const OutputTable& simulated, const OutputTable& reference, double tol = 1e-10);

// The fixed one-ebit string layout: entry (i, j) holds the (Aa, Bb) strings
// that amplitude a_ij multiplies.
using StringLayout = std::array<std::array<std::pair<std::string, std::string>, 4>, 4>;
const StringLayout& one_ebit_layout();

struct AmplitudeTable {
  Eigen::Matrix4cd a = Eigen::Matrix4cd::Zero();
  bool structural_ok = true;
  std::vector<std::string> stray;  // terms outside the layout, "row:alice|bob"

  double modulus_squared(int i, int j) const { return std::norm(a(i, j)); }
  double phase(int i, int j) const { return std::arg(a(i, j)); }
};

AmplitudeTable extract_amplitudes(const OutputTable& table);
// Requires a one-ebit closed form on (A, B, a1, b1).
AmplitudeTable extract_amplitudes(const ClosedForm& cf, const StateSet& set);

// |a_ij|^2 = 1/4 everywhere, the equal-modulus quadruples and unit rows.
CheckReport check_uniform_moduli(const AmplitudeTable& table, double tol = 1e-10);

// Within a pair of inputs Alice's strings coincide, across pairs they are
// disjoint, and for a shared Alice string Bob's strings stay disjoint.
CheckReport check_orthogonality_conditions(const OutputTable& table,
                                           const std::vector<std::pair<int, int>>& pairs = {{0, 1}, {2, 3}});

// Every input (member with ebits) and output has cut entropy `ebits`.
CheckReport check_output_entanglement(const ClosedForm& cf, const StateSet& set, double tol = 1e-9);

// ---------------------------------------------------------- nonsignaling

// The marginal of the party not touched by `local_op` after the protocol is
// the same with and without the op applied beforehand, and equals the other
// party's unitary acting on its input marginal. Throws LocalityViolation if
// the op spans both parties.
CheckReport check_nonsignaling(const ClosedForm& cf, const PureState& member, const Operator& local_op,
                               double tol = 1e-10);

// `cases` random local unitaries (alternating parties, on one or two qubits)
// applied before the protocol to random members.
CheckReport nonsignaling_suite(const ClosedForm& cf, const StateSet& set, int cases, std::uint64_t seed,
                               double tol = 1e-10);

// Alice flips A on |00>: Bob's (00,00) element equals
// cos^2(alpha)|a31|^2 + sin^2(alpha)|a43|^2 and also |a11|^2.
CheckReport check_flip_element(const ClosedForm& cf, const StateSet& set, double alpha, double tol = 1e-10);

// ------------------------------------------------------------ optimality

// max over phi of sin^2(2a)(1 + cos phi) on a grid plus the analytic value,
// and whether it reaches 2 (the value one ebit would need).
CheckReport check_one_ebit_bound(double alpha, int grid = 3600);

// Distinct eigenvalues of the product of exp(i 2^i alpha sigma_x), i = 1..k,
// against operators V (x) I with V a random unitary on k-1 qubits.
CheckReport check_spectrum_counting(int k, double alpha, int random_trials = 50, std::uint64_t seed = 1);
// Number of eigenvalues of a unitary that differ by more than tol on the unit circle.
std::size_t count_distinct_eigenvalues(const Eigen::MatrixXcd& u, double tol = 1e-10);

// Haar-random unitary (QR of a complex Gaussian matrix with phase fix).
Eigen::MatrixXcd random_unitary(Eigen::Index dim, std::mt19937_64& rng);

// W = P2 P1^dagger must factor as V_alice (x) U_bob. Both operators act on
// the register of `inputs`. Reports the factors and whether V is monomial.
CheckReport check_local_equivalence(const Operator& p1, const Operator& p2, const std::vector<PureState>& inputs,
                                    double tol = 1e-10);

// Without ancillas: the candidate map sending A[alpha] to the computational
// basis changes Bob's (1,1) element under Alice's flip; plus a restart-based
// search for the lowest worst-case error of V_A (x) U_B followed by a
// computational readout.
struct NoAncillaResult {
  double rho22_unflipped = 0.0;
  double rho22_flipped = 0.0;
  double floor = 0.0;  // best worst-case error found
  std::vector<double> best_parameters;
};
NoAncillaResult no_ancilla_search(double alpha, int restarts, std::uint64_t seed);
CheckReport check_no_ancilla_impossible(double alpha, int restarts = 100, std::uint64_t seed = 11);

// Werner family over D[pi/4]: PPT transition at F = 1/2 and steering traces
// that do not depend on F.
CheckReport check_werner_f_independence(const std::vector<DyadicAngle>& alphas, const std::vector<double>& f_grid);

// First stage of the D[alpha] protocol against the expected outcome blocks.
CheckReport check_d_stage_one(double alpha, double tol = 1e-10);

// Wraps a negative control: passes iff the wrapped check failed.
CheckReport expect_failure(CheckReport r);

// The full verify and stator suites with their default parameters. Checks
// run concurrently; the order of the result is fixed.
std::vector<CheckReport> run_verify_suite(std::uint64_t seed = 1);

}  // namespace lose
