// Steering beyond exact product sets: truncated (approximate) steering of
// non-dyadic angles, and the two-stage protocol for the entangled set D[alpha].
#pragma once

#include "lose/protocol.hpp"

#include <cstdint>
#include <vector>

namespace lose {

struct ApproxResult {
  double alpha = 0.0;
  double epsilon = 0.0;
  unsigned msb = 0;         // msb_position(epsilon)
  DyadicAngle truncated;    // leading msb digits of alpha
  int ebits_used = 0;       // intrinsic length of `truncated`
  double beta = 0.0;        // residual angle alpha - truncated
  double p_e_formula = 0.0;     // sin^2(beta/2)
  double p_e_simulated = 0.0;   // exact error of the simulated run, equal priors
  bool residual_verified = false;  // every branch holds A[beta] up to relabelling
  // Per member (00, 01, 1+, 1-): list of (probability, Bob guessed correctly).
  std::vector<std::vector<std::pair<double, bool>>> outcomes;
};

// Steers A[alpha] with the ebits needed for the digits of alpha down to the
// leading digit of 2*epsilon, then lets Bob measure B at angle beta/2.
// alpha must lie in [0, pi/2) and epsilon in (0, 1).
ApproxResult approximate_steer(double alpha, double epsilon);

// Error probability for a prior over the four members.
double discrimination_error(const ApproxResult& r, const std::vector<double>& prior);
// Monte Carlo estimate with n draws of (member, outcome).
double sample_discrimination_error(const ApproxResult& r, std::size_t n, std::uint64_t seed,
                                   const std::vector<double>& prior = {0.25, 0.25, 0.25, 0.25});

// ------------------------------------------------------------- D[alpha]

// One cell of the first-stage map: member, Alice's x outcome on a0 and Bob's
// z outcome on b0, with the resulting (A, B) state.
struct DStageEntry {
  std::string member;
  int x_a = 0;
  int z_b = 0;
  double probability = 0.0;
  PureState state;
};

// Runs the first stage (nonlocal CNOT B -> A via one ebit, then Bob's
// y rotation by alpha) and measures a0 in the x basis.
std::vector<DStageEntry> d_stage_one(double alpha, KetOrder order = KetOrder::bob_first);
// The expected first-stage output for member index 0..3.
PureState d_stage_one_expected(std::size_t member, int x_a, int z_b, double alpha);

struct DSteerResult {
  int ebits = 0;
  std::vector<ProtocolTrace> traces;
  DecodeTable decode;
};

// Full steering of D[alpha] to computational product states: stage one, then
// the iterative protocol with control a0 on the doubled angle. Throws for
// alpha with no nonlocality (I(alpha) = 0) and DecodingFailure if the
// readouts do not identify the member.
DSteerResult steer_D(const DyadicAngle& alpha, KetOrder order = KetOrder::bob_first);
// Same, for an arbitrary set on (A, B); used for the Werner ensemble.
DSteerResult steer_D_set(const StateSet& set, const DyadicAngle& alpha);

}  // namespace lose
