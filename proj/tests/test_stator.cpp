#include "lose/gates.hpp"
#include "lose/protocol.hpp"
#include "lose/stator.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace lose;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Stator, StepStatorStructure) {
  const Stator s = build_step_stator(1);
  EXPECT_EQ(s.terms().size(), 4U);
  EXPECT_EQ(s.ancillas().labels(), (std::vector<std::string>{"b1", "a1"}));
}

TEST(Stator, SPlusOnZero) {
  const PureState out = build_S(1, +1).apply(Eigen::Vector2cd(1, 0));
  const double h = 1 / std::sqrt(2.0);
  EXPECT_NEAR(out.amplitude(0).real(), h, 1e-15);  // |0>_a |0>_B
  EXPECT_NEAR(out.amplitude(3).imag(), h, 1e-15);  // i |1>_a |1>_B
}

TEST(Stator, StepStatorMatchesDeferredCircuit) {
  // Bob's CNOT followed by a Hadamard on b1 in place of his x measurement.
  const PureState in = tensor(PureState(Register({{"B", Party::bob}}), {1, 0}), build_ebits(1, "a", "b", 1));
  PureState s = apply_global(bob_cnot("b1", "B"), in);
  s = apply_global(gates::single(gates::hadamard(), "b1"), s);
  const std::vector<std::string> order{"b1", "a1", "B"};
  const PureState circuit = reorder(s, order);
  const PureState stator = build_step_stator(1).apply(Eigen::Vector2cd(1, 0));
  EXPECT_TRUE(equal_up_to_global_phase(circuit, stator, 1e-12));
}

TEST(Stator, EigenOperatorSigns) {
  EXPECT_TRUE(check_eigen_operator(build_S(2, +1), +1).passed);
  EXPECT_TRUE(check_eigen_operator(build_S(2, -1), -1).passed);
  EXPECT_FALSE(check_eigen_operator(build_S(2, +1), -1).passed);
  Stator bad(Register({{"a1", Party::bob}}));
  bad.add("0", gates::identity());
  bad.add("1", gates::pauli_x());
  EXPECT_FALSE(check_eigen_operator(bad, +1).passed);
}

TEST(Stator, PropagationIsAlongY) {
  for (double th : {0.0, kPi / 4, kPi / 2, 0.37}) EXPECT_TRUE(check_rotation_propagation(th, Axis::y).passed) << th;
  EXPECT_FALSE(check_rotation_propagation(kPi / 4, Axis::x).passed);
  EXPECT_TRUE(check_rotation_propagation(0.0, Axis::x).passed);  // identity on both sides
}

TEST(Superstator, TermCount) {
  // Halting chain with b1 = 0 and the all-minus chain with b1 = 1, two a1 strings each.
  EXPECT_EQ(build_superstator(1, DyadicAngle::from_fraction(1, 4)).stator.terms().size(), 4U);
}

TEST(Superstator, AgreesWithClosedFormUpToFourEbits) {
  for (unsigned k = 1; k <= 4; ++k)
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << k); m += 2) {
      const auto a = DyadicAngle::from_bits(m, k);
      EXPECT_TRUE(check_superstator(static_cast<int>(k), a).passed) << a.literal();
      EXPECT_TRUE(check_alice_identities(static_cast<int>(k), a).passed) << a.literal();
    }
}

TEST(Stator, PrettyPrinterListsTerms) {
  const std::string s = build_S(1, -1).to_string();
  EXPECT_NE(s.find("|1>"), std::string::npos);
}
