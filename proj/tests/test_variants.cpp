#include "lose/variants.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace lose;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Approximate, TruncatesToTheLeadingDigits) {
  const ApproxResult r = approximate_steer(0.7, 0.005);
  EXPECT_EQ(r.msb, 7U);
  EXPECT_EQ(r.truncated, DyadicAngle::from_fraction(57, 256));
  EXPECT_EQ(r.ebits_used, 7);
  EXPECT_NEAR(r.beta, 0.7 - 57 * kPi / 256, 1e-15);
  EXPECT_NEAR(r.p_e_simulated, r.p_e_formula, 1e-12);
  EXPECT_LE(r.p_e_formula, 0.005);
  EXPECT_TRUE(r.residual_verified);
}

TEST(Approximate, CoarseEpsilonUsesNoEbits) {
  const ApproxResult r = approximate_steer(0.7, 0.3);
  EXPECT_EQ(r.ebits_used, 0);
  EXPECT_NEAR(r.p_e_formula, std::pow(std::sin(0.35), 2), 1e-15);
  EXPECT_NEAR(r.p_e_simulated, r.p_e_formula, 1e-12);
  EXPECT_NEAR(sample_discrimination_error(r, 100000, 5), r.p_e_formula, 5e-3);
}

TEST(Approximate, DyadicInputHasNoResidual) {
  const ApproxResult r = approximate_steer(3 * kPi / 16, 0.01);
  EXPECT_NEAR(r.beta, 0.0, 1e-15);
  EXPECT_NEAR(r.p_e_simulated, 0.0, 1e-15);
}

TEST(Approximate, ErrorUnderSkewedPrior) {
  const ApproxResult r = approximate_steer(0.7, 0.3);
  // Members 00 and 01 are read in a basis tilted by beta/2 from theirs, as are 1+ and 1-.
  EXPECT_NEAR(discrimination_error(r, {1, 0, 0, 0}), r.p_e_formula, 1e-12);
  EXPECT_THROW(discrimination_error(r, {1}), std::invalid_argument);
}

TEST(Approximate, PriorGridStaysBelowEpsilon) {
  for (const auto& [alpha, eps] : {std::pair{0.7, 0.005}, {0.3, 0.01}, {1.2, 0.002}}) {
    const ApproxResult r = approximate_steer(alpha, eps);
    const double steps = 5.0;
    for (int i = 0; i <= 5; ++i)
      for (int j = 0; i + j <= 5; ++j)
        for (int k = 0; i + j + k <= 5; ++k) {
          const std::vector<double> prior{i / steps, j / steps, k / steps, (5 - i - j - k) / steps};
          const double e = discrimination_error(r, prior);
          EXPECT_LE(e, eps);
          EXPECT_NEAR(e, r.p_e_formula, 1e-12);
        }
  }
}

TEST(Approximate, RejectsOutOfRangeArguments) {
  EXPECT_THROW(approximate_steer(2.0, 0.01), std::invalid_argument);
  EXPECT_THROW(approximate_steer(0.5, 0.0), std::invalid_argument);
}

TEST(EntangledSet, FirstStageBlocks) {
  for (double alpha : {kPi / 4, kPi / 8}) {
    const auto entries = d_stage_one(alpha);
    ASSERT_EQ(entries.size(), 16U);
    const StateSet d = build_D(alpha, KetOrder::bob_first);
    for (const auto& e : entries) {
      EXPECT_NEAR(e.probability, 0.25, 1e-12);
      EXPECT_TRUE(equal_up_to_global_phase(e.state, d_stage_one_expected(d.index_of(e.member), e.x_a, e.z_b, alpha),
                                           1e-10))
          << e.member << " x=" << e.x_a << " z=" << e.z_b;
    }
  }
}

TEST(EntangledSet, EbitCounts) {
  EXPECT_EQ(steer_D(DyadicAngle::from_fraction(1, 4)).ebits, 1);
  EXPECT_EQ(steer_D(DyadicAngle::from_fraction(1, 8)).ebits, 2);
  EXPECT_EQ(steer_D(DyadicAngle::from_fraction(3, 16)).ebits, 3);
  EXPECT_EQ(steer_D(DyadicAngle::from_fraction(1, 4)).decode.size(), 16U);
}

TEST(EntangledSet, EveryLeafDecodesToItsMember) {
  const DSteerResult r = steer_D(DyadicAngle::from_fraction(1, 8));
  for (const auto& tr : r.traces)
    for (const auto& br : tr.branches)
      for (const auto& leaf : br.leaves) EXPECT_EQ(leaf.decoded, tr.input_label);
}

TEST(EntangledSet, AliceFirstReadingCollidesBeyondQuarterPi) {
  EXPECT_NO_THROW(steer_D(DyadicAngle::from_fraction(1, 4), KetOrder::alice_first));
  EXPECT_THROW(steer_D(DyadicAngle::from_fraction(1, 8), KetOrder::alice_first), DecodingFailure);
}

TEST(EntangledSet, LocalAngleIsRejected) {
  EXPECT_THROW(steer_D(DyadicAngle::zero()), std::invalid_argument);
}
