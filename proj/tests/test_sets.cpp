#include "lose/sets.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace lose;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(SetA, MembersAndAmplitudes) {
  const StateSet a = build_A({DyadicAngle::from_fraction(1, 8)});
  ASSERT_EQ(a.size(), 4U);
  EXPECT_EQ(a[2].label, "1+");
  EXPECT_EQ(a.reg().labels(), (std::vector<std::string>{"A", "B"}));
  EXPECT_NEAR(a[2].state.amplitude(2).real(), std::cos(kPi / 8), 1e-15);
  EXPECT_NEAR(a[2].state.amplitude(3).real(), std::sin(kPi / 8), 1e-15);
  EXPECT_NEAR(a[3].state.amplitude(2).real(), std::sin(kPi / 8), 1e-15);
  EXPECT_NEAR(a[3].state.amplitude(3).real(), -std::cos(kPi / 8), 1e-15);
}

TEST(SetA, SeveralAnglesUseAWiderControlRegister) {
  const StateSet a = build_A({DyadicAngle::from_fraction(7, 16), DyadicAngle::from_fraction(5, 16),
                              DyadicAngle::from_fraction(3, 16)});
  EXPECT_EQ(a.size(), 8U);
  EXPECT_EQ(a.reg().labels(), (std::vector<std::string>{"A0", "A1", "B"}));
  EXPECT_EQ(control_labels(1), std::vector<std::string>{"A"});
}

TEST(SetB, ComputationalProductBasis) {
  const StateSet b = build_B(1);
  ASSERT_EQ(b.size(), 4U);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(b[i].state.amplitude(i), cplx(1));
}

TEST(SetD, BellStatesAtQuarterPi) {
  const StateSet d = build_D(kPi / 4, KetOrder::alice_first);
  const double h = 1 / std::sqrt(2.0);
  EXPECT_NEAR(d[0].state.amplitude(0).real(), h, 1e-15);
  EXPECT_NEAR(d[0].state.amplitude(3).real(), h, 1e-15);
  EXPECT_NEAR(std::abs(d[3].state.amplitude(1)), h, 1e-15);
  EXPECT_NEAR(entanglement_entropy(d[2].state, Party::alice), 1.0, 1e-12);
}

TEST(SetD, KetOrderSwapsTheQubits) {
  const StateSet a = build_D(kPi / 8, KetOrder::alice_first), b = build_D(kPi / 8, KetOrder::bob_first);
  // |01> listed as |A B> and as |B A>.
  EXPECT_NEAR(std::abs(a[2].state.amplitude(1)), std::cos(kPi / 8), 1e-15);
  EXPECT_NEAR(std::abs(b[2].state.amplitude(2)), std::cos(kPi / 8), 1e-15);
}

TEST(StateSet, RejectsNonOrthogonalMembers) {
  const Register r({{"A", Party::alice}});
  EXPECT_THROW(StateSet("bad", {{"x", PureState(r, {1, 0})}, {"y", PureState::normalized(r, {1, 1})}}),
               std::invalid_argument);
}

TEST(Werner, QuarterFidelityIsMaximallyMixed) {
  const DensityMatrix w = build_werner(0.25, kPi / 4);
  EXPECT_TRUE(w.matrix().isApprox(Eigen::Matrix4cd::Identity() / 4, 1e-14));
  EXPECT_THROW(build_werner(1.5, kPi / 4), std::invalid_argument);
}

TEST(Ebits, RegisterAndEntanglement) {
  const PureState e = build_ebits(2, "a", "b", 1);
  EXPECT_EQ(e.reg().labels(), (std::vector<std::string>{"a1", "b1", "a2", "b2"}));
  EXPECT_NEAR(entanglement_entropy(e, Party::alice), 2.0, 1e-12);
}

TEST(Ensemble, ProbabilitiesMustFormADistribution) {
  const StateSet a = build_A({DyadicAngle::from_fraction(1, 4)});
  EXPECT_THROW(EnsembleSpec(a, {0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(EnsembleSpec(a, {0.5, 0.5, 0.5, -0.5}), std::invalid_argument);
  EXPECT_NO_THROW(EnsembleSpec(a, {0.25, 0.25, 0.25, 0.25}));
}

TEST(TwoEntangled, OrthogonalPair) {
  const double h = 1 / std::sqrt(2.0);
  const StateSet s = build_two_entangled({h, h}, {h, -h}, {kPi / 8});
  EXPECT_EQ(s.size(), 2U);
  EXPECT_NEAR(std::abs(inner_product(s[0].state, s[1].state)), 0.0, 1e-15);
}

TEST(Json, SetSerialisation) {
  const auto j = to_json(build_A({DyadicAngle::from_fraction(1, 4)}));
  EXPECT_EQ(j["members"].size(), 4U);
  EXPECT_EQ(j["angles"][0], "1/4pi");
}
