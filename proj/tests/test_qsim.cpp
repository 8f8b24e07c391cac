#include "lose/gates.hpp"
#include "lose/qsim.hpp"
#include "lose/sets.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace lose;

namespace {

const double h = 1 / std::sqrt(2.0);

Register ab() { return Register({{"A", Party::alice}, {"B", Party::bob}}); }

PureState bell() { return PureState(ab(), {h, 0, 0, h}); }

}  // namespace

TEST(Register, BigEndianBitPositions) {
  const Register r({{"A", Party::alice}, {"B", Party::bob}, {"a1", Party::alice}});
  EXPECT_EQ(r.bit_of("A"), 2U);
  EXPECT_EQ(r.bit_of("a1"), 0U);
  EXPECT_EQ(r.labels_of(Party::alice), (std::vector<std::string>{"A", "a1"}));
  EXPECT_THROW(Register({{"A", Party::alice}, {"A", Party::bob}}), std::invalid_argument);
}

TEST(PureState, RejectsBadNormAndDimension) {
  EXPECT_THROW(PureState(ab(), {1, 1, 0, 0}), std::invalid_argument);
  EXPECT_THROW(PureState(ab(), {1, 0}), std::invalid_argument);
  EXPECT_NO_THROW(PureState::normalized(ab(), {1, 1, 0, 0}));
}

TEST(PureState, TensorPutsLeftFactorFirst) {
  const PureState a(Register({{"A", Party::alice}}), {0, 1});
  const PureState b(Register({{"B", Party::bob}}), {1, 0});
  const PureState ab_state = tensor(a, b);
  EXPECT_EQ(ab_state.reg().labels(), (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(ab_state.amplitude(2), cplx(1));
}

TEST(Gates, RotationConventions) {
  const double t = 0.3;
  const Eigen::Matrix2cd expected = std::cos(t) * gates::identity() + cplx(0, std::sin(t)) * gates::pauli_x();
  EXPECT_TRUE(gates::rx(t).isApprox(expected, 1e-14));
  const Eigen::Vector2cd moved = gates::rotate_y(0.4) * plus_state(0.2);
  EXPECT_TRUE(moved.isApprox(plus_state(0.6), 1e-14));
}

TEST(ApplyLocal, RejectsOperatorsSpanningBothParties) {
  EXPECT_THROW(apply_local(gates::controlled("A", "B", gates::pauli_x()), bell()), LocalityViolation);
  EXPECT_NO_THROW(apply_global(gates::controlled("A", "B", gates::pauli_x()), bell()));
}

TEST(ApplyLocal, PauliXOnAliceMovesBell) {
  const PureState out = apply_local(gates::single(gates::pauli_x(), "A"), bell());
  EXPECT_NEAR(std::abs(out.amplitude(1)), h, 1e-15);
  EXPECT_NEAR(std::abs(out.amplitude(2)), h, 1e-15);
}

TEST(Measure, PlusStateInComputationalAndXBasis) {
  const PureState plus(Register({{"B", Party::bob}}), {h, h});
  auto [p, m] = measure(plus, "B", Basis::computational());
  EXPECT_NEAR(p.probability, 0.5, 1e-15);
  EXPECT_NEAR(m.probability, 0.5, 1e-15);
  auto [xp, xm] = measure(plus, "B", Basis::x());
  EXPECT_NEAR(xp.probability, 1.0, 1e-15);
  EXPECT_FALSE(xm.state.has_value());
}

TEST(Collapse, RemovesTheMeasuredQubit) {
  const Collapsed c = collapse(bell(), "B", Basis::computational(), -1);
  ASSERT_TRUE(c.state);
  EXPECT_NEAR(c.probability, 0.5, 1e-15);
  EXPECT_EQ(c.state->reg().labels(), std::vector<std::string>{"A"});
  EXPECT_NEAR(std::abs(c.state->amplitude(1)), 1.0, 1e-15);
}

TEST(Entanglement, BellStateHasOneEbit) {
  const std::vector<std::string> keep{"A"};
  const DensityMatrix rho = partial_trace(bell(), keep);
  EXPECT_TRUE(rho.matrix().isApprox(Eigen::Matrix2cd::Identity() / 2, 1e-15));
  EXPECT_NEAR(entanglement_entropy(bell(), Party::alice), 1.0, 1e-12);
  EXPECT_NEAR(ppt_min_eigenvalue(DensityMatrix::from_pure(bell()), Party::alice), -0.5, 1e-12);
}

TEST(Reorder, SwapsRegisterOrder) {
  const PureState s(ab(), {0, 1, 0, 0});  // |0>_A |1>_B
  const std::vector<std::string> order{"B", "A"};
  const PureState r = reorder(s, order);
  EXPECT_EQ(r.amplitude(2), cplx(1));
}

TEST(Phase, EqualUpToGlobalPhase) {
  const PureState a(ab(), {h, 0, 0, h});
  const PureState b(ab(), {cplx(0, h), 0, 0, cplx(0, h)});
  EXPECT_TRUE(equal_up_to_global_phase(a, b, 1e-12));
  EXPECT_FALSE(equal_up_to_global_phase(a, PureState(ab(), {h, 0, 0, -h}), 1e-12));
}

TEST(Density, RejectsNonPositiveMatrices) {
  Eigen::Matrix2cd m;
  m << 1.5, 0, 0, -0.5;
  EXPECT_THROW(DensityMatrix(Register({{"B", Party::bob}}), m), std::invalid_argument);
}
