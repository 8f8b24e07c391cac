#include "lose/kernels.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

namespace {

using lose::kernels::amp_t;

std::vector<amp_t> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<amp_t> v(n);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

double max_diff(const std::vector<amp_t>& a, const std::vector<amp_t>& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

TEST(Kernels, HadamardOnLowBitOfBasisState) {
  const double h = 1 / std::sqrt(2.0);
  std::vector<amp_t> v{1, 0, 0, 0};
  const std::vector<amp_t> hm{h, h, h, -h};
  const unsigned bit = 0;
  lose::kernels::apply_matrix_serial(v, {&bit, 1}, hm);
  EXPECT_NEAR(v[0].real(), h, 1e-15);
  EXPECT_NEAR(v[1].real(), h, 1e-15);
  EXPECT_EQ(v[2], amp_t(0));
}

TEST(Kernels, TwoQubitMatrixUsesFirstBitAsMostSignificant) {
  // CNOT with control on bit 0 and target on bit 1 maps |01> (index 1) to |11> (index 3).
  std::vector<amp_t> v{0, 1, 0, 0};
  std::vector<amp_t> cnot(16, 0);
  cnot[0 + 0 * 4] = cnot[1 + 1 * 4] = cnot[3 + 2 * 4] = cnot[2 + 3 * 4] = 1;  // column-major
  const unsigned bits[2] = {0, 1};
  lose::kernels::apply_matrix_serial(v, bits, cnot);
  EXPECT_EQ(v[3], amp_t(1));
  EXPECT_EQ(v[1], amp_t(0));
}

class KernelAgreement : public ::testing::TestWithParam<std::vector<unsigned>> {};

TEST_P(KernelAgreement, SerialAndParallelAgree) {
  const auto bits = GetParam();
  const std::size_t n = std::size_t{1} << 16;
  const auto base = random_vector(n, 42);
  const std::size_t d = std::size_t{1} << bits.size();
  const auto m = random_vector(d * d, 7);
  auto a = base, b = base, c = base;
  lose::kernels::apply_matrix_serial(a, bits, m);
  lose::kernels::apply_matrix_parallel(b, bits, m);
  lose::kernels::apply_matrix(c, bits, m);
  EXPECT_LT(max_diff(a, b), 1e-12);
  EXPECT_LT(max_diff(a, c), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Positions, KernelAgreement,
                         ::testing::Values(std::vector<unsigned>{0}, std::vector<unsigned>{15}, std::vector<unsigned>{7},
                                           std::vector<unsigned>{3, 11}, std::vector<unsigned>{14, 0},
                                           std::vector<unsigned>{2, 9, 5}));

TEST(Kernels, ProbabilitiesAndNormAgree) {
  const auto v = random_vector(std::size_t{1} << 15, 3);
  std::vector<double> p1(v.size()), p2(v.size());
  lose::kernels::probabilities_serial(v, p1);
  lose::kernels::probabilities_parallel(v, p2);
  double total = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_DOUBLE_EQ(p1[i], std::norm(v[i]));
    EXPECT_NEAR(p1[i], p2[i], 1e-15);
    total += p1[i];
  }
  EXPECT_NEAR(lose::kernels::norm_squared_serial(v), total, 1e-9 * total);
  EXPECT_NEAR(lose::kernels::norm_squared_parallel(v), total, 1e-9 * total);
  EXPECT_NEAR(lose::kernels::norm_squared(v), total, 1e-9 * total);
}

}  // namespace
