#include "lose/angles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace lose;

namespace {

std::vector<DyadicAngle> four_angle_list() {
  return {DyadicAngle::from_fraction(7, 16), DyadicAngle::from_fraction(5, 16), DyadicAngle::from_fraction(3, 16),
          DyadicAngle::from_fraction(1, 4)};
}

std::vector<std::string> column(const AngleTable& t) {
  std::vector<std::string> out;
  for (const auto& r : t.rows) out.push_back(r.bits);
  return out;
}

}  // namespace

TEST(DyadicAngle, ExpansionAndLiteral) {
  const auto a = DyadicAngle::from_fraction(7, 16);
  EXPECT_EQ(a.bit_string(), "111");
  EXPECT_EQ(a.intrinsic_length(), 3U);
  EXPECT_EQ(a.literal(), "7/16pi");
  EXPECT_NEAR(a.radians(), 7 * std::numbers::pi / 16, 1e-15);
  EXPECT_EQ(DyadicAngle::from_fraction(1, 4).bit_string(), "1");
  EXPECT_EQ(DyadicAngle::from_fraction(1, 4).bit_string(3), "100");
}

TEST(DyadicAngle, ReducesModuloHalfPi) {
  EXPECT_EQ(DyadicAngle::from_fraction(5, 4), DyadicAngle::from_fraction(1, 4));
  EXPECT_TRUE(DyadicAngle::from_fraction(1, 2).is_zero());
  EXPECT_THROW(DyadicAngle::from_fraction(1, 3), std::invalid_argument);
}

TEST(DyadicAngle, DoublingShiftsTheExpansion) {
  EXPECT_EQ(double_mod(DyadicAngle::from_fraction(1, 8)), DyadicAngle::from_fraction(1, 4));
  EXPECT_TRUE(double_mod(DyadicAngle::from_fraction(1, 4)).is_zero());
  EXPECT_EQ(double_mod(DyadicAngle::from_fraction(7, 16)).bit_string(), "11");
}

TEST(MeasureI, LongestExpansion) {
  const auto angles = four_angle_list();
  EXPECT_EQ(measure_I(angles), 3U);
  const std::vector<DyadicAngle> zero{DyadicAngle::zero()};
  EXPECT_EQ(measure_I(zero), 0U);
}

TEST(AngleTable, FirstTableAndDoublings) {
  const auto angles = four_angle_list();
  const AngleTable t1 = build_table(angles);
  EXPECT_EQ(column(t1), (std::vector<std::string>{"111", "101", "011", "100"}));
  const AngleTable t2 = double_table(t1);
  EXPECT_EQ(column(t2), (std::vector<std::string>{"11", "01", "11", "00"}));
  const AngleTable t3 = double_table(t2);
  EXPECT_EQ(column(t3), (std::vector<std::string>{"1", "1", "1", "0"}));
}

TEST(MsbPosition, LeadingDigitOfTwiceEpsilon) {
  EXPECT_EQ(msb_position(0.005), 7U);  // 2e = 0.01, 2^-7 <= 0.01 < 2^-6
  EXPECT_EQ(msb_position(0.25), 1U);
  EXPECT_EQ(msb_position(0.6), 0U);
}

TEST(AngleLiteral, Grammar) {
  EXPECT_EQ(std::get<DyadicAngle>(parse_angle_literal("3/16pi")), DyadicAngle::from_fraction(3, 16));
  EXPECT_EQ(std::get<DyadicAngle>(parse_angle_literal("pi/4")), DyadicAngle::from_fraction(1, 4));
  EXPECT_TRUE(std::get<DyadicAngle>(parse_angle_literal("0")).is_zero());
  EXPECT_DOUBLE_EQ(std::get<double>(parse_angle_literal("0.3")), 0.3);
  EXPECT_THROW(parse_angle_literal("1/3pi"), std::invalid_argument);
  EXPECT_THROW(parse_angle_literal("abc"), std::invalid_argument);
  EXPECT_EQ(parse_angle_list("7/16pi, 1/4pi").size(), 2U);
}
