// Exact dyadic angles. An angle alpha is stored as integers (m, k) with
// alpha = pi * m / 2^(k+1), so the k-bit binary expansion of m is the
// expansion of 2*alpha/pi mod 1. Radians are only ever a derived view.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lose {

class DyadicAngle {
 public:
  static constexpr unsigned kMaxBits = 62;

  DyadicAngle() = default;  // zero
  // alpha = pi*p/q reduced mod pi/2; q must be a power of two >= 2.
  static DyadicAngle from_fraction(std::int64_t p, std::int64_t q);
  // alpha = pi*m/2^(k+1); m is reduced mod 2^k and canonicalised.
  static DyadicAngle from_bits(std::uint64_t m, unsigned k);
  static DyadicAngle zero() { return {}; }

  std::uint64_t numerator() const { return m_; }
  unsigned bits() const { return k_; }
  unsigned intrinsic_length() const { return m_ == 0 ? 0 : k_; }
  bool is_zero() const { return m_ == 0; }
  double radians() const;

  // MSB-first expansion, padded with trailing zeros to `width` (>= intrinsic
  // length). Width 0 means the intrinsic length; zero then prints as "0".
  std::string bit_string(unsigned width = 0) const;
  // Text form "p/q pi" with the smallest denominator.
  std::string literal() const;

  bool operator==(const DyadicAngle&) const = default;

 private:
  DyadicAngle(std::uint64_t m, unsigned k) : m_(m), k_(k) {}
  std::uint64_t m_ = 0;
  unsigned k_ = 1;
};

// 2*alpha mod pi/2: the expansion shifted left by one place.
DyadicAngle double_mod(const DyadicAngle& a);

// Information nonlocality of a set: the longest intrinsic expansion.
unsigned measure_I(std::span<const DyadicAngle> angles);

struct AngleRow {
  std::size_t index;
  DyadicAngle angle;
  std::string bits;
};

struct AngleTable {
  unsigned width = 1;
  std::vector<AngleRow> rows;
};

AngleTable build_table(std::span<const DyadicAngle> angles);
// Table of the doubled angles, one column narrower (never below width 1).
AngleTable double_table(const AngleTable& t);

// 1-based position of the leading 1 in the fractional binary expansion of
// 2*epsilon; 0 when 2*epsilon >= 1.
unsigned msb_position(double epsilon);

// Angle literal grammar: "p/q pi", "p/qpi", "pi/q", "pi", "0" for dyadic
// angles; any other decimal number is radians.
using AngleLiteral = std::variant<DyadicAngle, double>;
AngleLiteral parse_angle_literal(std::string_view text);
std::vector<AngleLiteral> parse_angle_list(std::string_view text);

}  // namespace lose
