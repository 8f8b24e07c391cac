#include "lose/angles.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lose {

DyadicAngle DyadicAngle::from_bits(std::uint64_t m, unsigned k) {
  if (k == 0 || k > kMaxBits) throw std::invalid_argument("dyadic angle: bit count out of range");
  m &= (std::uint64_t{1} << k) - 1;
  if (m == 0) return {};
  while ((m & 1U) == 0) {
    m >>= 1;
    --k;
  }
  return DyadicAngle(m, k);
}

DyadicAngle DyadicAngle::from_fraction(std::int64_t p, std::int64_t q) {
  if (q < 2 || !std::has_single_bit(static_cast<std::uint64_t>(q)))
    throw std::invalid_argument("dyadic angle: denominator must be a power of two >= 2");
  // 2*alpha/pi = 2p/q = p / 2^(j-1) with q = 2^j.
  const auto j = static_cast<unsigned>(std::countr_zero(static_cast<std::uint64_t>(q)));
  if (j == 1) return {};
  const unsigned k = j - 1;
  if (k > kMaxBits) throw std::invalid_argument("dyadic angle: denominator too large");
  const auto mod = static_cast<std::int64_t>(std::uint64_t{1} << k);
  const std::int64_t r = ((p % mod) + mod) % mod;
  return from_bits(static_cast<std::uint64_t>(r), k);
}

double DyadicAngle::radians() const {
  return std::numbers::pi * static_cast<double>(m_) / std::ldexp(1.0, static_cast<int>(k_) + 1);
}

std::string DyadicAngle::bit_string(unsigned width) const {
  const unsigned len = intrinsic_length();
  if (width == 0) width = len;
  if (width < len) throw std::invalid_argument("dyadic angle: width below intrinsic length");
  if (width == 0) return "0";
  std::string s(width, '0');
  for (unsigned i = 0; i < len; ++i)
    if ((m_ >> (len - 1 - i)) & 1U) s[i] = '1';
  return s;
}

std::string DyadicAngle::literal() const {
  if (m_ == 0) return "0";
  return std::to_string(m_) + "/" + std::to_string(std::uint64_t{1} << (k_ + 1)) + "pi";
}

DyadicAngle double_mod(const DyadicAngle& a) {
  if (a.intrinsic_length() <= 1) return DyadicAngle::zero();
  return DyadicAngle::from_bits(a.numerator(), a.bits() - 1);
}

unsigned measure_I(std::span<const DyadicAngle> angles) {
  if (angles.empty()) throw std::invalid_argument("measure_I: empty angle list");
  unsigned best = 0;
  for (const auto& a : angles) best = std::max(best, a.intrinsic_length());
  return best;
}

AngleTable build_table(std::span<const DyadicAngle> angles) {
  AngleTable t;
  t.width = std::max(1U, measure_I(angles));
  for (std::size_t i = 0; i < angles.size(); ++i)
    t.rows.push_back(AngleRow{i + 1, angles[i], angles[i].bit_string(t.width)});
  return t;
}

AngleTable double_table(const AngleTable& t) {
  AngleTable out;
  out.width = std::max(1U, t.width - 1);
  for (const auto& r : t.rows) {
    const DyadicAngle d = double_mod(r.angle);
    out.rows.push_back(AngleRow{r.index, d, d.bit_string(out.width)});
  }
  return out;
}

unsigned msb_position(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("msb_position: epsilon must lie in (0,1)");
  int e = 0;
  std::frexp(2.0 * epsilon, &e);  // 2*eps in [2^(e-1), 2^e)
  return e >= 1 ? 0U : static_cast<unsigned>(1 - e);
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty())
    throw std::invalid_argument("angle literal: bad integer in '" + std::string(whole) + "'");
  return v;
}

}  // namespace

AngleLiteral parse_angle_literal(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("angle literal: empty");
  if (s == "0") return DyadicAngle::zero();
  std::string compact;
  for (char c : s)
    if (c != ' ') compact += c;
  if (compact.size() >= 2 && compact.compare(compact.size() - 2, 2, "pi") == 0) {
    const std::string body = compact.substr(0, compact.size() - 2);
    if (body.empty()) return DyadicAngle::zero();  // pi itself reduces to 0 mod pi/2
    const auto slash = body.find('/');
    if (slash == std::string::npos)
      return DyadicAngle::from_fraction(parse_int(body, s), 2);  // integer multiples of pi
    return DyadicAngle::from_fraction(parse_int(body.substr(0, slash), s),
                                      parse_int(body.substr(slash + 1), s));
  }
  if (compact.rfind("pi/", 0) == 0) return DyadicAngle::from_fraction(1, parse_int(compact.substr(3), s));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(compact, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("angle literal: cannot parse '" + s + "'");
  }
  if (used != compact.size() || !std::isfinite(v))
    throw std::invalid_argument("angle literal: cannot parse '" + s + "'");
  return v;
}

std::vector<AngleLiteral> parse_angle_list(std::string_view text) {
  std::vector<AngleLiteral> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_angle_literal(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace lose
