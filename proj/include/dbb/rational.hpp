#pragma once

#include <charconv>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "dbb/errors.hpp"

namespace dbb {

namespace detail {

using Int128 = __int128;

inline Int128 abs128(Int128 v) { return v < 0 ? -v : v; }

inline Int128 gcd128(Int128 a, Int128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    Int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace detail

// Exact rational with 64-bit numerator and positive 64-bit denominator,
// stored in lowest terms. Intermediates run in 128 bits; a reduced result
// outside the 64-bit range throws ArithmeticError rather than wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t value) : num_(value) {}  // NOLINT: implicit by design
  Rational(std::int64_t num, std::int64_t den) { assign(num, den); }

  static Rational from_int128(detail::Int128 num, detail::Int128 den) {
    Rational r;
    r.assign(num, den);
    return r;
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  int sign() const { return num_ < 0 ? -1 : num_ > 0 ? 1 : 0; }

  Rational abs() const { return num_ < 0 ? -*this : *this; }

  friend Rational operator-(const Rational& a) {
    return from_int128(-detail::Int128(a.num_), a.den_);
  }
  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_int128(
        detail::Int128(a.num_) * b.den_ + detail::Int128(b.num_) * a.den_,
        detail::Int128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from_int128(
        detail::Int128(a.num_) * b.den_ - detail::Int128(b.num_) * a.den_,
        detail::Int128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_int128(detail::Int128(a.num_) * b.num_,
                       detail::Int128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw ArithmeticError("division by zero");
    return from_int128(detail::Int128(a.num_) * b.den_,
                       detail::Int128(a.den_) * b.num_);
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) {
    return !(a == b);
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return detail::Int128(a.num_) * b.den_ < detail::Int128(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return !(b < a);
  }
  friend bool operator>=(const Rational& a, const Rational& b) {
    return !(a < b);
  }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  std::string str() const {
    std::string s = std::to_string(num_);
    if (den_ != 1) {
      s += '/';
      s += std::to_string(den_);
    }
    return s;
  }

  // Accepts `num` or `num/den`, optional leading sign on the numerator,
  // denominator a positive integer.
  static Rational parse(std::string_view text) {
    auto bad = [&](const char* why) {
      return ParseError("bad rational '" + std::string(text) + "': " + why);
    };
    std::size_t slash = text.find('/');
    std::string_view num_part =
        slash == std::string_view::npos ? text : text.substr(0, slash);
    std::int64_t num = 0;
    if (!parse_int(num_part, num)) throw bad("malformed numerator");
    if (slash == std::string_view::npos) return Rational(num);
    std::string_view den_part = text.substr(slash + 1);
    if (den_part.empty() || den_part[0] == '+' || den_part[0] == '-')
      throw bad("denominator must be a plain positive integer");
    std::int64_t den = 0;
    if (!parse_int(den_part, den)) throw bad("malformed denominator");
    if (den == 0) throw bad("zero denominator");
    return Rational(num, den);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
  }

 private:
  static bool parse_int(std::string_view s, std::int64_t& out) {
    if (!s.empty() && s[0] == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
  }

  void assign(detail::Int128 num, detail::Int128 den) {
    if (den == 0) throw ArithmeticError("zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    if (num == 0) {
      num_ = 0;
      den_ = 1;
      return;
    }
    detail::Int128 g = detail::gcd128(num, den);
    num /= g;
    den /= g;
    constexpr detail::Int128 kMax = std::numeric_limits<std::int64_t>::max();
    constexpr detail::Int128 kMin = std::numeric_limits<std::int64_t>::min();
    if (num > kMax || num < kMin || den > kMax)
      throw ArithmeticError("rational overflows 64-bit storage");
    num_ = static_cast<std::int64_t>(num);
    den_ = static_cast<std::int64_t>(den);
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// base^exp with overflow detection.
inline std::int64_t checked_pow(std::int64_t base, int exp) {
  if (exp < 0) throw DomainError("checked_pow: negative exponent");
  detail::Int128 acc = 1;
  constexpr detail::Int128 kMax = std::numeric_limits<std::int64_t>::max();
  for (int i = 0; i < exp; ++i) {
    acc *= base;
    if (acc > kMax || acc < -kMax)
      throw ArithmeticError("integer power overflows 64 bits");
  }
  return static_cast<std::int64_t>(acc);
}

// Fixed-point decimal rendering with round-half-to-even, `digits` in [0, 18].
inline std::string format_decimal(const Rational& r, int digits) {
  if (digits < 0 || digits > 18)
    throw DomainError("decimal digits must be in [0, 18]");
  detail::Int128 scale = checked_pow(10, digits);
  detail::Int128 num = detail::abs128(r.num());
  detail::Int128 den = r.den();
  detail::Int128 scaled = num * scale;
  detail::Int128 q = scaled / den;
  detail::Int128 rem = scaled % den;
  if (2 * rem > den) {
    ++q;
  } else if (2 * rem == den && (q % 2) != 0) {
    ++q;  // tie: round to even
  }
  detail::Int128 whole = q / scale;
  detail::Int128 frac = q % scale;
  std::string out;
  if (r.num() < 0 && q != 0) out += '-';
  out += std::to_string(static_cast<long long>(whole));
  if (digits > 0) {
    std::string f = std::to_string(static_cast<long long>(frac));
    out += '.';
    out += std::string(static_cast<std::size_t>(digits) - f.size(), '0');
    out += f;
  }
  return out;
}

// Presentation switch shared by table and report writers: exact `p/q` by
// default, fixed decimals when requested. The core always stays exact.
struct NumberFormat {
  std::optional<int> decimal_digits;
  std::string operator()(const Rational& r) const {
    return decimal_digits ? format_decimal(r, *decimal_digits) : r.str();
  }
};

}  // namespace dbb
