#include <doctest.h>

#include <limits>
#include <random>

#include "dbb/rational.hpp"

using dbb::Rational;

TEST_SUITE("rational") {

TEST_CASE("construction normalizes") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-2, 4) == Rational(-1, 2));
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK(Rational(-2, -4) == Rational(1, 2));
  CHECK(Rational(0, 7) == Rational(0));
  CHECK(Rational(0, -7).den() == 1);
  CHECK_THROWS_AS(Rational(1, 0), dbb::ArithmeticError);
}

TEST_CASE("arithmetic basics") {
  CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
  CHECK(Rational(1, 2) - Rational(1, 3) == Rational(1, 6));
  CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
  CHECK(Rational(2, 3) / Rational(4, 3) == Rational(1, 2));
  CHECK(-Rational(3, 5) == Rational(-3, 5));
  CHECK_THROWS_AS(Rational(1) / Rational(0), dbb::ArithmeticError);
}

TEST_CASE("algebraic identities on random values") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> num(-50, 50);
  std::uniform_int_distribution<std::int64_t> den(1, 30);
  for (int i = 0; i < 500; ++i) {
    Rational a(num(rng), den(rng));
    Rational b(num(rng), den(rng));
    CHECK(a + b - b == a);
    CHECK(a + b == b + a);
    if (!b.is_zero()) CHECK(a * b / b == a);
    CHECK((a < b) == !(a >= b));
    CHECK((a < b || a == b || b < a));
  }
}

TEST_CASE("comparisons cross-multiply exactly") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(-1, 3));
  CHECK(Rational(7, 3) > Rational(2));
  CHECK(Rational(2, 6) <= Rational(1, 3));
  CHECK(Rational(2, 6) >= Rational(1, 3));
}

TEST_CASE("parse and str round-trip") {
  CHECK(Rational::parse("3") == Rational(3));
  CHECK(Rational::parse("-3") == Rational(-3));
  CHECK(Rational::parse("+3/6") == Rational(1, 2));
  CHECK(Rational::parse("-10/4") == Rational(-5, 2));
  CHECK(Rational(5, 3).str() == "5/3");
  CHECK(Rational(-4).str() == "-4");
  CHECK(Rational::parse(Rational(-7, 12).str()) == Rational(-7, 12));
  CHECK_THROWS_AS(Rational::parse(""), dbb::ParseError);
  CHECK_THROWS_AS(Rational::parse("1/0"), dbb::ParseError);
  CHECK_THROWS_AS(Rational::parse("1/-2"), dbb::ParseError);
  CHECK_THROWS_AS(Rational::parse("a/2"), dbb::ParseError);
  CHECK_THROWS_AS(Rational::parse("1.5"), dbb::ParseError);
}

TEST_CASE("overflow is loud") {
  const std::int64_t big = std::numeric_limits<std::int64_t>::max();
  Rational huge(big, 1);
  CHECK_THROWS_AS(huge + huge, dbb::ArithmeticError);
  CHECK_THROWS_AS(huge * Rational(2), dbb::ArithmeticError);
  CHECK(huge * Rational(1, big) == Rational(1));  // reduces back into range
}

TEST_CASE("checked_pow") {
  CHECK(dbb::checked_pow(2, 10) == 1024);
  CHECK(dbb::checked_pow(3, 0) == 1);
  CHECK_THROWS_AS(dbb::checked_pow(10, 40), dbb::ArithmeticError);
  CHECK_THROWS_AS(dbb::checked_pow(2, -1), dbb::DomainError);
}

TEST_CASE("decimal formatting rounds half to even") {
  CHECK(dbb::format_decimal(Rational(1, 3), 4) == "0.3333");
  CHECK(dbb::format_decimal(Rational(2, 3), 4) == "0.6667");
  CHECK(dbb::format_decimal(Rational(1, 2), 0) == "0");
  CHECK(dbb::format_decimal(Rational(3, 2), 0) == "2");
  CHECK(dbb::format_decimal(Rational(5, 2), 0) == "2");
  CHECK(dbb::format_decimal(Rational(1, 8), 2) == "0.12");
  CHECK(dbb::format_decimal(Rational(3, 8), 2) == "0.38");
  CHECK(dbb::format_decimal(Rational(-1, 8), 2) == "-0.12");
  CHECK(dbb::format_decimal(Rational(1, 2), 2) == "0.50");
  CHECK(dbb::format_decimal(Rational(-7), 3) == "-7.000");
  CHECK(dbb::format_decimal(Rational(0), 2) == "0.00");
  CHECK(dbb::format_decimal(Rational(-1, 1000), 2) == "0.00");
  CHECK_THROWS_AS(dbb::format_decimal(Rational(1), 19), dbb::DomainError);
}

TEST_CASE("number format switch") {
  dbb::NumberFormat exact;
  dbb::NumberFormat fixed{.decimal_digits = 3};
  CHECK(exact(Rational(1, 3)) == "1/3");
  CHECK(fixed(Rational(1, 3)) == "0.333");
}

}  // TEST_SUITE
