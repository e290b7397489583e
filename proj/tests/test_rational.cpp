#include <doctest.h>

#include <stdexcept>

#include "homc/rational.hpp"

using homc::Rational;

TEST_CASE("rational arithmetic stays reduced") {
  Rational a(1, 3);
  Rational b(1, 6);
  CHECK(a + b == Rational(1, 2));
  CHECK(a - b == Rational(1, 6));
  CHECK(a * b == Rational(1, 18));
  CHECK(a / b == Rational(2));
  CHECK((a + b).num() == 1);
  CHECK((a + b).den() == 2);
  CHECK(-a == Rational(-1, 3));
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK(Rational(0, 7) == Rational(0));
  CHECK(Rational(0).den() == 1);
}

TEST_CASE("rational ordering") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(0));
  CHECK(Rational(2, 3) > Rational(1, 2));
  CHECK(Rational(5, 10) <= Rational(1, 2));
  CHECK(homc::abs(Rational(-3, 4)) == Rational(3, 4));
}

TEST_CASE("rational parsing") {
  CHECK(Rational::parse("2/6") == Rational(1, 3));
  CHECK(Rational::parse("-3/4") == Rational(-3, 4));
  CHECK(Rational::parse("7") == Rational(7));
  CHECK(Rational::parse("0.5") == Rational(1, 2));
  CHECK(Rational::parse("-0.25") == Rational(-1, 4));
  CHECK(Rational::parse("1.125") == Rational(9, 8));
  CHECK_THROWS_AS(Rational::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("x/y"), std::invalid_argument);
  CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
}

TEST_CASE("rational canonical string") {
  CHECK(Rational(1, 3).str() == "1/3");
  CHECK(Rational(0).str() == "0/1");
  CHECK(Rational(-2, 8).str() == "-1/4");
  CHECK(Rational::parse(Rational(22, 7).str()) == Rational(22, 7));
}

TEST_CASE("rational overflow detection") {
  const Rational huge(std::int64_t{1} << 62);
  CHECK_THROWS_AS(huge * huge, std::overflow_error);
  const Rational fine(1, std::int64_t{1} << 40);
  CHECK_THROWS_AS(fine * fine * fine, std::overflow_error);
  CHECK_THROWS_AS(Rational(0) / Rational(0), std::invalid_argument);
}

TEST_CASE("rational to_double") {
  CHECK(Rational(1, 2).to_double() == 0.5);
  CHECK(Rational(1, 3).to_double() == 1.0 / 3.0);
}
