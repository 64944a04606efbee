#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "tddiff/rational.hpp"

using namespace tddiff;

TEST_CASE("fraction strings are reduced with the sign on the numerator") {
  CHECK(to_fraction_string(Rational(0)) == "0/1");
  CHECK(to_fraction_string(Rational(-3, 6)) == "-1/2");
  CHECK(to_fraction_string(Rational(4, 2)) == "2/1");
  CHECK(to_fraction_string(Rational(7) / Rational(-21)) == "-1/3");
  CHECK(to_fraction_string(Rational(1, 3) + Rational(1, 6)) == "1/2");
}

TEST_CASE("parse accepts exactly the canonical grammar") {
  CHECK(parse_fraction("0/1") == Rational(0));
  CHECK(parse_fraction("-1/2") == Rational(-1, 2));
  CHECK(parse_fraction("10/4") == Rational(5, 2));  // non-canonical input still parses

  for (const char* bad : {"", "1", "1/", "/2", "1/0", "1/-2", "a/b", "1/2/3",
                          " 1/2", "1/2 ", "+1/2", "1.5/2", "-/2", "1//2"}) {
    CAPTURE(bad);
    CHECK_FALSE(parse_fraction(bad).has_value());
  }
}

TEST_CASE("string round trip is lossless, including very large terms") {
  std::mt19937_64 rng(20240617);
  std::uniform_int_distribution<int> digit('0', '9');
  std::uniform_int_distribution<int> first('1', '9');
  std::uniform_int_distribution<int> length(1, 40);
  // No leading zeros: BigInt's string constructor would read them as octal.
  auto random_digits = [&] {
    std::string s(1, static_cast<char>(first(rng)));
    int len = length(rng);
    for (int i = 1; i < len; ++i) s += static_cast<char>(digit(rng));
    return s;
  };
  for (int i = 0; i < 500; ++i) {
    std::string num = rng() % 20 == 0 ? "0" : random_digits();
    if (num != "0" && rng() % 2) num = "-" + num;
    BigInt n(num), d(random_digits());
    Rational r(n, d);
    auto back = parse_fraction(to_fraction_string(r));
    REQUIRE(back.has_value());
    CHECK(*back == r);
  }
}

TEST_CASE("direction follows the sign") {
  CHECK(direction_of(Rational(-1, 1000000)) == Direction::Decrease);
  CHECK(direction_of(Rational(0)) == Direction::Stable);
  CHECK(direction_of(Rational(1, 1000000)) == Direction::Increase);

  for (Direction d : {Direction::Decrease, Direction::Increase, Direction::Stable})
    CHECK(direction_from_string(to_string(d)) == d);
  CHECK_FALSE(direction_from_string("sideways").has_value());
}

TEST_CASE("double conversion is close for small fractions") {
  CHECK(to_double(Rational(1, 2)) == doctest::Approx(0.5));
  CHECK(to_double(Rational(-31, 840)) == doctest::Approx(-0.03690476190476).epsilon(1e-12));
}

TEST_CASE("arithmetic stays exact where doubles would drift") {
  Rational third(1, 3);
  Rational sum = third + third + third;
  CHECK(sum == Rational(1));
  Rational a(1, 120), b(1, 35);
  CHECK(to_fraction_string(-a - b) == "-31/840");
}
