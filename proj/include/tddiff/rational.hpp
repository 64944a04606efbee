// Exact rational arithmetic used for all density math.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace tddiff {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

enum class Direction { Decrease, Increase, Stable };

Direction direction_of(const Rational& value);
const char* to_string(Direction d);
std::optional<Direction> direction_from_string(const std::string& s);

// Canonical form "num/den": reduced, den >= 1, sign on the numerator.
// Zero is "0/1". Round-trips losslessly through parse_fraction.
std::string to_fraction_string(const Rational& value);
std::optional<Rational> parse_fraction(const std::string& text);

double to_double(const Rational& value);

}  // namespace tddiff
