#include "tddiff/rational.hpp"

#include <cctype>

namespace tddiff {

Direction direction_of(const Rational& value) {
  int s = value.sign();
  if (s < 0) return Direction::Decrease;
  if (s > 0) return Direction::Increase;
  return Direction::Stable;
}

const char* to_string(Direction d) {
  switch (d) {
    case Direction::Decrease: return "decrease";
    case Direction::Increase: return "increase";
    case Direction::Stable: return "stable";
  }
  return "stable";
}

std::optional<Direction> direction_from_string(const std::string& s) {
  if (s == "decrease") return Direction::Decrease;
  if (s == "increase") return Direction::Increase;
  if (s == "stable") return Direction::Stable;
  return std::nullopt;
}

std::string to_fraction_string(const Rational& value) {
  return numerator(value).str() + "/" + denominator(value).str();
}

std::optional<Rational> parse_fraction(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 >= text.size())
    return std::nullopt;
  std::string num = text.substr(0, slash);
  std::string den = text.substr(slash + 1);
  auto digits = [](const std::string& s, size_t from) {
    if (from >= s.size()) return false;
    for (size_t i = from; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  if (!digits(num, num[0] == '-' ? 1 : 0) || !digits(den, 0)) return std::nullopt;
  BigInt n(num), d(den);
  if (d == 0) return std::nullopt;
  return Rational(n, d);
}

double to_double(const Rational& value) {
  return value.convert_to<double>();
}

}  // namespace tddiff
