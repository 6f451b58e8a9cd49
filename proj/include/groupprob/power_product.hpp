#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "groupprob/rational.hpp"
#include "groupprob/scalar.hpp"

namespace groupprob {

/// An exactly known positive real prod_i base_i^exponent_i with rational
/// bases > 0 and rational exponents, or zero.
struct PowerProduct {
  std::vector<std::pair<Rational, Rational>> factors;
  bool zero = false;

  static PowerProduct zero_value() { return {{}, true}; }
  static PowerProduct rational(const Rational& r);
  static PowerProduct power(const Rational& base, const Rational& exponent);

  PowerProduct operator*(const PowerProduct& other) const;
  Interval interval() const;
  /// The exact value when every factor is a rational power.
  std::optional<Rational> as_rational() const;
  std::string to_string() const;
};

/// Sign of a - b, decided exactly by raising both sides to the least common
/// multiple of the exponent denominators. Empty when the integers involved
/// would exceed `max_bits`.
std::optional<int> compare(const PowerProduct& a, const PowerProduct& b, std::size_t max_bits = 1U << 20);

}  // namespace groupprob
