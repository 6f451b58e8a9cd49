#pragma once

#include <string>
#include <variant>

#include "groupprob/rational.hpp"

namespace groupprob {

/// A nonnegative distance-like quantity: exact rational for lattice-type
/// instances, a double for the torus.
class Scalar {
 public:
  Scalar() : value_(Rational(0)) {}
  explicit Scalar(Rational value) : value_(std::move(value)) {}
  explicit Scalar(double value) : value_(value) {}

  static Scalar exact(Rational value) { return Scalar(std::move(value)); }
  static Scalar approx(double value) { return Scalar(value); }

  bool is_exact() const { return std::holds_alternative<Rational>(value_); }
  const Rational& exact_value() const;
  double to_double() const;
  bool is_zero() const;

  std::string to_string() const;

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator*(long k, const Scalar& a);

  /// Exact comparison when both sides are exact, otherwise plain double
  /// comparison. Use `approx_equal` when float round-off matters.
  friend bool operator==(const Scalar& a, const Scalar& b);
  friend bool operator<(const Scalar& a, const Scalar& b);
  friend bool operator<=(const Scalar& a, const Scalar& b) { return !(b < a); }
  friend bool operator>(const Scalar& a, const Scalar& b) { return b < a; }

 private:
  std::variant<Rational, double> value_;
};

/// |a - b| <= abs_tol, or exact equality when both are exact.
bool approx_equal(const Scalar& a, const Scalar& b, double abs_tol);

/// a <= b + abs_tol (exact when both exact).
bool approx_le(const Scalar& a, const Scalar& b, double abs_tol);

/// Closed interval of doubles. Arithmetic widens results outward by a few
/// ulps, which over-covers the rounding of the libm calls used here.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval point(double v) { return {v, v}; }
  static Interval around(double v, int ulps = 1);
  static Interval of(const Rational& r);

  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double v) const { return lo <= v && v <= hi; }

  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
};

/// x^e for x >= 0, e > 0.
Interval pow(const Interval& x, double exponent);
Interval pow(const Interval& x, const Rational& exponent);

}  // namespace groupprob
