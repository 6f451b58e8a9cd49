#include "groupprob/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "groupprob/error.hpp"

namespace groupprob {

const Rational& Scalar::exact_value() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return *r;
  throw Error(ErrorCode::Unsupported, "scalar is not exact");
}

double Scalar::to_double() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return r->get_d();
  return std::get<double>(value_);
}

bool Scalar::is_zero() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return *r == 0;
  return std::get<double>(value_) == 0.0;
}

std::string Scalar::to_string() const {
  if (const auto* r = std::get_if<Rational>(&value_)) return format_rational(*r);
  std::ostringstream os;
  os.precision(17);
  os << std::get<double>(value_);
  return os.str();
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.exact_value() + b.exact_value()));
  return Scalar(a.to_double() + b.to_double());
}

Scalar operator*(long k, const Scalar& a) {
  if (a.is_exact()) return Scalar(Rational(Rational(k) * a.exact_value()));
  return Scalar(static_cast<double>(k) * a.to_double());
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return a.exact_value() == b.exact_value();
  return a.to_double() == b.to_double();
}

bool operator<(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return a.exact_value() < b.exact_value();
  return a.to_double() < b.to_double();
}

bool approx_equal(const Scalar& a, const Scalar& b, double abs_tol) {
  if (a.is_exact() && b.is_exact()) return a.exact_value() == b.exact_value();
  return std::fabs(a.to_double() - b.to_double()) <= abs_tol;
}

bool approx_le(const Scalar& a, const Scalar& b, double abs_tol) {
  if (a.is_exact() && b.is_exact()) return a.exact_value() <= b.exact_value();
  return a.to_double() <= b.to_double() + abs_tol;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double down(double v, int ulps = 1) {
  for (int i = 0; i < ulps; ++i) v = std::nextafter(v, -kInf);
  return v;
}

double up(double v, int ulps = 1) {
  for (int i = 0; i < ulps; ++i) v = std::nextafter(v, kInf);
  return v;
}

}  // namespace

Interval Interval::around(double v, int ulps) { return {down(v, ulps), up(v, ulps)}; }

Interval Interval::of(const Rational& r) {
  double d = r.get_d();
  if (Rational(d) == r) return point(d);
  return around(d, 1);
}

Interval operator+(const Interval& a, const Interval& b) {
  // Knuth's two-sum error term; zero means the rounded sum is exact.
  auto sum_error = [](double x, double y) {
    double s = x + y;
    double yy = s - x;
    return (x - (s - yy)) + (y - yy);
  };
  double lo = a.lo + b.lo;
  double hi = a.hi + b.hi;
  if (sum_error(a.lo, b.lo) != 0.0) lo = down(lo);
  if (sum_error(a.hi, b.hi) != 0.0) hi = up(hi);
  return {lo, hi};
}

Interval operator*(const Interval& a, const Interval& b) {
  double c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  double lo = *std::min_element(c, c + 4);
  double hi = *std::max_element(c, c + 4);
  if (lo != 0.0) lo = down(lo);
  if (hi != 0.0) hi = up(hi);
  return {lo, hi};
}

Interval pow(const Interval& x, double exponent) {
  if (exponent <= 0) throw Error(ErrorCode::InvalidArgument, "interval pow needs exponent > 0");
  auto one = [&](double v, bool lower) {
    if (v <= 0.0) return 0.0;
    if (exponent == 1.0) return v;
    double r = std::pow(v, exponent);
    return lower ? down(r, 2) : up(r, 2);
  };
  return {std::max(0.0, one(x.lo, true)), one(x.hi, false)};
}

Interval pow(const Interval& x, const Rational& exponent) {
  if (exponent <= 0) throw Error(ErrorCode::InvalidArgument, "interval pow needs exponent > 0");
  double e = exponent.get_d();
  if (Rational(e) == exponent) return pow(x, e);
  // The exponent itself is rounded: x^(e(1+d)) = x^e * x^(e d), |d| <= 2^-53.
  Interval r = pow(x, e);
  auto slack = [&](double v) {
    if (v <= 0.0) return 0.0;
    return std::fabs(std::log(v)) * std::fabs(e) * 0x1p-52;
  };
  double rel = std::max(slack(x.lo), slack(x.hi));
  return {std::max(0.0, down(r.lo * (1.0 - 2.0 * rel))), up(r.hi * (1.0 + 2.0 * rel))};
}

}  // namespace groupprob
