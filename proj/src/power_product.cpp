#include "groupprob/power_product.hpp"

#include "groupprob/error.hpp"

#include <cmath>

namespace groupprob {

PowerProduct PowerProduct::rational(const Rational& r) {
  if (r < 0) throw Error(ErrorCode::InvalidArgument, "power products are nonnegative");
  if (r == 0) return zero_value();
  return {{{r, Rational(1)}}, false};
}

PowerProduct PowerProduct::power(const Rational& base, const Rational& exponent) {
  if (base < 0) throw Error(ErrorCode::InvalidArgument, "power products need base >= 0");
  if (base == 0) {
    if (exponent <= 0) throw Error(ErrorCode::InvalidArgument, "0 to a nonpositive power");
    return zero_value();
  }
  return {{{base, exponent}}, false};
}

PowerProduct PowerProduct::operator*(const PowerProduct& other) const {
  if (zero || other.zero) return zero_value();
  PowerProduct r = *this;
  r.factors.insert(r.factors.end(), other.factors.begin(), other.factors.end());
  return r;
}

Interval PowerProduct::interval() const {
  if (zero) return Interval::point(0.0);
  Interval r = Interval::point(1.0);
  for (const auto& [base, e] : factors) {
    if (e == 0 || base == 1) continue;
    if (e > 0)
      r = r * pow(Interval::of(base), e);
    else
      r = r * pow(Interval::of(Rational(1) / base), Rational(-e));
  }
  return r;
}

std::optional<Rational> PowerProduct::as_rational() const {
  if (zero) return Rational(0);
  Rational prod = 1;
  for (const auto& [b, e] : factors) {
    // b^(a/k) is rational iff numerator and denominator of b are k-th powers.
    const mpz_class& k = e.get_den();
    if (!k.fits_ulong_p() || !e.get_num().fits_slong_p()) return std::nullopt;
    const unsigned long kk = k.get_ui();
    mpz_class rn, rd;
    if (!mpz_root(rn.get_mpz_t(), b.get_num_mpz_t(), kk) || !mpz_root(rd.get_mpz_t(), b.get_den_mpz_t(), kk))
      return std::nullopt;
    Rational root(rn, rd);
    root.canonicalize();
    const long a = e.get_num().get_si();
    if (std::labs(a) > 4096) return std::nullopt;
    prod *= rational_pow(root, a);
  }
  return prod;
}

std::string PowerProduct::to_string() const {
  if (zero) return "0";
  if (factors.empty()) return "1";
  std::string s;
  for (const auto& [base, e] : factors) {
    if (!s.empty()) s += "*";
    s += "(" + format_rational(base) + ")";
    if (e != 1) s += "^(" + format_rational(e) + ")";
  }
  return s;
}

namespace {

std::optional<Rational> raise(const PowerProduct& a, const mpz_class& l, std::size_t max_bits) {
  Rational out = 1;
  double bits = 0;
  for (const auto& [base, e] : a.factors) {
    Rational k = e * l;
    if (!is_integer(k)) return std::nullopt;
    const mpz_class kz = k.get_num();
    bits += std::fabs(kz.get_d()) * static_cast<double>(bit_size(base));
    if (bits > static_cast<double>(max_bits) || !kz.fits_slong_p()) return std::nullopt;
    out *= rational_pow(base, kz.get_si());
  }
  return out;
}

}  // namespace

std::optional<int> compare(const PowerProduct& a, const PowerProduct& b, std::size_t max_bits) {
  if (a.zero || b.zero) return a.zero && b.zero ? 0 : (a.zero ? -1 : 1);
  mpz_class l = 1;
  for (const auto* side : {&a, &b})
    for (const auto& f : side->factors) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), f.second.get_den_mpz_t());
  auto x = raise(a, l, max_bits);
  auto y = raise(b, l, max_bits);
  if (!x || !y) return std::nullopt;
  return *x < *y ? -1 : (*x > *y ? 1 : 0);
}

}  // namespace groupprob
