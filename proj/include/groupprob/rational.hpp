#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace groupprob {

using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

/// Accepts "p/q", "p", and finite decimals such as "-0.25" or "1e-3".
/// The result is canonical (reduced, positive denominator).
Rational parse_rational(std::string_view text);

/// Always "p/q", including integers ("3/1"), so serialized values are
/// self-describing.
std::string format_rational(const Rational& value);

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  Rational r(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
  r.canonicalize();
  return r;
}

bool is_integer(const Rational& value);

Rational rational_pow(const Rational& base, long exponent);

Rational rational_abs(const Rational& value);

double to_double(const Rational& value);

/// Exact rational value of a finite double.
Rational from_double(double value);

/// Bits needed to write |num| and den; used to refuse oversized exact work.
std::size_t bit_size(const Rational& value);

mpz_class lcm_of_denominators(const RationalVector& values);

std::int64_t to_int64_checked(const mpz_class& value);

}  // namespace groupprob
