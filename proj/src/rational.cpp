#include "groupprob/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "groupprob/error.hpp"

namespace groupprob {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InstanceMismatch: return "instance_mismatch";
    case ErrorCode::MalformedJson: return "malformed_json";
    case ErrorCode::UnknownKind: return "unknown_kind";
    case ErrorCode::InvalidParameter: return "invalid_parameter";
    case ErrorCode::InvalidPower: return "invalid_power";
    case ErrorCode::BoundRequired: return "bound_required";
    case ErrorCode::PowerOverflow: return "power_overflow";
    case ErrorCode::DuplicateIdempotent: return "duplicate_idempotent";
    case ErrorCode::Unsupported: return "unsupported";
    case ErrorCode::GateNotPassed: return "gate_not_passed";
    case ErrorCode::NotNormed: return "not_normed";
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::TooLarge: return "too_large";
    case ErrorCode::UnknownLetter: return "unknown_letter";
    case ErrorCode::UnknownFormat: return "unknown_format";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

namespace {

[[noreturn]] void bad_rational(std::string_view text) {
  throw Error(ErrorCode::InvalidParameter, "not a rational: '" + std::string(text) + "'");
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) bad_rational(whole);
  mpz_class v(std::string(s), 10);
  return neg ? mpz_class(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) bad_rational(text);

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(s.substr(0, slash), text);
    std::string_view den_text = s.substr(slash + 1);
    if (!all_digits(den_text)) bad_rational(text);
    mpz_class den(std::string(den_text), 10);
    if (den == 0) bad_rational(text);
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  // Decimal with optional exponent.
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    mpz_class ev = parse_integer(exp_text, text);
    if (!ev.fits_slong_p() || abs(ev) > 4096) bad_rational(text);
    exponent = ev.get_si();
    s = s.substr(0, e);
  }
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot);
    std::string_view fp = s.substr(dot + 1);
    if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) ||
        (ip.empty() && fp.empty()))
      bad_rational(text);
    digits = std::string(ip) + std::string(fp);
    exponent -= static_cast<long>(fp.size());
  } else {
    if (!all_digits(s)) bad_rational(text);
    digits = std::string(s);
  }
  if (digits.empty()) bad_rational(text);
  Rational r{mpz_class(digits, 10)};
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  if (exponent >= 0)
    r *= ten_pow;
  else
    r /= ten_pow;
  r.canonicalize();
  return neg ? Rational(-r) : r;
}

std::string format_rational(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

bool is_integer(const Rational& value) { return value.get_den() == 1; }

Rational rational_pow(const Rational& base, long exponent) {
  if (exponent < 0) {
    if (base == 0) throw Error(ErrorCode::InvalidArgument, "zero to a negative power");
    return rational_pow(Rational(1) / base, -exponent);
  }
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational rational_abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

double to_double(const Rational& value) { return value.get_d(); }

Rational from_double(double value) {
  if (!std::isfinite(value)) throw Error(ErrorCode::InvalidArgument, "non-finite double");
  Rational r(value);
  r.canonicalize();
  return r;
}

std::size_t bit_size(const Rational& value) {
  return mpz_sizeinbase(value.get_num_mpz_t(), 2) + mpz_sizeinbase(value.get_den_mpz_t(), 2);
}

mpz_class lcm_of_denominators(const RationalVector& values) {
  mpz_class l = 1;
  for (const auto& v : values) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  return l;
}

std::int64_t to_int64_checked(const mpz_class& value) {
  if (!value.fits_slong_p()) throw Error(ErrorCode::TooLarge, "integer exceeds 64 bits");
  return value.get_si();
}

}  // namespace groupprob
