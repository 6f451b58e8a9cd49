#include "groupprob/report.hpp"

#include <charconv>

#include <cmath>
#include <sstream>

namespace groupprob {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string exact_slack(const Rational& lhs, const Rational& rhs) {
  if (lhs == 0) return "inf";
  return format_rational(Rational(rhs / lhs));
}

nlohmann::json InequalityReport::to_json() const {
  nlohmann::json j{{"inequality", inequality},
                   {"lhs", lhs},
                   {"rhs", rhs},
                   {"constant", {{"value", constant_value}, {"formula", constant_formula}}},
                   {"satisfied", satisfied},
                   {"decided", decided},
                   {"slack", slack},
                   {"exact", exact}};
  if (lhs_interval) j["lhs_interval"] = {format_double(lhs_interval->lo), format_double(lhs_interval->hi)};
  if (rhs_interval) j["rhs_interval"] = {format_double(rhs_interval->lo), format_double(rhs_interval->hi)};
  j["witness"] = witness;
  if (!details.empty()) j["details"] = details;
  return j;
}

Comparison compare_sides(const Side& lhs, const Side& rhs) {
  Comparison c;
  const Interval& a = lhs.interval;
  const Interval& b = rhs.interval;
  if (a.hi <= 0.0) {
    c.satisfied = true;
    c.slack = "inf";
    return c;
  }
  auto ratio = [&] { return format_double(b.mid() / a.mid()); };
  if (a.hi < b.lo) {
    c.satisfied = true;
    c.slack = a.mid() > 0 ? ratio() : "inf";
    return c;
  }
  if (a.lo > b.hi) {
    c.satisfied = false;
    c.slack = ratio();
    return c;
  }
  if (lhs.exact && rhs.exact) {
    if (auto s = compare(*lhs.exact, *rhs.exact)) {
      c.satisfied = *s <= 0;
      c.tie = *s == 0;
      c.slack = c.tie ? "1" : ratio();
      return c;
    }
  }
  c.satisfied = false;
  c.decided = false;
  c.slack = a.mid() > 0 ? ratio() : "inf";
  return c;
}

}  // namespace groupprob
