#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "groupprob/power_product.hpp"
#include "groupprob/scalar.hpp"

namespace groupprob {

/// Verdict for one inequality check, serialized as JSON with exact values as
/// "p/q" strings and floats flagged by "exact": false.
struct InequalityReport {
  std::string inequality;
  std::string lhs;
  std::string rhs;
  std::optional<Interval> lhs_interval;
  std::optional<Interval> rhs_interval;
  std::string constant_value = "1";
  std::string constant_formula;
  bool satisfied = false;
  /// False when rounding left the comparison open; such a report is
  /// never counted as satisfied.
  bool decided = true;
  std::string slack;
  bool exact = true;
  nlohmann::json witness = nullptr;
  nlohmann::json details = nlohmann::json::object();

  nlohmann::json to_json() const;
};

std::string format_double(double v);

/// rhs / lhs as an exact rational, or "inf" when lhs = 0.
std::string exact_slack(const Rational& lhs, const Rational& rhs);

/// One side of a real-valued comparison: an enclosure plus, when
/// available, an exact form used to settle ties.
struct Side {
  Interval interval;
  std::optional<PowerProduct> exact;
};

struct Comparison {
  bool satisfied = false;
  bool decided = true;
  bool tie = false;
  std::string slack;
};

/// Decides lhs <= rhs soundly: enclosures first, exact forms for overlaps.
Comparison compare_sides(const Side& lhs, const Side& rhs);

}  // namespace groupprob
