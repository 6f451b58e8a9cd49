#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "groupprob/algebra.hpp"
#include "groupprob/envelope.hpp"
#include "groupprob/power_product.hpp"
#include "groupprob/report.hpp"

namespace groupprob {

constexpr std::size_t kMaxExactRademacher = 24;

struct RademacherScenario {
  InstancePtr instance;
  std::vector<Element> elements;
  /// Exponent applied to every element: the law is that of
  /// d(1, prod_k x_k^(m r_k)).
  long m = 1;
  Rational p = 1;
  Rational q = 1;
};

/// {"group": spec, "elements": [...], "p": "1/1", "q": "3/2", "m": 1}.
RademacherScenario scenario_from_json(const Json& j);
Json scenario_to_json(const RademacherScenario& s);

/// Finite law of a nonnegative distance; atoms sorted ascending and distinct.
struct DistanceDistribution {
  std::vector<std::pair<Scalar, Rational>> atoms;
  /// Number of equally likely outcomes behind the law (2^n, paths, or samples).
  std::uint64_t outcomes = 0;
  bool exact_values = true;

  Rational total() const;
  /// P(Z > t), or P(Z >= t) when `inclusive`.
  Rational tail(const Scalar& t, bool inclusive = false) const;
  Rational tail(const Rational& t, bool inclusive = false) const { return tail(Scalar::exact(t), inclusive); }
  Json to_json() const;
};

/// Exact law over all 2^n sign vectors (n <= 24). Lattice-type instances use
/// the vectorized kernel; others compose elements directly.
DistanceDistribution enumerate_rademacher(const RademacherScenario& s);

/// Monte-Carlo law from `samples` sign vectors. Sample i draws its signs
/// from a stream keyed by (seed, i), so results do not depend on threads.
DistanceDistribution sample_rademacher(const RademacherScenario& s, std::uint64_t samples, std::uint64_t seed);

struct MomentResult {
  /// E[Z^p]: exact when p is an integer and the atoms are exact.
  std::optional<Rational> raw_exact;
  Interval raw;
  /// E[Z^p]^(1/p).
  Interval root;
  std::optional<PowerProduct> root_exact;

  Side side() const { return {root, root_exact}; }
};

/// Requires p >= 1.
MomentResult moment(const DistanceDistribution& dist, const Rational& p);

enum class KKRegime { NormedGeneral, NormedSharp, General };

KKRegime parse_regime(std::string_view name);
std::string_view regime_name(KKRegime r);

struct KKConstant {
  PowerProduct value;
  std::string formula;
  Interval interval() const { return value.interval(); }
};

KKConstant kk_constant(const Rational& p, const Rational& q, KKRegime regime);

/// The l with 2^(l-1) <= q < 2^l.
long kk_level(const Rational& q);

/// Normed regimes first check {2,3}-normedness on the elements (NotNormed
/// otherwise) and use exponent 1; the general regime uses 2^l.
InequalityReport check_kk(const RademacherScenario& s, KKRegime regime);

struct SharpnessResult {
  Interval ratio;
  double value = 0.0;
  /// ratio^q as an exact rational when q is an integer.
  std::optional<Rational> ratio_pow_q;
  PowerProduct expected;
  /// ratio == 2^(1-1/q), decided exactly.
  std::optional<bool> matches_exactly;
};

/// ||P_2||_q / ||P_2||_1 for x_1 = x_2 = x, 1 <= q <= 2.
SharpnessResult sharpness_ratio(const InstancePtr& instance, const Element& x, const Rational& q);

/// 1-based index sets.
using LaminarFamily = std::vector<std::vector<int>>;

bool validate_laminar(const LaminarFamily& family);
LaminarFamily family_from_json(const Json& j);
/// {1}, {1,2}, ..., {1..n}
LaminarFamily prefix_family(int n);
/// {n}, {n-1,n}, ..., {1..n}
LaminarFamily suffix_family(int n);
/// {1}, {2}, ..., {n}
LaminarFamily singleton_family(int n);

/// P(max_k d(1, X_{B_k}^2) > s + t) <= P(d(1, S_n) > s) + P(d(1, S_n) > t)
/// with X_i = x_i^(m r_i).
InequalityReport check_levy(const RademacherScenario& s, const LaminarFamily& family, const Rational& t_s,
                            const Rational& t_t);

/// P(d(1, prod x_k^(2 m r_k)) > s+t+u+v) <= (P(P_n > s) + P(P_n > t)) (P(P_n > u) + P(P_n > v)).
InequalityReport check_tail(const RademacherScenario& s, const Rational& a, const Rational& b, const Rational& c,
                            const Rational& d);

struct MontMode {
  bool exact = true;
  std::uint64_t seed = 0;
  std::uint64_t samples = 100000;
};

/// P(U_n >= t) <= 3 P(d(z0, z0 S_n) >= (t - d(z0, z1)) / 10) for each t,
/// with U_n = max_{k <= n} d(z0, z0 S_k) and S_n a walk with i.i.d. steps.
InequalityReport check_mont(const InstancePtr& instance, const FiniteDistribution& law, const Element& z0,
                            const Element& z1, long n, const std::vector<Rational>& t_grid, const MontMode& mode);

}  // namespace groupprob
