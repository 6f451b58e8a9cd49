#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "groupprob/algebra.hpp"

namespace groupprob {

struct NormednessCounterexample {
  Element z0;
  long n = 0;
  Scalar lhs;  // d(z0, z0^(n+1))
  Scalar rhs;  // n * d(z0, z0^2)
};

struct NormednessVerdict {
  std::vector<long> j_tested;
  std::map<long, bool> holds;
  std::optional<NormednessCounterexample> counterexample;
  /// False only if d(z0, z0^(n+1)) > n d(z0, z0^2) was seen, which the
  /// triangle inequality forbids in any metric semigroup.
  bool equivalence_consistent = true;

  bool all_hold() const { return !counterexample.has_value(); }
  Json to_json(const GroupInstance& instance) const;
};

/// Checks d(z0, z0^(n+1)) = n d(z0, z0^2) for every z0 in `elements` and
/// n in `j`. Float instances compare with relative tolerance 1e-9.
NormednessVerdict check_j_normed(const GroupInstance& instance, const std::set<long>& j,
                                 const std::vector<Element>& elements);

struct EquivalenceReport {
  long n_max = 0;
  /// Smallest power of two >= n_max.
  long n_dyadic = 0;
  bool two_normed = false;  // {2} on the dyadic power closure
  bool all_normed = false;  // {1..n_dyadic} on the elements
  bool consistent = false;
  NormednessVerdict two;
  NormednessVerdict all;

  Json to_json(const GroupInstance& instance) const;
};

/// Sample-level form of "{2}-normed iff N-normed". {2} is checked on the
/// closure {z^(2^j) : 0 <= j < K} with 2^K >= n_max, and {1..2^K} on the
/// elements; the two statements are equivalent for every sample, so a
/// mismatch means a broken instance.
EquivalenceReport check_normed_equivalence(const GroupInstance& instance,
                                           const std::vector<Element>& elements, long n_max);

struct TorsionWitness {
  Element element;
  long order = 0;
};

struct TorsionReport {
  long order_max = 0;
  std::size_t checked = 0;
  std::vector<TorsionWitness> torsion;
  /// Every torsion element also fails {2}-normedness on its dyadic powers.
  bool cross_check_consistent = true;

  bool torsion_free() const { return torsion.empty(); }
  Json to_json(const GroupInstance& instance) const;
};

TorsionReport check_torsion_free(const GroupInstance& instance, const std::vector<Element>& elements,
                                 long order_max);

/// Least n in [1, n_max] with (gh)^(2^n) = g^(2^n) h^(2^n).
std::optional<long> check_weak_commutativity(const GroupInstance& instance, const Element& g,
                                             const Element& h, long n_max);

}  // namespace groupprob
