#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "groupprob/report.hpp"
#include "groupprob/word.hpp"

namespace groupprob {

/// L1 norm of the exponent-sum vector, or 2 for a nontrivial word whose
/// exponent sums all vanish.
long abelianization_lower_bound(const ReducedWord& w);

/// Product of conjugates u s u^-1 of signed generators s.
struct ConjugateDecomposition {
  std::vector<std::pair<ReducedWord, Letter>> factors;

  ReducedWord product() const;
  std::size_t size() const { return factors.size(); }
  nlohmann::json to_json() const;
  static ConjugateDecomposition from_json(const nlohmann::json& j);
};

bool verify_witness(const ReducedWord& target, const ConjugateDecomposition& dec);

/// The four-factor decomposition of [a,b]^3 with conjugators a, b^-1, a^-1, b.
ConjugateDecomposition commutator_cube_witness();

struct NormBounds {
  long lower = 0;
  /// "abelianization-parity" or "search-exhaustion(conj_bound=B)".
  std::string lower_certificate;
  long upper = 0;
  ConjugateDecomposition witness;
  /// lower == upper with a lower bound that does not depend on the search.
  bool exact = false;
  /// lower == upper, possibly relying on the conjugator bound.
  bool exact_within_bound = false;
  bool budget_exceeded = false;
  std::uint64_t nodes = 0;

  nlohmann::json to_json() const;
};

inline constexpr std::uint64_t kDefaultSearchBudget = 50'000'000;

/// Decomposition of w into exactly k conjugates with conjugators of reduced
/// length <= conj_bound, if one exists. `nodes` accumulates work and the
/// search throws TooLarge once it passes `budget`.
std::optional<ConjugateDecomposition> find_decomposition(const ReducedWord& w, int k, int conj_bound,
                                                         std::uint64_t budget = kDefaultSearchBudget,
                                                         std::uint64_t* nodes = nullptr);

NormBounds biinv_norm(const ReducedWord& w, int conj_bound = 4, int len_bound = 6,
                      std::uint64_t budget = kDefaultSearchBudget);

/// l([a,b]) = 2 and l([a,b]^3) <= 4 < 6: the bi-invariant word metric on
/// F_2 is not normed.
InequalityReport refute_normedness_f2();

}  // namespace groupprob
