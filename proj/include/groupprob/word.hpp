#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace groupprob {

/// Signed generator: +i is the i-th generator (1-based, 'a' = 1), -i its
/// inverse.
using Letter = std::int8_t;

/// Free-group element in reduced normal form: no letter is followed by its
/// inverse. The empty word is the identity.
class ReducedWord {
 public:
  ReducedWord() = default;

  /// Freely reduces an arbitrary letter sequence.
  static ReducedWord reduce(std::span<const Letter> letters);
  static ReducedWord generator(Letter letter);

  std::span<const Letter> letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  ReducedWord inverse() const;
  ReducedWord operator*(const ReducedWord& rhs) const;
  ReducedWord power(long k) const;

  /// Exponent sum of each generator 1..rank.
  std::vector<long> abelianization(int rank) const;
  /// Largest generator index used (0 for the identity).
  int max_generator() const;

  /// Letters a..z for generators, A..Z for inverses.
  std::string to_string() const;

  friend bool operator==(const ReducedWord&, const ReducedWord&) = default;
  /// Shortlex with letter order a < A < b < B < ...
  friend std::strong_ordering operator<=>(const ReducedWord& a, const ReducedWord& b);

 private:
  std::vector<Letter> letters_;
};

/// Free reduction; throws ErrorCode::UnknownLetter for letters outside
/// 1..rank (rank <= 0 accepts any of a..z).
ReducedWord free_reduce(std::span<const Letter> letters, int rank = 0);

/// Parses words such as "[a,b]^3", "a b A B", "ab^-1a^-1b^-1", "(ab)^-2".
/// Generators are a..z, inverses A..Z or ^-1; brackets denote commutators
/// [x,y] = x y x^-1 y^-1.
ReducedWord parse_word(std::string_view text);

struct ReducedWordHash {
  std::size_t operator()(const ReducedWord& w) const noexcept;
};

}  // namespace groupprob
