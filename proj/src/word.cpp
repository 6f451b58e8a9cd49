#include "groupprob/word.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <string>

#include "groupprob/error.hpp"

namespace groupprob {

namespace {

int letter_key(Letter l) { return 2 * (std::abs(l) - 1) + (l < 0 ? 1 : 0); }

void push_reduced(std::vector<Letter>& out, Letter l) {
  if (!out.empty() && out.back() == -l)
    out.pop_back();
  else
    out.push_back(l);
}

}  // namespace

std::strong_ordering operator<=>(const ReducedWord& a, const ReducedWord& b) {
  if (a.letters_.size() != b.letters_.size()) return a.letters_.size() <=> b.letters_.size();
  for (std::size_t i = 0; i < a.letters_.size(); ++i) {
    int ka = letter_key(a.letters_[i]);
    int kb = letter_key(b.letters_[i]);
    if (ka != kb) return ka <=> kb;
  }
  return std::strong_ordering::equal;
}

ReducedWord ReducedWord::reduce(std::span<const Letter> letters) {
  ReducedWord w;
  w.letters_.reserve(letters.size());
  for (Letter l : letters) push_reduced(w.letters_, l);
  return w;
}

ReducedWord ReducedWord::generator(Letter letter) {
  ReducedWord w;
  w.letters_.push_back(letter);
  return w;
}

ReducedWord ReducedWord::inverse() const {
  ReducedWord w;
  w.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back(-*it);
  return w;
}

ReducedWord ReducedWord::operator*(const ReducedWord& rhs) const {
  // Cancellation happens only at the junction.
  std::size_t k = 0;
  const std::size_t n = letters_.size();
  while (k < n && k < rhs.letters_.size() && letters_[n - 1 - k] == -rhs.letters_[k]) ++k;
  ReducedWord w;
  w.letters_.reserve(n - k + rhs.letters_.size() - k);
  w.letters_.insert(w.letters_.end(), letters_.begin(), letters_.end() - static_cast<long>(k));
  w.letters_.insert(w.letters_.end(), rhs.letters_.begin() + static_cast<long>(k), rhs.letters_.end());
  return w;
}

ReducedWord ReducedWord::power(long k) const {
  ReducedWord base = k < 0 ? inverse() : *this;
  unsigned long e = static_cast<unsigned long>(k < 0 ? -k : k);
  ReducedWord result;
  while (e > 0) {
    if (e & 1UL) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

std::vector<long> ReducedWord::abelianization(int rank) const {
  std::vector<long> sums(static_cast<std::size_t>(std::max(rank, max_generator())), 0);
  for (Letter l : letters_) sums[static_cast<std::size_t>(std::abs(l) - 1)] += (l > 0 ? 1 : -1);
  return sums;
}

int ReducedWord::max_generator() const {
  int m = 0;
  for (Letter l : letters_) m = std::max(m, std::abs(static_cast<int>(l)));
  return m;
}

std::string ReducedWord::to_string() const {
  std::string s;
  for (Letter l : letters_)
    s.push_back(static_cast<char>(l > 0 ? 'a' + (l - 1) : 'A' + (-l - 1)));
  return s;
}

ReducedWord free_reduce(std::span<const Letter> letters, int rank) {
  for (Letter l : letters) {
    if (l == 0 || std::abs(l) > 26 || (rank > 0 && std::abs(l) > rank))
      throw Error(ErrorCode::UnknownLetter, "letter outside the alphabet: " + std::to_string(l));
  }
  return ReducedWord::reduce(letters);
}

std::size_t ReducedWordHash::operator()(const ReducedWord& w) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  for (Letter l : w.letters()) {
    h ^= static_cast<std::size_t>(static_cast<unsigned char>(l));
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

class WordParser {
 public:
  explicit WordParser(std::string_view text) : text_(text) {}

  ReducedWord parse() {
    ReducedWord w = sequence();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return w;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw Error(ErrorCode::UnknownLetter,
                "cannot parse word '" + std::string(text_) + "' at " + std::to_string(pos_) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           (std::isspace(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '*' ||
            text_[pos_] == '.'))
      ++pos_;
  }

  bool at_atom_start() {
    skip_space();
    if (pos_ >= text_.size()) return false;
    char c = text_[pos_];
    return std::isalpha(static_cast<unsigned char>(c)) || c == '(' || c == '[' || c == '1';
  }

  ReducedWord sequence() {
    ReducedWord w;
    while (at_atom_start()) w = w * term();
    return w;
  }

  ReducedWord term() {
    ReducedWord w = atom();
    skip_space();
    while (pos_ < text_.size() && text_[pos_] == '^') {
      ++pos_;
      w = w.power(integer());
      skip_space();
    }
    return w;
  }

  long integer() {
    skip_space();
    bool neg = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      neg = text_[pos_] == '-';
      ++pos_;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer exponent");
    if (pos_ - start > 6) fail("exponent too large");
    long v = std::stol(std::string(text_.substr(start, pos_ - start)));
    return neg ? -v : v;
  }

  ReducedWord atom() {
    skip_space();
    char c = text_[pos_];
    if (c == '1') {
      ++pos_;
      return {};
    }
    if (c == '(') {
      ++pos_;
      ReducedWord w = sequence();
      expect(')');
      return w;
    }
    if (c == '[') {
      ++pos_;
      ReducedWord x = sequence();
      expect(',');
      ReducedWord y = sequence();
      expect(']');
      return x * y * x.inverse() * y.inverse();
    }
    ++pos_;
    Letter l = std::islower(static_cast<unsigned char>(c)) ? static_cast<Letter>(c - 'a' + 1)
                                                            : static_cast<Letter>(-(c - 'A' + 1));
    return ReducedWord::generator(l);
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

ReducedWord parse_word(std::string_view text) { return WordParser(text).parse(); }

}  // namespace groupprob
