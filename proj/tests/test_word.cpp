#include <random>

#include "doctest.h"

#include "groupprob/error.hpp"
#include "groupprob/word.hpp"

using namespace groupprob;

namespace {
std::vector<Letter> letters_of(std::initializer_list<int> xs) {
  std::vector<Letter> v;
  for (int x : xs) v.push_back(static_cast<Letter>(x));
  return v;
}
}  // namespace

TEST_CASE("free reduction examples") {
  CHECK(free_reduce(letters_of({1, 2, -2, -1})).empty());
  CHECK(free_reduce(letters_of({1, 2, -1, 1, 2})).to_string() == "abb");
  CHECK_THROWS_AS(free_reduce(letters_of({1, 3}), 2), Error);
}

TEST_CASE("parser") {
  CHECK(parse_word("[a,b]").to_string() == "abAB");
  CHECK(parse_word("[a,b]^3").to_string() == "abABabABabAB");
  CHECK(parse_word("a b A B") == parse_word("[a,b]"));
  CHECK(parse_word("ab^-1a^-1b^-1").to_string() == "aBAB");
  CHECK(parse_word("(ab)^-2").to_string() == "BABA");
  CHECK(parse_word("a^3B").to_string() == "aaaB");
  CHECK_THROWS_AS(parse_word("a^"), Error);
  CHECK_THROWS_AS(parse_word("[a,b"), Error);
}

TEST_CASE("free reduction is idempotent and length-nonincreasing") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> len(0, 30), gen(1, 3), sign(0, 1);
  for (int i = 0; i < 500; ++i) {
    std::vector<Letter> raw;
    const int n = len(rng);
    for (int k = 0; k < n; ++k) raw.push_back(static_cast<Letter>(sign(rng) ? gen(rng) : -gen(rng)));
    const ReducedWord w = free_reduce(raw);
    CHECK(w.length() <= raw.size());
    CHECK(free_reduce(w.letters()) == w);
    for (std::size_t k = 1; k < w.length(); ++k) CHECK(w.letters()[k] != -w.letters()[k - 1]);
    CHECK((w * w.inverse()).empty());
    CHECK(w.power(3) == w * w * w);
    CHECK(w.power(-2) == w.inverse() * w.inverse());
  }
}

TEST_CASE("shortlex order and abelianization") {
  CHECK(parse_word("a") < parse_word("A"));
  CHECK(parse_word("A") < parse_word("b"));
  CHECK(parse_word("z") < parse_word("aa"));
  CHECK(parse_word("[a,b]^3").abelianization(2) == std::vector<long>{0, 0});
  CHECK(parse_word("aaaB").abelianization(2) == std::vector<long>{3, -1});
}
