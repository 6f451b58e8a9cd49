#include <cstdlib>
#include <random>

#include "doctest.h"

#include "groupprob/kernels.hpp"

using namespace groupprob::kernels;

namespace {

std::map<std::int64_t, std::uint64_t> brute_force(const LatticeSums& p) {
  std::map<std::int64_t, std::uint64_t> h;
  for (std::uint64_t bits = 0; bits < (1ULL << p.n); ++bits) {
    std::int64_t score = 0;
    for (std::size_t i = 0; i < p.dim; ++i) {
      const std::int64_t m = p.moduli[i];
      std::int64_t s = 0;
      for (std::size_t k = 0; k < p.n; ++k) {
        const std::int64_t v = p.vectors[k * p.dim + i];
        s += ((bits >> k) & 1U) ? -v : v;
      }
      if (m) {
        s %= m;
        if (s < 0) s += m;
        s = std::min(s, m - s);
      } else if (s < 0) {
        s = -s;
      }
      score += p.weights[i] * s;
    }
    ++h[score];
  }
  return h;
}

LatticeSums random_problem(std::mt19937_64& rng, std::size_t n, std::size_t dim, std::int64_t max_weight) {
  LatticeSums p;
  p.n = n;
  p.dim = dim;
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<std::int64_t> w(1, max_weight), c(-9, 9), mod(2, 40);
  for (std::size_t i = 0; i < dim; ++i) {
    p.moduli.push_back(kind(rng) == 0 ? mod(rng) : 0);
    p.weights.push_back(w(rng));
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < dim; ++i) {
      std::int64_t v = c(rng);
      if (p.moduli[i]) v = ((v % p.moduli[i]) + p.moduli[i]) % p.moduli[i];
      p.vectors.push_back(v);
    }
  return p;
}

}  // namespace

TEST_CASE("scalar kernel matches brute force") {
  std::mt19937_64 rng(100);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + trial % 14;
    const LatticeSums p = random_problem(rng, n, 1 + trial % 4, 6);
    const auto h = lattice_histogram(p, Backend::Scalar);
    CHECK(h.total() == (1ULL << n));
    CHECK(h.to_map() == brute_force(p));
  }
}

TEST_CASE("AVX2 kernel matches the scalar kernel") {
  if (!avx2_available()) {
    MESSAGE("AVX2 not available; skipping vector comparison");
    return;
  }
  std::mt19937_64 rng(200);
  for (int trial = 0; trial < 80; ++trial) {
    const std::size_t n = 3 + trial % 18;
    const LatticeSums p = random_problem(rng, n, 1 + trial % 6, 50);
    const auto scalar = lattice_histogram(p, Backend::Scalar).to_map();
    const auto vec = lattice_histogram(p, Backend::Avx2).to_map();
    CAPTURE(n);
    CHECK(scalar == vec);
    if (n <= 12) CHECK(scalar == brute_force(p));
  }
}

TEST_CASE("block-level kernels agree for every split") {
  if (!avx2_available()) return;
  std::mt19937_64 rng(300);
  const LatticeSums p = random_problem(rng, 12, 3, 9);
  for (std::size_t low = 3; low <= 12; ++low) {
    const std::uint64_t blocks = 1ULL << (12 - low);
    Histogram a(max_score(p)), b(max_score(p));
    lattice_blocks_scalar(p, low, 0, blocks, a);
    lattice_blocks_avx2(p, low, 0, blocks, b);
    CHECK(a.to_map() == b.to_map());
    CHECK(a.to_map() == brute_force(p));
  }
}

TEST_CASE("wide vectors fall back to the scalar path") {
  std::mt19937_64 rng(400);
  const LatticeSums p = random_problem(rng, 8, 70, 3);
  CHECK(lattice_histogram(p, Backend::Avx2).to_map() == brute_force(p));
}

TEST_CASE("sparse histograms for large scores") {
  std::mt19937_64 rng(500);
  LatticeSums p = random_problem(rng, 10, 2, 1);
  p.weights = {1'000'003, 7'000'001};
  CHECK(max_score(p) > (1LL << 22));
  CHECK(lattice_histogram(p, Backend::Scalar).to_map() == brute_force(p));
  CHECK(lattice_histogram(p, default_backend()).to_map() == brute_force(p));
}

TEST_CASE("overflow is detected") {
  LatticeSums p;
  p.n = 2;
  p.dim = 1;
  p.moduli = {0};
  p.weights = {1LL << 40};
  p.vectors = {1LL << 30, 1LL << 30};
  CHECK(max_score(p) == -1);
}

TEST_CASE("environment override selects the scalar kernel") {
  setenv("GROUPPROB_KERNEL", "scalar", 1);
  CHECK(default_backend() == Backend::Scalar);
  unsetenv("GROUPPROB_KERNEL");
  CHECK(default_backend() == (avx2_available() ? Backend::Avx2 : Backend::Scalar));
}
