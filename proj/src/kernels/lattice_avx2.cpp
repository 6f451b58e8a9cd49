#include <immintrin.h>

#include <vector>

#include "groupprob/kernels.hpp"

namespace groupprob::kernels {

// Eight lanes hold the eight sign patterns of elements 0..2; the Gray walk
// runs over elements 3..low_bits-1 and updates all lanes at once. Scores
// are computed in int32, which max_score(p) < 2^31 guarantees.
__attribute__((target("avx2"))) void lattice_blocks_avx2(const LatticeSums& p, std::size_t low_bits,
                                                          std::uint64_t block_begin, std::uint64_t block_end,
                                                          Histogram& out) {
  const std::size_t d = p.dim;
  const std::size_t n = p.n;

  std::vector<std::int32_t> plus(n * d), minus(n * d);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < d; ++i) {
      const std::int64_t m = p.moduli[i];
      const std::int64_t v = p.vectors[k * d + i];
      const std::int64_t st = m ? (2 * v) % m : 2 * v;
      plus[k * d + i] = static_cast<std::int32_t>(st);
      minus[k * d + i] = static_cast<std::int32_t>(m ? m - st : -st);
    }

  if (d > 64) return lattice_blocks_scalar(p, low_bits, block_begin, block_end, out);
  __m256i sum[64], mod[64], mod_minus_one[64], weight[64];
  for (std::size_t i = 0; i < d; ++i) {
    mod[i] = _mm256_set1_epi32(static_cast<std::int32_t>(p.moduli[i]));
    mod_minus_one[i] = _mm256_set1_epi32(static_cast<std::int32_t>(p.moduli[i] - 1));
    weight[i] = _mm256_set1_epi32(static_cast<std::int32_t>(p.weights[i]));
  }

  const std::uint64_t walk = 1ULL << (low_bits - 3);
  alignas(32) std::int32_t lanes[8];
  alignas(32) std::int32_t scores[8];

  for (std::uint64_t block = block_begin; block < block_end; ++block) {
    for (std::size_t i = 0; i < d; ++i) {
      const std::int64_t m = p.moduli[i];
      std::int64_t base = 0;
      for (std::size_t k = 3; k < n; ++k) {
        const bool neg = k >= low_bits && ((block >> (k - low_bits)) & 1U);
        const std::int64_t v = p.vectors[k * d + i];
        base = m ? (base + (neg ? m - v : v)) % m : base + (neg ? -v : v);
      }
      for (int l = 0; l < 8; ++l) {
        std::int64_t s = base;
        for (std::size_t k = 0; k < 3; ++k) {
          const bool neg = (l >> k) & 1;
          const std::int64_t v = p.vectors[k * d + i];
          s = m ? (s + (neg ? m - v : v)) % m : s + (neg ? -v : v);
        }
        lanes[l] = static_cast<std::int32_t>(s);
      }
      sum[i] = _mm256_load_si256(reinterpret_cast<const __m256i*>(lanes));
    }

    std::uint64_t gray = 0;
    for (std::uint64_t j = 0; j < walk; ++j) {
      if (j > 0) {
        const unsigned bit = static_cast<unsigned>(__builtin_ctzll(j));
        gray ^= 1ULL << bit;
        const std::size_t k = 3 + bit;
        const std::int32_t* delta = ((gray >> bit) & 1U) ? &minus[k * d] : &plus[k * d];
        for (std::size_t i = 0; i < d; ++i) {
          __m256i c = _mm256_add_epi32(sum[i], _mm256_set1_epi32(delta[i]));
          if (p.moduli[i]) {
            const __m256i over = _mm256_cmpgt_epi32(c, mod_minus_one[i]);
            c = _mm256_sub_epi32(c, _mm256_and_si256(over, mod[i]));
          }
          sum[i] = c;
        }
      }
      __m256i acc = _mm256_setzero_si256();
      for (std::size_t i = 0; i < d; ++i) {
        const __m256i mag = p.moduli[i] ? _mm256_min_epi32(sum[i], _mm256_sub_epi32(mod[i], sum[i]))
                                        : _mm256_abs_epi32(sum[i]);
        acc = _mm256_add_epi32(acc, _mm256_mullo_epi32(mag, weight[i]));
      }
      _mm256_store_si256(reinterpret_cast<__m256i*>(scores), acc);
      for (int l = 0; l < 8; ++l) out.add(scores[l]);
    }
  }
}

}  // namespace groupprob::kernels
