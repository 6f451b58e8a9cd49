#include <algorithm>
#include <cstdlib>

#include "groupprob/kernels.hpp"

namespace groupprob::kernels {

namespace {
constexpr std::int64_t kDenseLimit = 1 << 22;
}

Histogram::Histogram(std::int64_t max_score)
    : dense_(max_score >= 0 && max_score <= kDenseLimit) {
  if (dense_) counts_.assign(static_cast<std::size_t>(max_score) + 1, 0);
}

void Histogram::merge(const Histogram& other) {
  if (other.dense_) {
    for (std::size_t i = 0; i < other.counts_.size(); ++i)
      if (other.counts_[i]) add(static_cast<std::int64_t>(i), other.counts_[i]);
  } else {
    for (const auto& [k, v] : other.sparse_) add(k, v);
  }
}

std::map<std::int64_t, std::uint64_t> Histogram::to_map() const {
  std::map<std::int64_t, std::uint64_t> m;
  if (dense_) {
    for (std::size_t i = 0; i < counts_.size(); ++i)
      if (counts_[i]) m[static_cast<std::int64_t>(i)] = counts_[i];
  } else {
    for (const auto& [k, v] : sparse_) m[k] = v;
  }
  return m;
}

std::uint64_t Histogram::total() const {
  std::uint64_t t = 0;
  for (auto c : counts_) t += c;
  for (const auto& [k, v] : sparse_) t += v;
  return t;
}

std::int64_t max_score(const LatticeSums& p) {
  __int128 score = 0;
  for (std::size_t i = 0; i < p.dim; ++i) {
    __int128 bound;
    if (p.moduli[i] == 0) {
      bound = 0;
      for (std::size_t k = 0; k < p.n; ++k) {
        std::int64_t v = p.vectors[k * p.dim + i];
        bound += v < 0 ? -static_cast<__int128>(v) : v;
      }
      // Gray steps add 2 v, so 2 * bound must also fit.
      if (2 * bound > INT64_MAX) return -1;
    } else {
      bound = p.moduli[i] / 2;
    }
    score += bound * p.weights[i];
    if (score > INT64_MAX) return -1;
  }
  return static_cast<std::int64_t>(score);
}

std::size_t low_bits_for(std::size_t n) { return n <= 14 ? n : n - 8; }

void lattice_blocks_scalar(const LatticeSums& p, std::size_t low_bits, std::uint64_t block_begin,
                           std::uint64_t block_end, Histogram& out) {
  const std::size_t d = p.dim;
  std::vector<std::int64_t> sum(d);
  // step[k*d+i] = 2 v_k,i (reduced mod m), the change when sign k flips.
  std::vector<std::int64_t> step(p.n * d);
  for (std::size_t k = 0; k < p.n; ++k)
    for (std::size_t i = 0; i < d; ++i) {
      const std::int64_t m = p.moduli[i];
      const std::int64_t v = p.vectors[k * d + i];
      step[k * d + i] = m ? (2 * v) % m : 2 * v;
    }

  auto score = [&]() {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < d; ++i) {
      const std::int64_t m = p.moduli[i];
      const std::int64_t c = sum[i];
      s += p.weights[i] * (m ? std::min(c, m - c) : (c < 0 ? -c : c));
    }
    return s;
  };

  const std::uint64_t inner = 1ULL << low_bits;
  for (std::uint64_t block = block_begin; block < block_end; ++block) {
    // All low signs +, high signs from the block bits.
    std::fill(sum.begin(), sum.end(), 0);
    for (std::size_t k = 0; k < p.n; ++k) {
      const bool minus = k >= low_bits && ((block >> (k - low_bits)) & 1U);
      for (std::size_t i = 0; i < d; ++i) {
        const std::int64_t m = p.moduli[i];
        const std::int64_t v = p.vectors[k * d + i];
        if (m)
          sum[i] = (sum[i] + (minus ? m - v : v)) % m;
        else
          sum[i] += minus ? -v : v;
      }
    }
    out.add(score());
    std::uint64_t gray = 0;
    for (std::uint64_t j = 1; j < inner; ++j) {
      const unsigned k = static_cast<unsigned>(__builtin_ctzll(j));
      gray ^= 1ULL << k;
      const bool now_minus = (gray >> k) & 1U;
      const std::int64_t* st = &step[k * d];
      for (std::size_t i = 0; i < d; ++i) {
        const std::int64_t m = p.moduli[i];
        if (m) {
          std::int64_t c = sum[i] + (now_minus ? m - st[i] : st[i]);
          if (c >= m) c -= m;
          if (c >= m) c -= m;
          sum[i] = c;
        } else {
          sum[i] += now_minus ? -st[i] : st[i];
        }
      }
      out.add(score());
    }
  }
}

}  // namespace groupprob::kernels
