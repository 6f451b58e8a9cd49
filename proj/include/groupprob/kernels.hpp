#pragma once

#include <cstdint>
#include <map>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace groupprob::kernels {

/// Signed sums sum_k r_k v_k over all sign vectors r in {+1,-1}^n, with
/// v_k in Z^dim (modulus 0) or (Z/m)^dim, scored as the integer
/// sum_i weights[i] * |s_i|, where |.| is the absolute value on Z and the
/// shorter-arc residue on Z/m.
struct LatticeSums {
  std::size_t n = 0;
  std::size_t dim = 0;
  std::vector<std::int64_t> moduli;
  std::vector<std::int64_t> weights;
  /// Row-major n x dim; residues already reduced into [0, m).
  std::vector<std::int64_t> vectors;
};

/// Count of sign vectors per integer score.
class Histogram {
 public:
  explicit Histogram(std::int64_t max_score = -1);

  void add(std::int64_t score, std::uint64_t count = 1) {
    if (dense_)
      counts_[static_cast<std::size_t>(score)] += count;
    else
      sparse_[score] += count;
  }
  void merge(const Histogram& other);
  std::map<std::int64_t, std::uint64_t> to_map() const;
  std::uint64_t total() const;

 private:
  bool dense_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::int64_t, std::uint64_t> sparse_;
};

enum class Backend { Scalar, Avx2 };

std::string_view backend_name(Backend b);
bool avx2_available();
/// AVX2 when the CPU supports it, unless GROUPPROB_KERNEL=scalar.
Backend default_backend();

/// Largest possible score, or -1 when some partial sum or score could
/// overflow 64-bit arithmetic.
std::int64_t max_score(const LatticeSums& p);

/// Sign vectors are split as index = block * 2^low_bits + j: a block fixes
/// the signs of elements low_bits..n-1 (bit set = minus) and the kernel walks
/// all 2^low_bits patterns of the first elements in Gray-code order.
std::size_t low_bits_for(std::size_t n);

void lattice_blocks_scalar(const LatticeSums& p, std::size_t low_bits, std::uint64_t block_begin,
                           std::uint64_t block_end, Histogram& out);

/// Requires avx2_available(), low_bits >= 3 and max_score(p) < 2^31.
void lattice_blocks_avx2(const LatticeSums& p, std::size_t low_bits, std::uint64_t block_begin,
                         std::uint64_t block_end, Histogram& out);

/// Full histogram over all 2^n sign vectors, parallel over blocks.
Histogram lattice_histogram(const LatticeSums& p, Backend backend);

}  // namespace groupprob::kernels
