#include <cstdlib>
#include <cstring>
#include <vector>

#include "groupprob/error.hpp"
#include "groupprob/kernels.hpp"
#include "groupprob/parallel.hpp"

namespace groupprob::kernels {

std::string_view backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend default_backend() {
  if (const char* env = std::getenv("GROUPPROB_KERNEL"); env && std::strcmp(env, "scalar") == 0)
    return Backend::Scalar;
  return avx2_available() ? Backend::Avx2 : Backend::Scalar;
}

Histogram lattice_histogram(const LatticeSums& p, Backend backend) {
  if (p.n > 40) throw Error(ErrorCode::TooLarge, "lattice enumeration limited to n <= 40");
  const std::int64_t top = max_score(p);
  if (top < 0) throw Error(ErrorCode::PowerOverflow, "lattice sums exceed 64-bit range");

  const std::size_t low = low_bits_for(p.n);
  const std::uint64_t blocks = 1ULL << (p.n - low);
  const bool use_avx2 = backend == Backend::Avx2 && avx2_available() && low >= 3 && top < (1LL << 31);

  std::vector<Histogram> partial;
  const std::size_t chunks = std::min<std::uint64_t>(blocks, worker_count());
  for (std::size_t c = 0; c < chunks; ++c) partial.emplace_back(top);
  parallel_chunks(blocks, chunks, [&](std::size_t c, std::size_t begin, std::size_t end) {
    if (use_avx2)
      lattice_blocks_avx2(p, low, begin, end, partial[c]);
    else
      lattice_blocks_scalar(p, low, begin, end, partial[c]);
  });
  Histogram out(top);
  for (const auto& h : partial) out.merge(h);
  return out;
}

}  // namespace groupprob::kernels
