#include "groupprob/word_norm.hpp"

#include <atomic>
#include <cstdlib>
#include <limits>
#include <unordered_map>

#include "groupprob/error.hpp"
#include "groupprob/parallel.hpp"

namespace groupprob {

namespace {

using Json = nlohmann::json;

long l1(const std::vector<long>& v) {
  long s = 0;
  for (long x : v) s += std::labs(x);
  return s;
}

std::string letter_string(Letter s) { return ReducedWord::generator(s).to_string(); }

struct Conjugate {
  ReducedWord word;
  ReducedWord conjugator;
  Letter letter;
};

/// Distinct conjugates u s u^-1 with |u| <= bound, in shortlex order of u.
std::vector<Conjugate> conjugates(int rank, int bound) {
  std::vector<ReducedWord> layer{ReducedWord{}};
  std::vector<ReducedWord> all{ReducedWord{}};
  for (int len = 1; len <= bound; ++len) {
    std::vector<ReducedWord> next;
    for (const auto& u : layer)
      for (int g = 1; g <= rank; ++g)
        for (Letter s : {static_cast<Letter>(g), static_cast<Letter>(-g)}) {
          if (!u.empty() && u.letters().back() == -s) continue;
          next.push_back(u * ReducedWord::generator(s));
        }
    std::sort(next.begin(), next.end());
    all.insert(all.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  std::vector<Conjugate> out;
  std::unordered_map<ReducedWord, bool, ReducedWordHash> seen;
  for (const auto& u : all)
    for (int g = 1; g <= rank; ++g)
      for (Letter s : {static_cast<Letter>(g), static_cast<Letter>(-g)}) {
        ReducedWord c = u * ReducedWord::generator(s) * u.inverse();
        if (seen.emplace(c, true).second) out.push_back({c, u, s});
      }
  return out;
}

bool feasible(const std::vector<long>& need, int remaining) {
  const long n = l1(need);
  return n <= remaining && (remaining - n) % 2 == 0;
}

}  // namespace

long abelianization_lower_bound(const ReducedWord& w) {
  if (w.empty()) return 0;
  const long n = l1(w.abelianization(w.max_generator()));
  return n == 0 ? 2 : n;
}

ReducedWord ConjugateDecomposition::product() const {
  ReducedWord p;
  for (const auto& [u, s] : factors) p = p * u * ReducedWord::generator(s) * u.inverse();
  return p;
}

Json ConjugateDecomposition::to_json() const {
  Json a = Json::array();
  for (const auto& [u, s] : factors) {
    const ReducedWord f = u * ReducedWord::generator(s) * u.inverse();
    a.push_back({{"conjugator", u.to_string()}, {"letter", letter_string(s)}, {"factor", f.to_string()}});
  }
  return a;
}

ConjugateDecomposition ConjugateDecomposition::from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::MalformedJson, "decomposition must be an array");
  ConjugateDecomposition d;
  for (const auto& f : j) {
    if (!f.is_object() || !f.contains("conjugator") || !f.contains("letter"))
      throw Error(ErrorCode::MalformedJson, "factor needs \"conjugator\" and \"letter\"");
    const ReducedWord s = parse_word(f.at("letter").get<std::string>());
    if (s.length() != 1) throw Error(ErrorCode::MalformedJson, "\"letter\" must be a single generator");
    d.factors.emplace_back(parse_word(f.at("conjugator").get<std::string>()), s.letters()[0]);
  }
  return d;
}

bool verify_witness(const ReducedWord& target, const ConjugateDecomposition& dec) {
  return dec.product() == target;
}

ConjugateDecomposition commutator_cube_witness() {
  const Letter a = 1, b = 2;
  ConjugateDecomposition d;
  d.factors = {{ReducedWord::generator(a), b},
               {ReducedWord::generator(-b), a},
               {ReducedWord::generator(-a), static_cast<Letter>(-b)},
               {ReducedWord::generator(b), static_cast<Letter>(-a)}};
  return d;
}

std::optional<ConjugateDecomposition> find_decomposition(const ReducedWord& w, int k, int conj_bound,
                                                         std::uint64_t budget, std::uint64_t* nodes) {
  if (k < 0 || conj_bound < 0) throw Error(ErrorCode::InvalidArgument, "bounds must be >= 0");
  const int rank = std::max(1, w.max_generator());
  const std::vector<long> target_ab = w.abelianization(rank);
  if (!feasible(target_ab, k)) return std::nullopt;
  if (k == 0) return w.empty() ? std::optional<ConjugateDecomposition>(ConjugateDecomposition{}) : std::nullopt;

  const std::vector<Conjugate> cs = conjugates(rank, conj_bound);
  const std::size_t nc = cs.size();
  std::atomic<std::uint64_t> work{0};
  auto charge = [&](std::uint64_t n) {
    if (work.fetch_add(n, std::memory_order_relaxed) + n > budget)
      throw Error(ErrorCode::TooLarge, "word-norm search budget exceeded");
  };

  // Products of the last `right` factors, first representative kept.
  const int right = k / 2;
  const int left = k - right;
  std::unordered_map<ReducedWord, std::vector<std::uint32_t>, ReducedWordHash> tail;
  {
    std::vector<std::uint32_t> idx;
    std::vector<ReducedWord> prod{ReducedWord{}};
    auto rec = [&](auto&& self, int depth) -> void {
      if (depth == right) {
        tail.emplace(prod.back(), idx);
        return;
      }
      for (std::uint32_t i = 0; i < nc; ++i) {
        charge(1);
        idx.push_back(i);
        prod.push_back(prod.back() * cs[i].word);
        self(self, depth + 1);
        prod.pop_back();
        idx.pop_back();
      }
    };
    rec(rec, 0);
  }

  // Left factors are searched in parallel over the first choice; the
  // smallest first index with a hit wins.
  const std::size_t chunks = std::min<std::size_t>(nc, std::max(1u, worker_count()) * 4);
  std::atomic<std::size_t> best_first{std::numeric_limits<std::size_t>::max()};
  std::vector<std::optional<std::vector<std::uint32_t>>> found(chunks);
  parallel_chunks(nc, chunks, [&](std::size_t c, std::size_t begin, std::size_t end) {
    std::vector<std::uint32_t> idx;
    std::vector<ReducedWord> prod{ReducedWord{}};
    std::vector<std::vector<long>> ab{std::vector<long>(rank, 0)};
    auto rec = [&](auto&& self, int depth) -> bool {
      if (depth == left) {
        auto it = tail.find(prod.back().inverse() * w);
        if (it == tail.end()) return false;
        std::vector<std::uint32_t> all = idx;
        all.insert(all.end(), it->second.begin(), it->second.end());
        found[c] = std::move(all);
        return true;
      }
      const std::size_t lo = depth == 0 ? begin : 0;
      const std::size_t hi = depth == 0 ? end : nc;
      for (std::size_t i = lo; i < hi; ++i) {
        if (depth == 0 && i > best_first.load(std::memory_order_relaxed)) return false;
        charge(1);
        std::vector<long> next_ab = ab.back();
        const Letter s = cs[i].letter;
        next_ab[std::abs(s) - 1] += s > 0 ? 1 : -1;
        std::vector<long> need(rank);
        for (int g = 0; g < rank; ++g) need[g] = target_ab[g] - next_ab[g];
        if (!feasible(need, k - depth - 1)) continue;
        idx.push_back(static_cast<std::uint32_t>(i));
        prod.push_back(prod.back() * cs[i].word);
        ab.push_back(std::move(next_ab));
        const bool hit = self(self, depth + 1);
        ab.pop_back();
        prod.pop_back();
        idx.pop_back();
        if (hit) {
          if (depth == 0) {
            std::size_t cur = best_first.load();
            while (i < cur && !best_first.compare_exchange_weak(cur, i)) {
            }
          }
          return true;
        }
      }
      return false;
    };
    rec(rec, 0);
  });
  if (nodes) *nodes += work.load();

  for (const auto& f : found) {
    if (!f) continue;
    ConjugateDecomposition d;
    for (std::uint32_t i : *f) d.factors.emplace_back(cs[i].conjugator, cs[i].letter);
    return d;
  }
  return std::nullopt;
}

Json NormBounds::to_json() const {
  return {{"lower", lower},
          {"lower_certificate", lower_certificate},
          {"upper", upper},
          {"witness", witness.to_json()},
          {"exact", exact},
          {"exact_within_bound", exact_within_bound},
          {"budget_exceeded", budget_exceeded},
          {"nodes", nodes}};
}

NormBounds biinv_norm(const ReducedWord& w, int conj_bound, int len_bound, std::uint64_t budget) {
  if (conj_bound < 1 || len_bound < 1) throw Error(ErrorCode::InvalidArgument, "conj-bound and len-bound must be >= 1");
  NormBounds nb;
  nb.lower = abelianization_lower_bound(w);
  nb.lower_certificate = "abelianization-parity";
  nb.upper = static_cast<long>(w.length());
  for (Letter s : w.letters()) nb.witness.factors.emplace_back(ReducedWord{}, s);

  for (long k = nb.lower; k < nb.upper && k <= len_bound; k += 2) {
    try {
      auto d = find_decomposition(w, static_cast<int>(k), conj_bound, budget, &nb.nodes);
      if (d) {
        nb.upper = k;
        nb.witness = std::move(*d);
        break;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TooLarge) throw;
      nb.budget_exceeded = true;
      break;
    }
    nb.lower = k + 2;
    nb.lower_certificate = "search-exhaustion(conj_bound=" + std::to_string(conj_bound) + ")";
  }
  nb.exact_within_bound = nb.lower == nb.upper;
  nb.exact = nb.exact_within_bound && nb.lower_certificate == "abelianization-parity";
  return nb;
}

InequalityReport refute_normedness_f2() {
  const ReducedWord z = parse_word("[a,b]");
  const ReducedWord cube = z.power(3);
  const NormBounds comm = biinv_norm(z);
  const ConjugateDecomposition witness = commutator_cube_witness();
  if (!verify_witness(cube, witness)) throw Error(ErrorCode::InvalidArgument, "cube witness does not verify");
  const long cube_upper = static_cast<long>(witness.size());
  const long threefold = 3 * comm.lower;

  InequalityReport r;
  r.inequality = "free-group-normedness";
  r.lhs = std::to_string(cube_upper);
  r.rhs = std::to_string(threefold);
  r.constant_formula = "d(1,z^3) = 3 d(1,z) at z = [a,b]";
  r.satisfied = cube_upper == threefold;
  r.slack = exact_slack(Rational(cube_upper), Rational(threefold));
  r.witness = {{"z", z.to_string()}, {"z_cubed", cube.to_string()}, {"decomposition", witness.to_json()}};
  r.details = {{"l_comm", comm.lower},
               {"l_comm_exact", comm.exact},
               {"l_cube_upper", cube_upper},
               {"threefold", threefold},
               {"normed", cube_upper >= threefold}};
  return r;
}

}  // namespace groupprob
