#include "groupprob/rademacher.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "groupprob/instances.hpp"
#include "groupprob/kernels.hpp"
#include "groupprob/normedness.hpp"
#include "groupprob/parallel.hpp"

namespace groupprob {

namespace {

Rational json_rational_value(const Json& j, const char* name) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number_float()) return from_double(j.get<double>());
  throw Error(ErrorCode::InvalidParameter, std::string("\"") + name + "\" must be a rational");
}

void validate(const RademacherScenario& s) {
  if (!s.instance) throw Error(ErrorCode::InvalidArgument, "scenario has no group");
  if (s.elements.empty()) throw Error(ErrorCode::InvalidArgument, "scenario needs n >= 1 elements");
  if (s.p < 1 || s.q < 1) throw Error(ErrorCode::InvalidArgument, "p and q must be >= 1");
  if (s.m < 1) throw Error(ErrorCode::InvalidArgument, "exponent m must be >= 1");
  const Capabilities caps = s.instance->capabilities();
  if (!caps.is_abelian) throw Error(ErrorCode::InvalidArgument, s.instance->kind() + " is not abelian");
  if (!caps.has_inverses || !caps.has_identity)
    throw Error(ErrorCode::InvalidArgument, "Rademacher sums need a group; " + s.instance->kind() + " has no inverses");
  if (caps.exactness == DistanceExactness::SearchBased)
    throw Error(ErrorCode::Unsupported, s.instance->kind() + " has no computable distance");
  for (const auto& e : s.elements) s.instance->check_member(e);
}

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stream for sample i of a run seeded with `seed`.
std::uint64_t stream_state(std::uint64_t seed, std::uint64_t i) {
  std::uint64_t x = seed;
  const std::uint64_t base = splitmix64(x);
  return base ^ (i * 0xd1b54a32d192ed03ULL);
}

bool scalar_greater(const Scalar& a, const Scalar& t, bool inclusive) {
  if (a.is_exact() && t.is_exact())
    return inclusive ? a.exact_value() >= t.exact_value() : a.exact_value() > t.exact_value();
  return inclusive ? a.to_double() >= t.to_double() : a.to_double() > t.to_double();
}

using CountMap = std::map<Scalar, std::uint64_t>;

DistanceDistribution from_counts(const CountMap& counts, std::uint64_t total, bool exact_values) {
  DistanceDistribution d;
  d.outcomes = total;
  d.exact_values = exact_values;
  for (const auto& [v, c] : counts) {
    Rational pr(mpz_class(static_cast<unsigned long>(c)), mpz_class(static_cast<unsigned long>(total)));
    pr.canonicalize();
    d.atoms.emplace_back(v, pr);
  }
  return d;
}

struct LatticeForm {
  kernels::LatticeSums sums;
  std::int64_t scale = 1;
};

/// Integer form of x_k^m for lattice-type instances, when it fits.
std::optional<LatticeForm> lattice_form(const GroupInstance& inst, const std::vector<Element>& xs, long m) {
  auto model = inst.lattice_model();
  if (!model) return std::nullopt;
  LatticeForm f;
  f.scale = model->scale;
  f.sums.n = xs.size();
  f.sums.dim = model->moduli.size();
  f.sums.moduli = model->moduli;
  f.sums.weights = model->weights;
  for (const auto& x : xs) {
    if (!std::holds_alternative<IntVector>(x.payload())) return std::nullopt;
    const IntVector& v = x.ints();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::int64_t mod = model->moduli[i];
      __int128 c = static_cast<__int128>(v[i]) * m;
      if (mod) {
        c %= mod;
        if (c < 0) c += mod;
      } else if (c > INT64_MAX / 4 || c < -(INT64_MAX / 4)) {
        return std::nullopt;
      }
      f.sums.vectors.push_back(static_cast<std::int64_t>(c));
    }
  }
  if (kernels::max_score(f.sums) < 0) return std::nullopt;
  return f;
}

Scalar lattice_distance(std::int64_t score, std::int64_t scale) {
  Rational r(score, scale);
  r.canonicalize();
  return Scalar::exact(r);
}

Element signed_product(const GroupInstance& inst, const std::vector<Element>& plus, const std::vector<Element>& minus,
                       std::uint64_t minus_bits) {
  Element s = *inst.identity();
  for (std::size_t k = 0; k < plus.size(); ++k)
    s = inst.compose_unchecked(s, ((minus_bits >> k) & 1U) ? minus[k] : plus[k]);
  return s;
}

std::vector<Element> powers(const GroupInstance& inst, const std::vector<Element>& xs, long k) {
  std::vector<Element> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(power(inst, x, k));
  return out;
}

bool float_instance(const GroupInstance& inst) { return inst.capabilities().exactness == DistanceExactness::Float; }

}  // namespace

// ---------------------------------------------------------------------------

RademacherScenario scenario_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("group") || !j.contains("elements"))
    throw Error(ErrorCode::MalformedJson, "scenario needs \"group\" and \"elements\"");
  RademacherScenario s;
  s.instance = parse_group_spec(j.at("group"));
  if (!j.at("elements").is_array()) throw Error(ErrorCode::MalformedJson, "\"elements\" must be an array");
  for (const auto& e : j.at("elements")) s.elements.push_back(s.instance->element_from_json(e));
  if (j.contains("p")) s.p = json_rational_value(j.at("p"), "p");
  if (j.contains("q")) s.q = json_rational_value(j.at("q"), "q");
  if (j.contains("m")) {
    if (!j.at("m").is_number_integer()) throw Error(ErrorCode::InvalidParameter, "\"m\" must be an integer");
    s.m = j.at("m").get<long>();
  }
  validate(s);
  return s;
}

Json scenario_to_json(const RademacherScenario& s) {
  Json el = Json::array();
  for (const auto& e : s.elements) el.push_back(s.instance->element_to_json(e));
  Json j{{"group", s.instance->spec_json()}, {"elements", el}, {"p", format_rational(s.p)}, {"q", format_rational(s.q)}};
  if (s.m != 1) j["m"] = s.m;
  return j;
}

Rational DistanceDistribution::total() const {
  Rational t = 0;
  for (const auto& a : atoms) t += a.second;
  return t;
}

Rational DistanceDistribution::tail(const Scalar& t, bool inclusive) const {
  Rational r = 0;
  for (const auto& [v, pr] : atoms)
    if (scalar_greater(v, t, inclusive)) r += pr;
  return r;
}

Json DistanceDistribution::to_json() const {
  Json a = Json::array();
  for (const auto& [v, pr] : atoms) a.push_back({{"distance", v.to_string()}, {"prob", format_rational(pr)}});
  return {{"atoms", a}, {"outcomes", outcomes}, {"exact", exact_values}};
}

// ---------------------------------------------------------------------------

DistanceDistribution enumerate_rademacher(const RademacherScenario& s) {
  validate(s);
  const std::size_t n = s.elements.size();
  if (n > kMaxExactRademacher)
    throw Error(ErrorCode::TooLarge, "exact mode is limited to n <= 24; use sampling");
  const GroupInstance& inst = *s.instance;
  const std::uint64_t total = 1ULL << n;

  if (auto form = lattice_form(inst, s.elements, s.m)) {
    const auto hist = kernels::lattice_histogram(form->sums, kernels::default_backend()).to_map();
    CountMap counts;
    for (const auto& [score, c] : hist) counts[lattice_distance(score, form->scale)] += c;
    return from_counts(counts, total, true);
  }

  // Gray walk; flipping sign k multiplies by y_k^(-2) or y_k^2.
  const std::vector<Element> y = powers(inst, s.elements, s.m);
  const std::vector<Element> yinv = powers(inst, s.elements, -s.m);
  const std::vector<Element> up = powers(inst, s.elements, 2 * s.m);
  const std::vector<Element> down = powers(inst, s.elements, -2 * s.m);
  const Element one = *inst.identity();
  const std::size_t low = kernels::low_bits_for(n);
  const std::uint64_t blocks = 1ULL << (n - low);
  const std::size_t chunks = std::min<std::uint64_t>(blocks, worker_count());
  std::vector<CountMap> partial(chunks);
  parallel_chunks(blocks, chunks, [&](std::size_t c, std::size_t begin, std::size_t end) {
    CountMap& out = partial[c];
    for (std::uint64_t block = begin; block < end; ++block) {
      Element sum = signed_product(inst, y, yinv, block << low);
      ++out[inst.distance_unchecked(one, sum)];
      std::uint64_t gray = 0;
      for (std::uint64_t j = 1; j < (1ULL << low); ++j) {
        const unsigned k = static_cast<unsigned>(__builtin_ctzll(j));
        gray ^= 1ULL << k;
        sum = inst.compose_unchecked(sum, ((gray >> k) & 1U) ? down[k] : up[k]);
        ++out[inst.distance_unchecked(one, sum)];
      }
    }
  });
  CountMap counts;
  for (const auto& p : partial)
    for (const auto& [v, c] : p) counts[v] += c;
  return from_counts(counts, total, !float_instance(inst));
}

DistanceDistribution sample_rademacher(const RademacherScenario& s, std::uint64_t samples, std::uint64_t seed) {
  validate(s);
  if (samples == 0) throw Error(ErrorCode::InvalidArgument, "samples must be >= 1");
  const GroupInstance& inst = *s.instance;
  const std::vector<Element> y = powers(inst, s.elements, s.m);
  const std::vector<Element> yinv = powers(inst, s.elements, -s.m);
  const Element one = *inst.identity();
  const std::size_t n = y.size();
  const std::size_t chunks = std::min<std::uint64_t>(samples, worker_count());
  std::vector<CountMap> partial(chunks);
  parallel_chunks(samples, chunks, [&](std::size_t c, std::size_t begin, std::size_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      std::uint64_t state = stream_state(seed, i);
      Element sum = one;
      std::uint64_t bits = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k % 64 == 0) bits = splitmix64(state);
        sum = inst.compose_unchecked(sum, ((bits >> (k % 64)) & 1U) ? yinv[k] : y[k]);
      }
      ++partial[c][inst.distance_unchecked(one, sum)];
    }
  });
  CountMap counts;
  for (const auto& p : partial)
    for (const auto& [v, cnt] : p) counts[v] += cnt;
  return from_counts(counts, samples, !float_instance(inst));
}

// ---------------------------------------------------------------------------

MomentResult moment(const DistanceDistribution& dist, const Rational& p) {
  if (p < 1) throw Error(ErrorCode::InvalidArgument, "moment order p must be >= 1");
  MomentResult r;
  const Rational inv_p = Rational(1) / p;
  if (dist.exact_values && is_integer(p)) {
    const long pe = to_int64_checked(p.get_num());
    Rational raw = 0;
    for (const auto& [v, pr] : dist.atoms) raw += pr * rational_pow(v.exact_value(), pe);
    r.raw_exact = raw;
    r.raw = Interval::of(raw);
  } else {
    Interval raw = Interval::point(0.0);
    for (const auto& [v, pr] : dist.atoms) {
      const Interval d = v.is_exact() ? Interval::of(v.exact_value()) : Interval::around(v.to_double(), 4);
      raw = raw + Interval::of(pr) * pow(d, p);
    }
    r.raw = raw;
  }
  r.root = r.raw.hi <= 0.0 ? Interval::point(0.0) : pow(r.raw, inv_p);

  if (r.raw_exact) {
    r.root_exact = PowerProduct::power(*r.raw_exact, inv_p);
  } else if (dist.exact_values) {
    std::vector<const std::pair<Scalar, Rational>*> nonzero;
    for (const auto& a : dist.atoms)
      if (!a.first.is_zero()) nonzero.push_back(&a);
    if (nonzero.empty()) {
      r.root_exact = PowerProduct::zero_value();
    } else if (nonzero.size() == 1) {
      r.root_exact = PowerProduct::power(nonzero[0]->second, inv_p) *
                     PowerProduct::rational(nonzero[0]->first.exact_value());
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

KKRegime parse_regime(std::string_view name) {
  if (name == "normed-general") return KKRegime::NormedGeneral;
  if (name == "normed-sharp") return KKRegime::NormedSharp;
  if (name == "general") return KKRegime::General;
  throw Error(ErrorCode::InvalidParameter, "unknown regime \"" + std::string(name) + "\"");
}

std::string_view regime_name(KKRegime r) {
  switch (r) {
    case KKRegime::NormedGeneral: return "normed-general";
    case KKRegime::NormedSharp: return "normed-sharp";
    case KKRegime::General: return "general";
  }
  return "?";
}

KKConstant kk_constant(const Rational& p, const Rational& q, KKRegime regime) {
  if (p < 1 || q < 1) throw Error(ErrorCode::InvalidArgument, "p and q must be >= 1");
  const Rational inv_q = Rational(1) / q;
  switch (regime) {
    case KKRegime::NormedGeneral:
      if (q <= p) return {PowerProduct{}, "C_{p,q}=1"};
      return {PowerProduct::power(Rational(64 * q), 1) * PowerProduct::power(Rational(q / 4), inv_q),
              "C_{p,q}=64q(q/4)^{1/q}"};
    case KKRegime::NormedSharp:
      if (p != 1 || q > 2)
        throw Error(ErrorCode::InvalidArgument, "the sharp constant needs p = 1 and 1 <= q <= 2");
      return {PowerProduct::power(2, Rational(1 - inv_q)), "C_{1,q}=2^{1-1/q}"};
    case KKRegime::General:
      return {PowerProduct::power(Rational(64 * q * q), 1) * PowerProduct::power(Rational(q / 4), inv_q),
              "K_{p,q}=64q^2(q/4)^{1/q}"};
  }
  throw Error(ErrorCode::InvalidArgument, "unknown regime");
}

long kk_level(const Rational& q) {
  if (q < 1) throw Error(ErrorCode::InvalidArgument, "q must be >= 1");
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return static_cast<long>(mpz_sizeinbase(f.get_mpz_t(), 2));
}

namespace {

std::string side_string(const Side& s) {
  if (s.exact)
    if (auto r = s.exact->as_rational()) return format_rational(*r);
  return format_double(s.interval.mid());
}

void require_normed(const GroupInstance& inst, const std::vector<Element>& elements) {
  NormednessVerdict v = check_j_normed(inst, {2, 3}, elements);
  if (!v.all_hold())
    throw Error(ErrorCode::NotNormed, "normedness gate failed: " + v.to_json(inst).at("counterexample").dump());
}

}  // namespace

InequalityReport check_kk(const RademacherScenario& s, KKRegime regime) {
  validate(s);
  const KKConstant c = kk_constant(s.p, s.q, regime);
  long level = 0;
  long lhs_exponent = 1;
  if (regime == KKRegime::General) {
    level = kk_level(s.q);
    if (level > 20) throw Error(ErrorCode::TooLarge, "q too large: 2^l exceeds 2^20");
    lhs_exponent = 1L << level;
  } else {
    require_normed(*s.instance, s.elements);
  }

  RademacherScenario base = s;
  base.m = 1;
  RademacherScenario powered = s;
  powered.m = lhs_exponent;
  const DistanceDistribution law1 = enumerate_rademacher(base);
  const DistanceDistribution lawm = lhs_exponent == 1 ? law1 : enumerate_rademacher(powered);

  const MomentResult lq = moment(lawm, s.q);
  const MomentResult lp = moment(law1, s.p);
  const Side lhs = lq.side();
  Side rhs{c.interval() * lp.root, std::nullopt};
  if (lp.root_exact) rhs.exact = c.value * *lp.root_exact;

  Comparison cmp;
  if (regime != KKRegime::General && s.q == s.p) {
    // Both sides are the same L^p norm and the constant is 1.
    cmp.satisfied = true;
    cmp.tie = true;
    cmp.slack = "1";
  } else {
    cmp = compare_sides(lhs, rhs);
  }

  InequalityReport r;
  r.inequality = "khinchin-kahane";
  r.lhs = side_string(lhs);
  r.rhs = side_string(rhs);
  r.lhs_interval = lhs.interval;
  r.rhs_interval = rhs.interval;
  r.constant_value = side_string({c.interval(), c.value});
  r.constant_formula = c.formula;
  r.satisfied = cmp.satisfied;
  r.decided = cmp.decided;
  r.slack = cmp.slack;
  r.exact = law1.exact_values && lawm.exact_values;
  r.witness = scenario_to_json(s);
  r.details = {{"regime", regime_name(regime)}, {"exponent", lhs_exponent}, {"tie", cmp.tie}};
  if (regime == KKRegime::General) r.details["l"] = level;
  if (lhs.exact) r.details["lhs_exact"] = lhs.exact->to_string();
  if (rhs.exact) r.details["rhs_exact"] = rhs.exact->to_string();
  r.details["constant_exact"] = c.value.to_string();
  return r;
}

SharpnessResult sharpness_ratio(const InstancePtr& instance, const Element& x, const Rational& q) {
  if (q < 1 || q > 2) throw Error(ErrorCode::InvalidArgument, "sharpness ratio needs 1 <= q <= 2");
  instance->check_member(x);
  const auto one = instance->identity();
  if (one && instance->same_element(*one, x)) throw Error(ErrorCode::InvalidArgument, "x must not be the identity");
  require_normed(*instance, {x});

  RademacherScenario s;
  s.instance = instance;
  s.elements = {x, x};
  s.p = 1;
  s.q = q;
  const DistanceDistribution law = enumerate_rademacher(s);
  const MomentResult lq = moment(law, q);
  const MomentResult l1 = moment(law, 1);

  SharpnessResult r;
  r.expected = PowerProduct::power(2, Rational(1 - Rational(1) / q));
  if (l1.raw_exact) {
    const Rational mean = *l1.raw_exact;
    r.ratio = lq.root * Interval::of(Rational(1) / mean);
    if (is_integer(q) && lq.raw_exact)
      r.ratio_pow_q = *lq.raw_exact / rational_pow(mean, to_int64_checked(q.get_num()));
    if (lq.root_exact) {
      auto cmp = compare(*lq.root_exact * PowerProduct::power(Rational(1) / mean, 1), r.expected);
      if (cmp) r.matches_exactly = *cmp == 0;
    }
  } else {
    const Interval mean = l1.root;
    r.ratio = {lq.root.lo / mean.hi, lq.root.hi / mean.lo};
  }
  r.value = r.ratio.mid();
  return r;
}

// ---------------------------------------------------------------------------

bool validate_laminar(const LaminarFamily& family) {
  std::vector<std::set<int>> sets;
  for (const auto& b : family) {
    if (b.empty()) return false;
    sets.emplace_back(b.begin(), b.end());
  }
  for (std::size_t j = 0; j < sets.size(); ++j)
    for (std::size_t k = j + 1; k < sets.size(); ++k) {
      std::size_t common = 0;
      for (int i : sets[j]) common += sets[k].count(i);
      if (common != 0 && common != sets[j].size()) return false;
    }
  return true;
}

LaminarFamily family_from_json(const Json& j) {
  const Json& arr = j.is_object() && j.contains("family") ? j.at("family") : j;
  if (!arr.is_array()) throw Error(ErrorCode::MalformedJson, "family must be an array of index arrays");
  LaminarFamily f;
  for (const auto& b : arr) {
    if (!b.is_array()) throw Error(ErrorCode::MalformedJson, "family members must be index arrays");
    std::vector<int> set;
    for (const auto& i : b) {
      if (!i.is_number_integer()) throw Error(ErrorCode::MalformedJson, "indices must be integers");
      set.push_back(i.get<int>());
    }
    f.push_back(std::move(set));
  }
  return f;
}

LaminarFamily prefix_family(int n) {
  LaminarFamily f;
  for (int k = 1; k <= n; ++k) {
    std::vector<int> b;
    for (int i = 1; i <= k; ++i) b.push_back(i);
    f.push_back(b);
  }
  return f;
}

LaminarFamily suffix_family(int n) {
  LaminarFamily f;
  for (int k = 1; k <= n; ++k) {
    std::vector<int> b;
    for (int i = n - k + 1; i <= n; ++i) b.push_back(i);
    f.push_back(b);
  }
  return f;
}

LaminarFamily singleton_family(int n) {
  LaminarFamily f;
  for (int k = 1; k <= n; ++k) f.push_back({k});
  return f;
}

namespace {

Json family_to_json(const LaminarFamily& f) {
  Json j = Json::array();
  for (const auto& b : f) j.push_back(b);
  return j;
}

/// Law of max_k d(1, X_{B_k}^2) with X_i = x_i^(m r_i).
DistanceDistribution levy_max_law(const RademacherScenario& s, const LaminarFamily& family) {
  const GroupInstance& inst = *s.instance;
  const std::size_t n = s.elements.size();
  const std::uint64_t total = 1ULL << n;
  std::vector<std::vector<std::size_t>> sets;
  for (const auto& b : family) {
    std::set<int> uniq(b.begin(), b.end());
    std::vector<std::size_t> v;
    for (int i : uniq) v.push_back(static_cast<std::size_t>(i - 1));
    sets.push_back(v);
  }

  CountMap counts;
  if (auto form = lattice_form(inst, s.elements, 2 * s.m)) {
    const auto& ls = form->sums;
    const std::size_t d = ls.dim;
    std::vector<std::int64_t> acc(d);
    std::map<std::int64_t, std::uint64_t> hist;
    for (std::uint64_t bits = 0; bits < total; ++bits) {
      std::int64_t best = 0;
      for (const auto& b : sets) {
        std::fill(acc.begin(), acc.end(), 0);
        for (std::size_t k : b) {
          const bool neg = (bits >> k) & 1U;
          for (std::size_t i = 0; i < d; ++i) {
            const std::int64_t mod = ls.moduli[i];
            const std::int64_t v = ls.vectors[k * d + i];
            acc[i] = mod ? (acc[i] + (neg ? mod - v : v)) % mod : acc[i] + (neg ? -v : v);
          }
        }
        std::int64_t score = 0;
        for (std::size_t i = 0; i < d; ++i) {
          const std::int64_t mod = ls.moduli[i];
          const std::int64_t c = acc[i];
          score += ls.weights[i] * (mod ? std::min(c, mod - c) : (c < 0 ? -c : c));
        }
        best = std::max(best, score);
      }
      ++hist[best];
    }
    for (const auto& [score, c] : hist) counts[lattice_distance(score, form->scale)] += c;
    return from_counts(counts, total, true);
  }

  const std::vector<Element> sq = powers(inst, s.elements, 2 * s.m);
  const std::vector<Element> sqinv = powers(inst, s.elements, -2 * s.m);
  const Element one = *inst.identity();
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    std::optional<Scalar> best;
    for (const auto& b : sets) {
      Element prod = one;
      for (std::size_t k : b) prod = inst.compose_unchecked(prod, ((bits >> k) & 1U) ? sqinv[k] : sq[k]);
      Scalar dist = inst.distance_unchecked(one, prod);
      if (!best || *best < dist) best = dist;
    }
    ++counts[*best];
  }
  return from_counts(counts, total, !float_instance(inst));
}

Json rational_json(const Rational& r) { return format_rational(r); }

void finish_exact(InequalityReport& r, const Rational& lhs, const Rational& rhs) {
  r.lhs = format_rational(lhs);
  r.rhs = format_rational(rhs);
  r.satisfied = lhs <= rhs;
  r.slack = exact_slack(lhs, rhs);
}

}  // namespace

InequalityReport check_levy(const RademacherScenario& s, const LaminarFamily& family, const Rational& t_s,
                            const Rational& t_t) {
  validate(s);
  if (family.empty() || !validate_laminar(family))
    throw Error(ErrorCode::InvalidArgument, "family is not laminar: " + family_to_json(family).dump());
  for (const auto& b : family)
    for (int i : b)
      if (i < 1 || static_cast<std::size_t>(i) > s.elements.size())
        throw Error(ErrorCode::InvalidArgument, "family index " + std::to_string(i) + " out of range");
  if (t_s <= 0 || t_t <= 0) throw Error(ErrorCode::InvalidArgument, "s and t must be > 0");
  if (s.elements.size() > kMaxExactRademacher) throw Error(ErrorCode::TooLarge, "exact mode is limited to n <= 24");

  const DistanceDistribution law = enumerate_rademacher(s);
  const DistanceDistribution max_law = levy_max_law(s, family);
  const Rational lhs = max_law.tail(Rational(t_s + t_t));
  const Rational rhs = law.tail(t_s) + law.tail(t_t);

  InequalityReport r;
  r.inequality = "levy";
  r.constant_formula = "P(max d(1,X_B^2)>s+t) <= P(d(1,S_n)>s)+P(d(1,S_n)>t)";
  finish_exact(r, lhs, rhs);
  r.exact = law.exact_values;
  r.witness = scenario_to_json(s);
  r.witness["family"] = family_to_json(family);
  r.witness["s"] = rational_json(t_s);
  r.witness["t"] = rational_json(t_t);
  return r;
}

InequalityReport check_tail(const RademacherScenario& s, const Rational& a, const Rational& b, const Rational& c,
                            const Rational& d) {
  validate(s);
  if (a <= 0 || b <= 0 || c <= 0 || d <= 0) throw Error(ErrorCode::InvalidArgument, "s, t, u, v must be > 0");
  RademacherScenario doubled = s;
  doubled.m = 2 * s.m;
  const DistanceDistribution law = enumerate_rademacher(s);
  const DistanceDistribution law2 = enumerate_rademacher(doubled);
  const Rational lhs = law2.tail(Rational(a + b + c + d));
  const Rational rhs = (law.tail(a) + law.tail(b)) * (law.tail(c) + law.tail(d));

  InequalityReport r;
  r.inequality = "tail-product";
  r.constant_formula = "P(d(1,S^2)>s+t+u+v) <= (P(P_n>s)+P(P_n>t))(P(P_n>u)+P(P_n>v))";
  finish_exact(r, lhs, rhs);
  r.exact = law.exact_values;
  r.witness = scenario_to_json(s);
  r.witness["s"] = rational_json(a);
  r.witness["t"] = rational_json(b);
  r.witness["u"] = rational_json(c);
  r.witness["v"] = rational_json(d);
  return r;
}

// ---------------------------------------------------------------------------

namespace {

struct MontLaws {
  std::map<Scalar, Rational> max_law;
  std::map<Scalar, Rational> end_law;
};

Rational tail_of(const std::map<Scalar, Rational>& law, const Scalar& t) {
  Rational r = 0;
  for (const auto& [v, pr] : law)
    if (scalar_greater(v, t, true)) r += pr;
  return r;
}

}  // namespace

InequalityReport check_mont(const InstancePtr& instance, const FiniteDistribution& law, const Element& z0,
                            const Element& z1, long n, const std::vector<Rational>& t_grid, const MontMode& mode) {
  const GroupInstance& inst = *instance;
  const Capabilities caps = inst.capabilities();
  if (!caps.is_abelian) throw Error(ErrorCode::InvalidArgument, inst.kind() + " is not abelian");
  if (caps.exactness == DistanceExactness::SearchBased)
    throw Error(ErrorCode::Unsupported, inst.kind() + " has no computable distance");
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  if (t_grid.empty()) throw Error(ErrorCode::InvalidArgument, "t-grid must be nonempty");
  validate_distribution(inst, law);
  inst.check_member(z0);
  inst.check_member(z1);
  std::vector<Element> support;
  for (const auto& a : law.support) support.push_back(a.first);
  require_normed(inst, support);

  const Scalar dz = inst.distance_unchecked(z0, z1);
  auto threshold = [&](const Rational& t) -> Scalar {
    if (dz.is_exact()) return Scalar::exact((t - dz.exact_value()) / 10);
    return Scalar::approx((t.get_d() - dz.to_double()) / 10.0);
  };

  InequalityReport r;
  r.inequality = "mont";
  r.constant_formula = "P(U_n>=t) <= 3 P(d(z0,z0 S_n) >= (t-d(z0,z1))/10)";
  r.constant_value = "c1=10, c2=3";
  r.satisfied = true;
  Json per_t = Json::array();

  Json law_json = Json::array();
  for (const auto& [e, pr] : law.support)
    law_json.push_back({{"element", inst.element_to_json(e)}, {"prob", format_rational(pr)}});
  Json ts = Json::array();
  for (const auto& t : t_grid) ts.push_back(format_rational(t));
  r.witness = {{"group", inst.spec_json()},
               {"law", law_json},
               {"z0", inst.element_to_json(z0)},
               {"z1", inst.element_to_json(z1)},
               {"n", n},
               {"t_grid", ts},
               {"mode", mode.exact ? "exact" : "sample"}};

  if (mode.exact) {
    const double paths = std::pow(static_cast<double>(support.size()), static_cast<double>(n));
    if (paths > 1e7) throw Error(ErrorCode::TooLarge, "exact mode needs |support|^n <= 10^7");
    MontLaws laws;
    struct Frame {
      Element sum;
      Rational prob;
      Scalar runmax;
      long depth;
    };
    std::vector<Frame> stack{{z0, Rational(1), Scalar::exact(0), 0}};
    if (float_instance(inst)) stack.front().runmax = Scalar::approx(0.0);
    while (!stack.empty()) {
      Frame f = std::move(stack.back());
      stack.pop_back();
      if (f.depth == n) {
        laws.max_law[f.runmax] += f.prob;
        laws.end_law[inst.distance_unchecked(z0, f.sum)] += f.prob;
        continue;
      }
      for (const auto& [step, pr] : law.support) {
        Element next = inst.compose_unchecked(f.sum, step);
        Scalar dist = inst.distance_unchecked(z0, next);
        Scalar mx = f.runmax < dist ? dist : f.runmax;
        stack.push_back({std::move(next), f.prob * pr, std::move(mx), f.depth + 1});
      }
    }
    bool have_worst = false;
    Rational worst_lhs, worst_rhs;
    for (const auto& t : t_grid) {
      const Rational lhs = tail_of(laws.max_law, Scalar::exact(t));
      const Scalar thr = threshold(t);
      const Rational rhs = 3 * tail_of(laws.end_law, thr);
      const bool ok = lhs <= rhs;
      r.satisfied = r.satisfied && ok;
      per_t.push_back({{"t", format_rational(t)},
                       {"threshold", thr.to_string()},
                       {"lhs", format_rational(lhs)},
                       {"rhs", format_rational(rhs)},
                       {"satisfied", ok}});
      // Keep the tightest t: largest lhs/rhs.
      if (!have_worst || lhs * worst_rhs > worst_lhs * rhs) {
        worst_lhs = lhs;
        worst_rhs = rhs;
        have_worst = true;
      }
    }
    r.lhs = format_rational(worst_lhs);
    r.rhs = format_rational(worst_rhs);
    r.slack = exact_slack(worst_lhs, worst_rhs);
    r.exact = !float_instance(inst);
  } else {
    if (mode.samples == 0) throw Error(ErrorCode::InvalidArgument, "samples must be >= 1");
    std::vector<double> cumulative;
    double acc = 0.0;
    for (const auto& a : law.support) cumulative.push_back(acc += a.second.get_d());
    const std::size_t nt = t_grid.size();
    std::vector<Scalar> thresholds;
    for (const auto& t : t_grid) thresholds.push_back(threshold(t));
    const std::size_t chunks = std::min<std::uint64_t>(mode.samples, worker_count());
    std::vector<std::vector<std::uint64_t>> hits_lhs(chunks, std::vector<std::uint64_t>(nt));
    std::vector<std::vector<std::uint64_t>> hits_rhs(chunks, std::vector<std::uint64_t>(nt));
    parallel_chunks(mode.samples, chunks, [&](std::size_t c, std::size_t begin, std::size_t end) {
      for (std::uint64_t i = begin; i < end; ++i) {
        std::uint64_t state = stream_state(mode.seed, i);
        Element sum = z0;
        Scalar runmax = Scalar::exact(0);
        if (float_instance(inst)) runmax = Scalar::approx(0.0);
        for (long k = 0; k < n; ++k) {
          const double u = static_cast<double>(splitmix64(state) >> 11) * 0x1p-53;
          std::size_t idx = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                                     cumulative.begin());
          idx = std::min(idx, support.size() - 1);
          sum = inst.compose_unchecked(sum, support[idx]);
          Scalar dist = inst.distance_unchecked(z0, sum);
          if (runmax < dist) runmax = dist;
        }
        const Scalar end_dist = inst.distance_unchecked(z0, sum);
        for (std::size_t j = 0; j < nt; ++j) {
          if (scalar_greater(runmax, Scalar::exact(t_grid[j]), true)) ++hits_lhs[c][j];
          if (scalar_greater(end_dist, thresholds[j], true)) ++hits_rhs[c][j];
        }
      }
    });
    const double nsamp = static_cast<double>(mode.samples);
    double worst = -1.0;
    for (std::size_t j = 0; j < nt; ++j) {
      std::uint64_t a = 0, b = 0;
      for (std::size_t c = 0; c < chunks; ++c) {
        a += hits_lhs[c][j];
        b += hits_rhs[c][j];
      }
      const double p1 = static_cast<double>(a) / nsamp;
      const double p2 = static_cast<double>(b) / nsamp;
      const double sigma = std::sqrt(p1 * (1 - p1) / nsamp) + 3 * std::sqrt(p2 * (1 - p2) / nsamp);
      const bool ok = p1 <= 3 * p2 + 3 * sigma;
      r.satisfied = r.satisfied && ok;
      per_t.push_back({{"t", format_rational(t_grid[j])},
                       {"threshold", thresholds[j].to_string()},
                       {"lhs", format_double(p1)},
                       {"rhs", format_double(3 * p2)},
                       {"tolerance", format_double(3 * sigma)},
                       {"satisfied", ok}});
      const double ratio = p2 > 0 ? p1 / (3 * p2) : (p1 > 0 ? INFINITY : 0.0);
      if (ratio > worst) {
        worst = ratio;
        r.lhs = format_double(p1);
        r.rhs = format_double(3 * p2);
        r.slack = p1 > 0 ? format_double(3 * p2 / p1) : "inf";
      }
    }
    r.exact = false;
    r.witness["samples"] = mode.samples;
    r.witness["seed"] = mode.seed;
  }
  r.details["per_t"] = per_t;
  return r;
}

}  // namespace groupprob
