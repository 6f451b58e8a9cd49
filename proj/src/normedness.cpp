#include "groupprob/normedness.hpp"

#include <cmath>

namespace groupprob {

namespace {

constexpr double kRelTol = 1e-9;

bool normed_equal(const GroupInstance& instance, const Scalar& lhs, const Scalar& rhs) {
  if (lhs.is_exact() && rhs.is_exact()) return lhs.exact_value() == rhs.exact_value();
  const double a = lhs.to_double();
  const double b = rhs.to_double();
  return std::fabs(a - b) <= kRelTol * std::max(std::fabs(a), std::fabs(b)) + instance.tolerance();
}

bool normed_le(const GroupInstance& instance, const Scalar& lhs, const Scalar& rhs) {
  if (lhs.is_exact() && rhs.is_exact()) return lhs.exact_value() <= rhs.exact_value();
  return lhs.to_double() <= rhs.to_double() * (1 + kRelTol) + instance.tolerance();
}

Element nth_power_iter(const GroupInstance& instance, const Element& z, long k) {
  return power(instance, z, k);
}

}  // namespace

NormednessVerdict check_j_normed(const GroupInstance& instance, const std::set<long>& j,
                                 const std::vector<Element>& elements) {
  if (j.empty()) throw Error(ErrorCode::InvalidArgument, "J must be nonempty");
  if (elements.empty()) throw Error(ErrorCode::InvalidArgument, "elements must be nonempty");
  for (long n : j)
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "J must contain positive integers");

  NormednessVerdict v;
  v.j_tested.assign(j.begin(), j.end());
  for (long n : j) v.holds[n] = true;

  for (const auto& z0 : elements) {
    instance.check_member(z0);
    const Scalar unit = instance.distance_unchecked(z0, instance.compose_unchecked(z0, z0));
    for (long n : j) {
      const Scalar lhs = instance.distance_unchecked(z0, nth_power_iter(instance, z0, n + 1));
      const Scalar rhs = n * unit;
      if (!normed_le(instance, lhs, rhs)) v.equivalence_consistent = false;
      if (normed_equal(instance, lhs, rhs)) continue;
      v.holds[n] = false;
      if (!v.counterexample) v.counterexample = NormednessCounterexample{z0, n, lhs, rhs};
    }
  }
  return v;
}

Json NormednessVerdict::to_json(const GroupInstance& instance) const {
  Json h = Json::object();
  for (const auto& [n, ok] : holds) h[std::to_string(n)] = ok;
  Json j{{"j_tested", j_tested},
         {"holds", h},
         {"normed_on_sample", all_hold()},
         {"equivalence_consistent", equivalence_consistent}};
  if (counterexample) {
    j["counterexample"] = {{"z0", instance.element_to_json(counterexample->z0)},
                           {"n", counterexample->n},
                           {"lhs", counterexample->lhs.to_string()},
                           {"rhs", counterexample->rhs.to_string()},
                           {"exact", counterexample->lhs.is_exact() && counterexample->rhs.is_exact()}};
  } else {
    j["counterexample"] = nullptr;
  }
  return j;
}

EquivalenceReport check_normed_equivalence(const GroupInstance& instance,
                                           const std::vector<Element>& elements, long n_max) {
  if (n_max < 2) throw Error(ErrorCode::InvalidArgument, "n_max must be >= 2");
  if (n_max > (1L << 20)) throw Error(ErrorCode::TooLarge, "n_max must be <= 2^20");
  EquivalenceReport r;
  r.n_max = n_max;
  long k = 0;
  r.n_dyadic = 1;
  while (r.n_dyadic < n_max) {
    r.n_dyadic *= 2;
    ++k;
  }

  std::vector<Element> closure;
  for (const auto& z : elements) {
    Element w = z;
    for (long i = 0; i < k; ++i) {
      closure.push_back(w);
      w = instance.compose_unchecked(w, w);
    }
  }
  std::set<long> all;
  for (long n = 1; n <= r.n_dyadic; ++n) all.insert(n);

  r.two = check_j_normed(instance, {2}, closure);
  r.all = check_j_normed(instance, all, elements);
  r.two_normed = r.two.all_hold();
  r.all_normed = r.all.all_hold();
  r.consistent = r.two_normed == r.all_normed && r.two.equivalence_consistent && r.all.equivalence_consistent;
  return r;
}

Json EquivalenceReport::to_json(const GroupInstance& instance) const {
  return {{"n_max", n_max},
          {"n_dyadic", n_dyadic},
          {"two_normed", two_normed},
          {"all_normed", all_normed},
          {"consistent", consistent},
          {"two", two.to_json(instance)},
          {"all", all.to_json(instance)}};
}

TorsionReport check_torsion_free(const GroupInstance& instance, const std::vector<Element>& elements,
                                 long order_max) {
  const auto one = instance.identity();
  if (!one) throw Error(ErrorCode::InvalidArgument, instance.kind() + " has no identity");
  if (order_max < 1) throw Error(ErrorCode::InvalidArgument, "order_max must be >= 1");

  TorsionReport r;
  r.order_max = order_max;
  for (const auto& z : elements) {
    instance.check_member(z);
    ++r.checked;
    if (instance.same_element(z, *one)) continue;
    Element w = z;
    for (long n = 2; n <= order_max; ++n) {
      w = instance.compose_unchecked(w, z);
      if (!instance.same_element(w, *one)) continue;
      r.torsion.push_back({z, n});
      // Dyadic powers of a torsion element repeat, so {2}-normedness must
      // fail somewhere along z, z^2, z^4, ...
      std::vector<Element> dyadic;
      Element d = z;
      for (long i = 0; i <= n; ++i) {
        dyadic.push_back(d);
        d = instance.compose_unchecked(d, d);
      }
      if (check_j_normed(instance, {2}, dyadic).all_hold()) r.cross_check_consistent = false;
      break;
    }
  }
  return r;
}

Json TorsionReport::to_json(const GroupInstance& instance) const {
  Json t = Json::array();
  for (const auto& w : torsion) t.push_back({{"element", instance.element_to_json(w.element)}, {"order", w.order}});
  return {{"order_max", order_max},
          {"checked", checked},
          {"torsion_free", torsion_free()},
          {"torsion", t},
          {"cross_check_consistent", cross_check_consistent}};
}

std::optional<long> check_weak_commutativity(const GroupInstance& instance, const Element& g,
                                             const Element& h, long n_max) {
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "n_max must be >= 1");
  if (n_max > 62) throw Error(ErrorCode::PowerOverflow, "2^n_max exceeds 64-bit exponents");
  instance.check_member(g);
  instance.check_member(h);
  Element gh = instance.compose_unchecked(g, h);
  Element gp = g;
  Element hp = h;
  for (long n = 1; n <= n_max; ++n) {
    gh = instance.compose_unchecked(gh, gh);
    gp = instance.compose_unchecked(gp, gp);
    hp = instance.compose_unchecked(hp, hp);
    if (const auto* w = std::get_if<ReducedWord>(&gh.payload()); w && w->length() > (1U << 22))
      throw Error(ErrorCode::PowerOverflow, "word powers exceed 2^22 letters");
    if (instance.same_element(gh, instance.compose_unchecked(gp, hp))) return n;
  }
  return std::nullopt;
}

}  // namespace groupprob
