#include "groupprob/algebra.hpp"

#include <functional>

namespace groupprob {

const IntVector& Element::ints() const {
  if (const auto* v = std::get_if<IntVector>(&payload_)) return *v;
  throw Error(ErrorCode::InstanceMismatch, "element is not an integer vector");
}

const RealVector& Element::reals() const {
  if (const auto* v = std::get_if<RealVector>(&payload_)) return *v;
  throw Error(ErrorCode::InstanceMismatch, "element is not a real vector");
}

const RationalVector& Element::rationals() const {
  if (const auto* v = std::get_if<RationalVector>(&payload_)) return *v;
  throw Error(ErrorCode::InstanceMismatch, "element is not a rational vector");
}

const ReducedWord& Element::word() const {
  if (const auto* v = std::get_if<ReducedWord>(&payload_)) return *v;
  throw Error(ErrorCode::InstanceMismatch, "element is not a word");
}

Element GroupInstance::inverse_unchecked(const Element&) const {
  throw Error(ErrorCode::Unsupported, kind() + " has no inverses");
}

Element compose(const GroupInstance& instance, const Element& g, const Element& h) {
  instance.check_member(g);
  instance.check_member(h);
  return instance.compose_unchecked(g, h);
}

Scalar distance(const GroupInstance& instance, const Element& g, const Element& h) {
  instance.check_member(g);
  instance.check_member(h);
  return instance.distance_unchecked(g, h);
}

Element inverse(const GroupInstance& instance, const Element& g) {
  instance.check_member(g);
  if (!instance.capabilities().has_inverses)
    throw Error(ErrorCode::InvalidPower, instance.kind() + " has no inverses");
  return instance.inverse_unchecked(g);
}

Element power(const GroupInstance& instance, const Element& g, long k) {
  instance.check_member(g);
  const Capabilities caps = instance.capabilities();
  if (k <= 0 && !caps.has_inverses) {
    if (k == 0 && caps.has_identity) return *instance.identity();
    throw Error(ErrorCode::InvalidPower,
                "power " + std::to_string(k) + " requested on " + instance.kind() + " without inverses");
  }
  if (k == 0) return *instance.identity();
  Element base = k < 0 ? instance.inverse_unchecked(g) : g;
  unsigned long e = static_cast<unsigned long>(k < 0 ? -k : k);
  std::optional<Element> result;
  while (e > 0) {
    if (e & 1UL) result = result ? instance.compose_unchecked(*result, base) : base;
    e >>= 1;
    if (e > 0) base = instance.compose_unchecked(base, base);
  }
  return *result;
}

Scalar displacement(const GroupInstance& instance, const Element& a, const Element& b) {
  return distance(instance, a, compose(instance, a, b));
}

namespace {

class AdjoinedMonoid final : public GroupInstance {
 public:
  explicit AdjoinedMonoid(InstancePtr base) : base_(std::move(base)) {}

  std::string kind() const override { return base_->kind(); }

  Capabilities capabilities() const override {
    Capabilities c = base_->capabilities();
    c.has_identity = true;
    return c;
  }

  Json spec_json() const override {
    Json j = base_->spec_json();
    j["with_identity"] = true;
    return j;
  }

  void check_member(const Element& e) const override {
    if (!e.is_adjoined_unit()) base_->check_member(e);
  }

  Element compose_unchecked(const Element& g, const Element& h) const override {
    if (g.is_adjoined_unit()) return h;
    if (h.is_adjoined_unit()) return g;
    return base_->compose_unchecked(g, h);
  }

  Scalar distance_unchecked(const Element& g, const Element& h) const override {
    if (g.is_adjoined_unit() && h.is_adjoined_unit()) return Scalar::exact(0);
    if (g.is_adjoined_unit()) return unit_distance(h);
    if (h.is_adjoined_unit()) return unit_distance(g);
    return base_->distance_unchecked(g, h);
  }

  std::optional<Element> identity() const override { return Element(AdjoinedUnit{}); }

  bool same_element(const Element& a, const Element& b) const override {
    if (a.is_adjoined_unit() || b.is_adjoined_unit()) return a == b;
    return base_->same_element(a, b);
  }

  double tolerance() const override { return base_->tolerance(); }

  Element sample(std::mt19937_64& rng) const override {
    if (rng() % 8 == 0) return AdjoinedUnit{};
    return base_->sample(rng);
  }

  std::vector<Element> enumerate(std::optional<long> bound) const override {
    std::vector<Element> out{Element(AdjoinedUnit{})};
    for (auto& e : base_->enumerate(bound)) out.push_back(std::move(e));
    return out;
  }

  Json element_to_json(const Element& e) const override {
    if (e.is_adjoined_unit()) return "unit";
    return base_->element_to_json(e);
  }

  Element element_from_json(const Json& j) const override {
    if (j.is_string() && (j == "unit" || j == "1'")) return AdjoinedUnit{};
    try {
      return base_->element_from_json(j);
    } catch (const Error&) {
      // The zero vector names the attached identity of N^d \ {0} and friends.
      if (j.is_array()) {
        bool all_zero = !j.empty();
        for (const auto& c : j) {
          if (c.is_number()) {
            all_zero = all_zero && c.get<double>() == 0.0;
          } else if (c.is_string()) {
            all_zero = all_zero && parse_rational(c.get<std::string>()) == 0;
          } else {
            all_zero = false;
          }
        }
        if (all_zero) return AdjoinedUnit{};
      }
      throw;
    }
  }

  const InstancePtr& base() const { return base_; }

 private:
  Scalar unit_distance(const Element& b) const {
    return base_->distance_unchecked(b, base_->compose_unchecked(b, b));
  }

  InstancePtr base_;
};

}  // namespace

InstancePtr adjoin_identity(InstancePtr instance) {
  if (instance->capabilities().has_identity) return instance;
  return std::make_shared<AdjoinedMonoid>(std::move(instance));
}

std::optional<Element> find_idempotent(const GroupInstance& instance,
                                       const std::vector<Element>& candidates) {
  std::optional<Element> found;
  for (const auto& e : candidates) {
    instance.check_member(e);
    if (!instance.same_element(instance.compose_unchecked(e, e), e)) continue;
    if (found && !instance.same_element(*found, e))
      throw Error(ErrorCode::DuplicateIdempotent,
                  "two distinct idempotents: " + instance.element_to_json(*found).dump() + " and " +
                      instance.element_to_json(e).dump());
    found = e;
  }
  if (found) {
    for (const auto& a : candidates) {
      if (!instance.same_element(instance.compose_unchecked(*found, a), a) ||
          !instance.same_element(instance.compose_unchecked(a, *found), a))
        throw Error(ErrorCode::InvalidArgument,
                    "idempotent does not act as identity on " + instance.element_to_json(a).dump());
    }
  }
  return found;
}

Json AxiomAudit::to_json() const {
  Json j{{"instance", instance_kind},
         {"sample_size", sample_size},
         {"checked", checked},
         {"skipped", skipped},
         {"failures", failures},
         {"passed", passed()}};
  if (first_failure)
    j["first_failure"] = {{"axiom", first_failure->axiom},
                          {"witness", first_failure->witness},
                          {"detail", first_failure->detail}};
  return j;
}

AxiomAudit audit_axioms(const GroupInstance& instance, std::size_t sample_size, std::uint64_t seed) {
  if (sample_size == 0) throw Error(ErrorCode::InvalidArgument, "sample_size must be >= 1");
  const Capabilities caps = instance.capabilities();
  const bool metric = caps.exactness != DistanceExactness::SearchBased;
  const double tol = instance.tolerance();

  AxiomAudit audit;
  audit.instance_kind = instance.kind();
  audit.sample_size = sample_size;
  audit.checked = {"associativity"};
  if (caps.is_abelian) audit.checked.push_back("commutativity");
  if (metric) {
    for (const char* name : {"symmetry", "identity_of_indiscernibles", "triangle",
                             "translation_invariance", "composite_triangle"})
      audit.checked.emplace_back(name);
  } else {
    audit.skipped = {"metric axioms (search-based distance)"};
  }
  if (!caps.is_abelian) audit.skipped.emplace_back("commutativity (not claimed)");

  std::mt19937_64 rng(seed);
  auto fail = [&](const std::string& axiom, std::initializer_list<const Element*> elems,
                  const std::string& detail) {
    ++audit.failures;
    if (audit.first_failure) return;
    Json w = Json::array();
    for (const Element* e : elems) w.push_back(instance.element_to_json(*e));
    audit.first_failure = AxiomFailure{axiom, std::move(w), detail};
  };
  auto str = [](const Scalar& s) { return s.to_string(); };

  for (std::size_t i = 0; i < sample_size; ++i) {
    const Element a = instance.sample(rng);
    const Element b = instance.sample(rng);
    const Element c = instance.sample(rng);
    const Element e = instance.sample(rng);
    auto op = [&](const Element& x, const Element& y) { return instance.compose_unchecked(x, y); };

    if (!instance.same_element(op(op(a, b), c), op(a, op(b, c)))) fail("associativity", {&a, &b, &c}, "");
    if (caps.is_abelian && !instance.same_element(op(a, b), op(b, a)))
      fail("commutativity", {&a, &b}, "");
    if (!metric) continue;

    auto d = [&](const Element& x, const Element& y) { return instance.distance_unchecked(x, y); };
    const Scalar dab = d(a, b);
    const Scalar dba = d(b, a);
    if (!approx_equal(dab, dba, tol)) fail("symmetry", {&a, &b}, str(dab) + " vs " + str(dba));
    if (!d(a, a).is_zero() && !approx_equal(d(a, a), Scalar::exact(0), tol))
      fail("identity_of_indiscernibles", {&a}, "d(a,a) = " + str(d(a, a)));
    const bool same = instance.same_element(a, b);
    if (same != approx_equal(dab, Scalar::exact(0), tol))
      fail("identity_of_indiscernibles", {&a, &b}, "d(a,b) = " + str(dab));
    const Scalar dac = d(a, c);
    const Scalar dbc = d(b, c);
    if (!approx_le(dac, dab + dbc, tol)) fail("triangle", {&a, &b, &c}, str(dac) + " > " + str(dab + dbc));

    const Scalar right = d(op(a, c), op(b, c));
    const Scalar left = d(op(c, a), op(c, b));
    if (!approx_equal(right, dab, tol) || !approx_equal(left, dab, tol))
      fail("translation_invariance", {&a, &b, &c},
           "d(ac,bc) = " + str(right) + ", d(a,b) = " + str(dab) + ", d(ca,cb) = " + str(left));

    // y1 = a, y2 = b, z1 = c, z2 = e
    const Scalar lhs = d(op(a, b), op(c, e));
    const Scalar rhs = d(a, c) + d(b, e);
    if (!approx_le(lhs, rhs, tol))
      fail("composite_triangle", {&a, &b, &c, &e}, str(lhs) + " > " + str(rhs));
  }
  return audit;
}

}  // namespace groupprob
