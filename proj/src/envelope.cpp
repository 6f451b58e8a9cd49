#include "groupprob/envelope.hpp"

#include <algorithm>
#include <set>

#include "groupprob/instances.hpp"
#include "groupprob/normedness.hpp"

namespace groupprob {

std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::Semigroup: return "Semigroup";
    case Stage::Monoid: return "Monoid";
    case Stage::Difference: return "Difference";
    case Stage::Rational: return "Rational";
    case Stage::Banach: return "Banach";
  }
  return "?";
}

void validate_distribution(const GroupInstance& instance, const FiniteDistribution& dist) {
  if (dist.support.empty()) throw Error(ErrorCode::InvalidArgument, "distribution has empty support");
  Rational total = 0;
  for (std::size_t i = 0; i < dist.support.size(); ++i) {
    const auto& [e, prob] = dist.support[i];
    instance.check_member(e);
    if (prob <= 0) throw Error(ErrorCode::InvalidArgument, "probabilities must be positive");
    total += prob;
    for (std::size_t j = 0; j < i; ++j)
      if (instance.same_element(dist.support[j].first, e))
        throw Error(ErrorCode::InvalidArgument, "support elements must be distinct");
  }
  if (total != 1)
    throw Error(ErrorCode::InvalidArgument, "probabilities sum to " + format_rational(total) + ", not 1");
}

FiniteDistribution distribution_from_json(const GroupInstance& instance, const Json& j) {
  const Json& support = j.is_object() && j.contains("support") ? j.at("support") : j;
  if (!support.is_array()) throw Error(ErrorCode::MalformedJson, "distribution must be an array of atoms");
  FiniteDistribution d;
  for (const auto& atom : support) {
    Json e, p;
    if (atom.is_object()) {
      if (!atom.contains("element") || !atom.contains("prob"))
        throw Error(ErrorCode::MalformedJson, "atom needs \"element\" and \"prob\"");
      e = atom.at("element");
      p = atom.at("prob");
    } else if (atom.is_array() && atom.size() == 2) {
      e = atom[0];
      p = atom[1];
    } else {
      throw Error(ErrorCode::MalformedJson, "atom must be {element, prob} or [element, prob]");
    }
    Rational prob = p.is_string() ? parse_rational(p.get<std::string>())
                    : p.is_number_integer() ? Rational(p.get<long>())
                                            : from_double(p.get<double>());
    d.support.emplace_back(instance.element_from_json(e), prob);
  }
  validate_distribution(instance, d);
  return d;
}

Json CancellativeReport::to_json(const GroupInstance& instance) const {
  Json j{{"samples", samples}, {"cancellative", cancellative}};
  if (counterexample) {
    Json w = Json::array();
    for (const auto& e : *counterexample) w.push_back(instance.element_to_json(e));
    j["counterexample"] = w;
  }
  return j;
}

CancellativeReport check_cancellative(const GroupInstance& instance, std::size_t samples,
                                      std::uint64_t seed) {
  CancellativeReport r;
  r.samples = samples;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < samples && r.cancellative; ++i) {
    Element a = instance.sample(rng);
    Element b = instance.sample(rng);
    Element c = instance.sample(rng);
    if (instance.same_element(a, b)) continue;
    if (instance.same_element(instance.compose_unchecked(a, c), instance.compose_unchecked(b, c)) ||
        instance.same_element(instance.compose_unchecked(c, a), instance.compose_unchecked(c, b))) {
      r.cancellative = false;
      r.counterexample = std::array<Element, 3>{a, b, c};
    }
  }
  return r;
}

Json RoundtripReport::to_json() const {
  Json j{{"samples", samples}, {"comparisons", comparisons}, {"mismatches", mismatches}, {"passed", passed()}};
  if (first_mismatch) j["first_mismatch"] = *first_mismatch;
  return j;
}

namespace {

const std::set<std::string> kLinearKinds = {"free-abelian", "positive-naturals", "rational-vector"};

Rational weighted_l1(const RationalVector& w, const RationalVector& a, const RationalVector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * rational_abs(a[i] - b[i]);
  return s;
}

}  // namespace

Envelope::Envelope(InstancePtr instance, std::size_t gate_samples, std::uint64_t seed)
    : base_(std::move(instance)) {
  const Capabilities caps = base_->capabilities();
  if (!caps.is_abelian)
    throw Error(ErrorCode::NotNormed, "instance is not normed: " + base_->kind() + " is not abelian");

  CancellativeReport cancel = check_cancellative(*base_, gate_samples, seed);
  if (!cancel.cancellative)
    throw Error(ErrorCode::GateNotPassed,
                "cancellativity gate not passed: " + cancel.to_json(*base_).at("counterexample").dump());

  monoid_ = adjoin_identity(base_);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<Element> probe;
  for (std::size_t i = 0; i < gate_samples; ++i) probe.push_back(monoid_->sample(rng));
  for (auto& e : monoid_->enumerate(1)) probe.push_back(std::move(e));
  TorsionReport torsion = check_torsion_free(*monoid_, probe, 16);
  if (!torsion.torsion_free())
    throw Error(ErrorCode::NotNormed, "instance is not normed: " +
                                          monoid_->element_to_json(torsion.torsion.front().element).dump() +
                                          " has order " + std::to_string(torsion.torsion.front().order));

  if (!kLinearKinds.count(base_->kind()))
    throw Error(ErrorCode::NotNormed,
                "instance is not normed: no Banach envelope model for " + base_->kind());

  const Json spec = base_->spec_json();
  dim_ = spec.value("dim", 1L);
  if (spec.contains("weights")) {
    for (const auto& w : spec.at("weights")) weights_.push_back(parse_rational(w.get<std::string>()));
  } else {
    weights_.assign(static_cast<std::size_t>(dim_), Rational(1));
  }
  divisible_ = base_->kind() == "rational-vector";
}

RationalVector Envelope::vec(const Element& e) const {
  if (e.is_adjoined_unit()) return RationalVector(static_cast<std::size_t>(dim_), Rational(0));
  if (divisible_) return e.rationals();
  RationalVector v;
  for (auto c : e.ints()) v.emplace_back(static_cast<long>(c));
  return v;
}

Element Envelope::monoid_scale(const Element& x, long k) const {
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "monoid scale must be >= 0");
  if (k == 0) return *monoid_->identity();
  return power(*monoid_, x, k);
}

EnvelopeElement Envelope::canonical_difference(Element p, Element q) const {
  // Subtract the componentwise common part when the result stays in the
  // monoid; otherwise keep the pair and rely on cross-composition.
  RationalVector a = vec(p);
  RationalVector b = vec(q);
  bool zero_a = true;
  bool zero_b = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Rational c = std::min(a[i], b[i]);
    a[i] -= c;
    b[i] -= c;
    zero_a = zero_a && a[i] == 0;
    zero_b = zero_b && b[i] == 0;
  }
  auto to_element = [&](const RationalVector& v, bool zero) -> std::optional<Element> {
    if (zero) return *monoid_->identity();
    Element e;
    if (divisible_) {
      e = Element(v);
    } else {
      IntVector iv;
      for (const auto& c : v) iv.push_back(to_int64_checked(c.get_num()));
      e = Element(std::move(iv));
    }
    try {
      monoid_->check_member(e);
    } catch (const Error&) {
      return std::nullopt;
    }
    return e;
  };
  auto pa = to_element(a, zero_a);
  auto qb = to_element(b, zero_b);
  EnvelopeElement x;
  x.stage = Stage::Difference;
  if (pa && qb) {
    x.p = std::move(*pa);
    x.q = std::move(*qb);
  } else {
    x.p = std::move(p);
    x.q = std::move(q);
  }
  return x;
}

EnvelopeElement Envelope::semigroup(const Element& g) const {
  base_->check_member(g);
  EnvelopeElement x;
  x.stage = Stage::Semigroup;
  x.p = g;
  return x;
}

EnvelopeElement Envelope::to_monoid(const EnvelopeElement& x) const {
  if (x.stage != Stage::Semigroup && x.stage != Stage::Monoid)
    throw Error(ErrorCode::InvalidArgument, "only semigroup values map into the monoid");
  monoid_->check_member(x.p);
  EnvelopeElement y = x;
  y.stage = Stage::Monoid;
  return y;
}

EnvelopeElement Envelope::grothendieck_lift(const Element& p, const Element& q) const {
  monoid_->check_member(p);
  monoid_->check_member(q);
  return canonical_difference(p, q);
}

EnvelopeElement Envelope::to_difference(const EnvelopeElement& x) const {
  switch (x.stage) {
    case Stage::Semigroup:
    case Stage::Monoid: return grothendieck_lift(x.p, *monoid_->identity());
    case Stage::Difference: return x;
    default: throw Error(ErrorCode::InvalidArgument, "cannot map " + std::string(stage_name(x.stage)) + " to G_Z");
  }
}

bool Envelope::difference_equal(const EnvelopeElement& x, const EnvelopeElement& y) const {
  return monoid_->same_element(monoid_->compose_unchecked(x.p, y.q), monoid_->compose_unchecked(x.q, y.p));
}

Rational Envelope::difference_distance(const EnvelopeElement& x, const EnvelopeElement& y) const {
  // d(p - q, r - s) = d(p + s, q + r)
  Scalar d = monoid_->distance_unchecked(monoid_->compose_unchecked(x.p, y.q),
                                         monoid_->compose_unchecked(x.q, y.p));
  return d.exact_value();
}

EnvelopeElement Envelope::difference_add(const EnvelopeElement& x, const EnvelopeElement& y) const {
  return canonical_difference(monoid_->compose_unchecked(x.p, y.p), monoid_->compose_unchecked(x.q, y.q));
}

EnvelopeElement Envelope::difference_negate(const EnvelopeElement& x) const {
  EnvelopeElement y = x;
  std::swap(y.p, y.q);
  return y;
}

EnvelopeElement Envelope::difference_zero() const {
  return canonical_difference(*monoid_->identity(), *monoid_->identity());
}

EnvelopeElement Envelope::difference_scale(const EnvelopeElement& x, long k) const {
  return canonical_difference(monoid_scale(x.p, k), monoid_scale(x.q, k));
}

EnvelopeElement Envelope::reduce_rational(EnvelopeElement x) const {
  if (x.denominator == 1) return x;
  RationalVector a = vec(x.p);
  RationalVector b = vec(x.q);
  if (divisible_) {
    for (auto& c : a) c /= x.denominator;
    for (auto& c : b) c /= x.denominator;
    auto to_el = [&](const RationalVector& v, const Element& orig) -> Element {
      if (orig.is_adjoined_unit()) return orig;
      return Element(v);
    };
    EnvelopeElement y = canonical_difference(to_el(a, x.p), to_el(b, x.q));
    y.stage = Stage::Rational;
    y.denominator = 1;
    return y;
  }
  mpz_class g = x.denominator;
  for (const auto& c : a) g = gcd(g, c.get_num());
  for (const auto& c : b) g = gcd(g, c.get_num());
  if (g == 1) return x;
  auto shrink = [&](const Element& e) -> Element {
    if (e.is_adjoined_unit()) return e;
    IntVector v = e.ints();
    if (std::all_of(v.begin(), v.end(), [](auto c) { return c == 0; })) return e;
    for (auto& c : v) c /= g.get_si();
    return v;
  };
  x.p = shrink(x.p);
  x.q = shrink(x.q);
  x.denominator /= g;
  return x;
}

EnvelopeElement Envelope::rationalize(const EnvelopeElement& x, long k) const {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "rationalize needs k >= 1");
  EnvelopeElement y = x.stage == Stage::Rational ? x : to_difference(x);
  y.stage = Stage::Rational;
  y.denominator *= k;
  return reduce_rational(std::move(y));
}

EnvelopeElement Envelope::to_rational(const EnvelopeElement& x) const {
  if (x.stage == Stage::Rational) return x;
  return rationalize(x, 1);
}

namespace {
long as_long(const mpz_class& z) {
  if (!z.fits_slong_p()) throw Error(ErrorCode::TooLarge, "denominator exceeds 64 bits");
  return z.get_si();
}
}  // namespace

bool Envelope::rational_equal(const EnvelopeElement& g, const EnvelopeElement& h) const {
  return difference_equal(difference_scale(g, as_long(h.denominator)), difference_scale(h, as_long(g.denominator)));
}

Rational Envelope::rational_distance(const EnvelopeElement& g, const EnvelopeElement& h) const {
  // d_Q(g, h) = d_Z(n_h (n_g g), n_g (n_h h)) / (n_g n_h)
  const EnvelopeElement a = to_rational(g);
  const EnvelopeElement b = to_rational(h);
  Rational d = difference_distance(difference_scale(a, as_long(b.denominator)),
                                   difference_scale(b, as_long(a.denominator)));
  return d / Rational(mpz_class(a.denominator * b.denominator));
}

EnvelopeElement Envelope::rational_scale(const EnvelopeElement& g, const Rational& r) const {
  const EnvelopeElement a = to_rational(g);
  if (r == 0) {
    EnvelopeElement z = difference_zero();
    z.stage = Stage::Rational;
    return z;
  }
  EnvelopeElement y = difference_scale(a, as_long(abs(r.get_num())));
  if (r < 0) y = difference_negate(y);
  y.stage = Stage::Rational;
  y.denominator = a.denominator * r.get_den();
  return reduce_rational(std::move(y));
}

EnvelopeElement Envelope::rational_add(const EnvelopeElement& g, const EnvelopeElement& h) const {
  const EnvelopeElement a = to_rational(g);
  const EnvelopeElement b = to_rational(h);
  EnvelopeElement y = difference_add(difference_scale(a, as_long(b.denominator)),
                                     difference_scale(b, as_long(a.denominator)));
  y.stage = Stage::Rational;
  y.denominator = a.denominator * b.denominator;
  return reduce_rational(std::move(y));
}

EnvelopeElement Envelope::embed_to_banach(const EnvelopeElement& x) const {
  if (x.stage == Stage::Banach) return x;
  EnvelopeElement r = to_rational(x);
  RationalVector a = vec(r.p);
  RationalVector b = vec(r.q);
  EnvelopeElement y;
  y.stage = Stage::Banach;
  y.coords.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    y.coords[i] = (a[i] - b[i]) / r.denominator;
    y.coords[i].canonicalize();
  }
  return y;
}

Rational Envelope::banach_distance(const EnvelopeElement& x, const EnvelopeElement& y) const {
  return weighted_l1(weights_, embed_to_banach(x).coords, embed_to_banach(y).coords);
}

Rational Envelope::banach_norm(const EnvelopeElement& x) const {
  return weighted_l1(weights_, embed_to_banach(x).coords, RationalVector(static_cast<std::size_t>(dim_), Rational(0)));
}

EnvelopeElement Envelope::expectation(const FiniteDistribution& dist) const {
  validate_distribution(*monoid_, dist);
  EnvelopeElement out;
  out.stage = Stage::Banach;
  out.coords.assign(static_cast<std::size_t>(dim_), Rational(0));
  for (const auto& [e, prob] : dist.support) {
    EnvelopeElement x;
    x.stage = Stage::Monoid;
    x.p = e;
    const RationalVector c = embed_to_banach(x).coords;
    for (std::size_t i = 0; i < c.size(); ++i) out.coords[i] += prob * c[i];
  }
  for (auto& c : out.coords) c.canonicalize();
  return out;
}

Json Envelope::to_json(const EnvelopeElement& x) const {
  Json j{{"stage", stage_name(x.stage)}};
  switch (x.stage) {
    case Stage::Semigroup:
    case Stage::Monoid: j["value"] = monoid_->element_to_json(x.p); break;
    case Stage::Rational: j["denominator"] = x.denominator.get_str(); [[fallthrough]];
    case Stage::Difference:
      j["p"] = monoid_->element_to_json(x.p);
      j["q"] = monoid_->element_to_json(x.q);
      break;
    case Stage::Banach: {
      Json c = Json::array();
      for (const auto& v : x.coords) c.push_back(format_rational(v));
      j["coords"] = c;
      break;
    }
  }
  return j;
}

Json Envelope::trace(const Element& g) const {
  const EnvelopeElement m = to_monoid(EnvelopeElement{Stage::Monoid, g, {}, 1, {}});
  const EnvelopeElement d = to_difference(m);
  const EnvelopeElement r = to_rational(d);
  const EnvelopeElement b = embed_to_banach(r);
  const Element one = *monoid_->identity();

  Json stages = Json::array();
  Json jm = to_json(m);
  jm["norm"] = monoid_->distance_unchecked(one, g).to_string();
  stages.push_back(jm);
  Json jd = to_json(d);
  jd["norm"] = format_rational(difference_distance(d, difference_zero()));
  stages.push_back(jd);
  Json jr = to_json(r);
  jr["norm"] = format_rational(rational_distance(r, to_rational(difference_zero())));
  stages.push_back(jr);
  Json jb = to_json(b);
  jb["norm"] = format_rational(banach_norm(b));
  stages.push_back(jb);
  return {{"group", base_->spec_json()}, {"element", monoid_->element_to_json(g)}, {"stages", stages}};
}

RoundtripReport envelope_roundtrip(const Envelope& env, std::size_t samples, std::uint64_t seed) {
  RoundtripReport r;
  r.samples = samples;
  const GroupInstance& base = env.base();
  InstancePtr direct = make_rational_vector(env.dim(), env.weights());
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> denom(1, 6);

  auto record = [&](const Json& detail, const std::vector<Rational>& values) {
    ++r.comparisons;
    for (const auto& v : values) {
      if (v == values.front()) continue;
      ++r.mismatches;
      if (!r.first_mismatch) {
        Json j = detail;
        Json vs = Json::array();
        for (const auto& w : values) vs.push_back(format_rational(w));
        j["values"] = vs;
        r.first_mismatch = j;
      }
      return;
    }
  };

  for (std::size_t i = 0; i < samples; ++i) {
    const Element x = base.sample(rng);
    const Element y = base.sample(rng);
    const long k = denom(rng);
    const long l = denom(rng);
    const Json detail{{"x", base.element_to_json(x)}, {"y", base.element_to_json(y)}, {"k", k}, {"l", l}};

    const EnvelopeElement sx = env.semigroup(x);
    const EnvelopeElement sy = env.semigroup(y);
    const EnvelopeElement mx = env.to_monoid(sx);
    const EnvelopeElement my = env.to_monoid(sy);
    const EnvelopeElement dx = env.to_difference(mx);
    const EnvelopeElement dy = env.to_difference(my);
    const EnvelopeElement qx = env.to_rational(dx);
    const EnvelopeElement qy = env.to_rational(dy);

    // Every arrow of the chain is an isometry.
    Json arrows = detail;
    arrows["check"] = "isometry chain G -> G' -> G_Z -> G_Q -> B";
    record(arrows, {base.distance_unchecked(x, y).exact_value(), env.monoid().distance_unchecked(x, y).exact_value(),
                    env.difference_distance(dx, dy), env.rational_distance(qx, qy), env.banach_distance(qx, qy)});

    // Composite G_Q(G_Z(G')) against the direct Q^d model.
    const EnvelopeElement gx = env.rationalize(dx, k);
    const EnvelopeElement gy = env.rationalize(dy, l);
    RationalVector vx = env.embed_to_banach(mx).coords;
    RationalVector vy = env.embed_to_banach(my).coords;
    for (auto& c : vx) c /= k;
    for (auto& c : vy) c /= l;
    for (auto& c : vx) c.canonicalize();
    for (auto& c : vy) c.canonicalize();
    Json composite = detail;
    composite["check"] = "G_Q(G_Z(G')) vs direct rationalization";
    record(composite, {env.rational_distance(gx, gy), direct->distance_unchecked(vx, vy).exact_value(),
                       env.banach_distance(gx, gy)});

    // Same class under a different representative: x/k = (l x)/(k l).
    const EnvelopeElement alt = env.rationalize(env.difference_scale(dx, l), k * l);
    Json rep = detail;
    rep["check"] = "representative independence";
    record(rep, {env.rational_distance(gx, gy), env.rational_distance(alt, gy)});
    rep["check"] = "representative equality";
    record(rep, {Rational(1), Rational(env.rational_equal(alt, gx) ? 1 : 0)});
  }
  return r;
}

}  // namespace groupprob
