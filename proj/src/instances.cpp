#include "groupprob/instances.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace groupprob {

namespace {

constexpr long kMaxDim = 64;
constexpr long kMaxEdges = 62;
constexpr long kMaxModulus = 1L << 30;
constexpr std::size_t kMaxEnumeration = 1U << 24;

[[noreturn]] void mismatch(const std::string& kind, const std::string& what) {
  throw Error(ErrorCode::InstanceMismatch, kind + ": " + what);
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::PowerOverflow, "coordinate overflow");
  return r;
}

std::int64_t checked_neg(std::int64_t a) {
  if (a == INT64_MIN) throw Error(ErrorCode::PowerOverflow, "coordinate overflow");
  return -a;
}

std::int64_t json_int(const Json& j, const std::string& kind) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_string()) {
    Rational r = parse_rational(j.get<std::string>());
    if (!is_integer(r)) mismatch(kind, "coordinate is not an integer");
    return to_int64_checked(r.get_num());
  }
  mismatch(kind, "coordinate is not an integer");
}

Rational json_rational(const Json& j) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_number_float()) return from_double(j.get<double>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw Error(ErrorCode::InvalidParameter, "expected a rational, got " + j.dump());
}

/// Shared weighted-coordinate bookkeeping.
class WeightedInstance : public GroupInstance {
 protected:
  WeightedInstance(std::string kind, long dim, std::optional<RationalVector> weights)
      : kind_(std::move(kind)), dim_(dim), explicit_weights_(weights.has_value()) {
    if (dim < 1 || dim > kMaxDim)
      throw Error(ErrorCode::InvalidParameter, kind_ + ": dimension must be in [1, 64]");
    weights_ = weights ? std::move(*weights) : RationalVector(static_cast<std::size_t>(dim), Rational(1));
    if (weights_.size() != static_cast<std::size_t>(dim))
      throw Error(ErrorCode::InvalidParameter, kind_ + ": need one weight per coordinate");
    for (const auto& w : weights_)
      if (w <= 0) throw Error(ErrorCode::InvalidParameter, kind_ + ": weights must be positive");
    weights_d_.reserve(weights_.size());
    for (const auto& w : weights_) weights_d_.push_back(w.get_d());
  }

 public:
  std::string kind() const override { return kind_; }
  long dim() const { return dim_; }
  const RationalVector& weights() const { return weights_; }

 protected:
  void add_weights(Json& j) const {
    if (!explicit_weights_) return;
    Json w = Json::array();
    for (const auto& x : weights_) w.push_back(format_rational(x));
    j["weights"] = w;
  }

  LatticeModel lattice(std::vector<std::int64_t> moduli) const {
    mpz_class scale = lcm_of_denominators(weights_);
    LatticeModel m;
    m.moduli = std::move(moduli);
    m.scale = to_int64_checked(scale);
    for (const auto& w : weights_) {
      Rational scaled = w * scale;
      m.weights.push_back(to_int64_checked(scaled.get_num()));
    }
    return m;
  }

  void check_size(std::size_t n) const {
    if (n != static_cast<std::size_t>(dim_)) mismatch(kind_, "wrong dimension");
  }

  std::string kind_;
  long dim_;
  bool explicit_weights_;
  RationalVector weights_;
  std::vector<double> weights_d_;
};

std::vector<IntVector> integer_box(long dim, std::int64_t lo, std::int64_t hi) {
  const double count = std::pow(static_cast<double>(hi - lo + 1), static_cast<double>(dim));
  if (count > static_cast<double>(kMaxEnumeration))
    throw Error(ErrorCode::TooLarge, "enumeration exceeds 2^24 elements");
  std::vector<IntVector> out;
  IntVector cur(static_cast<std::size_t>(dim), lo);
  while (true) {
    out.push_back(cur);
    long i = dim - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == hi) {
      cur[static_cast<std::size_t>(i)] = lo;
      --i;
    }
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
  }
  return out;
}

// ---------------------------------------------------------------------------

class FreeAbelian : public WeightedInstance {
 public:
  FreeAbelian(long dim, std::optional<RationalVector> weights)
      : WeightedInstance("free-abelian", dim, std::move(weights)) {}

  Capabilities capabilities() const override { return {true, true, true, DistanceExactness::ExactRational}; }

  Json spec_json() const override {
    Json j{{"kind", kind_}, {"dim", dim_}};
    add_weights(j);
    return j;
  }

  void check_member(const Element& e) const override {
    if (!std::holds_alternative<IntVector>(e.payload())) mismatch(kind_, "expected an integer vector");
    check_size(e.ints().size());
  }

  Element compose_unchecked(const Element& g, const Element& h) const override {
    IntVector r(g.ints().size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = checked_add(g.ints()[i], h.ints()[i]);
    return r;
  }

  Scalar distance_unchecked(const Element& g, const Element& h) const override {
    Rational d = 0;
    for (std::size_t i = 0; i < g.ints().size(); ++i) {
      mpz_class diff = mpz_class(static_cast<long>(g.ints()[i])) - mpz_class(static_cast<long>(h.ints()[i]));
      d += weights_[i] * Rational(abs(diff));
    }
    return Scalar::exact(d);
  }

  std::optional<Element> identity() const override { return Element(IntVector(static_cast<std::size_t>(dim_), 0)); }

  Element inverse_unchecked(const Element& g) const override {
    IntVector r(g.ints().size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = checked_neg(g.ints()[i]);
    return r;
  }

  Element sample(std::mt19937_64& rng) const override {
    std::uniform_int_distribution<std::int64_t> coord(-5, 5);
    IntVector v(static_cast<std::size_t>(dim_));
    for (auto& c : v) c = coord(rng);
    return v;
  }

  std::vector<Element> enumerate(std::optional<long> bound) const override {
    if (!bound) throw Error(ErrorCode::BoundRequired, kind_ + " is infinite; a coordinate bound is required");
    std::vector<Element> out;
    for (auto& v : integer_box(dim_, -*bound, *bound)) out.emplace_back(std::move(v));
    return out;
  }

  Json element_to_json(const Element& e) const override { return e.ints(); }

  Element element_from_json(const Json& j) const override {
    if (!j.is_array()) mismatch(kind_, "element must be an array");
    IntVector v;
    for (const auto& c : j) v.push_back(json_int(c, kind_));
    check_size(v.size());
    return v;
  }

  std::optional<LatticeModel> lattice_model() const override {
    return lattice(std::vector<std::int64_t>(static_cast<std::size_t>(dim_), 0));
  }
};

// ---------------------------------------------------------------------------

class Cyclic : public WeightedInstance {
 public:
  Cyclic(long modulus, long dim, std::optional<RationalVector> weights, std::string kind = "cyclic")
      : WeightedInstance(std::move(kind), dim, std::move(weights)), modulus_(modulus) {
    if (modulus < 2 || modulus > kMaxModulus)
      throw Error(ErrorCode::InvalidParameter, kind_ + ": modulus must be in [2, 2^30]");
  }

  Capabilities capabilities() const override { return {true, true, true, DistanceExactness::ExactRational}; }

  Json spec_json() const override {
    Json j{{"kind", kind_}, {"modulus", modulus_}, {"dim", dim_}};
    add_weights(j);
    return j;
  }

  void check_member(const Element& e) const override {
    if (!std::holds_alternative<IntVector>(e.payload())) mismatch(kind_, "expected a residue vector");
    check_size(e.ints().size());
    for (auto c : e.ints())
      if (c < 0 || c >= modulus_) mismatch(kind_, "residue outside [0, m)");
  }

  Element compose_unchecked(const Element& g, const Element& h) const override {
    IntVector r(g.ints().size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = (g.ints()[i] + h.ints()[i]) % modulus_;
    return r;
  }

  Scalar distance_unchecked(const Element& g, const Element& h) const override {
    Rational d = 0;
    for (std::size_t i = 0; i < g.ints().size(); ++i) {
      std::int64_t r = ((g.ints()[i] - h.ints()[i]) % modulus_ + modulus_) % modulus_;
      d += weights_[i] * Rational(static_cast<long>(std::min(r, modulus_ - r)));
    }
    return Scalar::exact(d);
  }

  std::optional<Element> identity() const override { return Element(IntVector(static_cast<std::size_t>(dim_), 0)); }

  Element inverse_unchecked(const Element& g) const override {
    IntVector r(g.ints().size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = (modulus_ - g.ints()[i]) % modulus_;
    return r;
  }

  Element sample(std::mt19937_64& rng) const override {
    std::uniform_int_distribution<std::int64_t> coord(0, modulus_ - 1);
    IntVector v(static_cast<std::size_t>(dim_));
    for (auto& c : v) c = coord(rng);
    return v;
  }

  std::vector<Element> enumerate(std::optional<long>) const override {
    std::vector<Element> out;
    for (auto& v : integer_box(dim_, 0, modulus_ - 1)) out.emplace_back(std::move(v));
    return out;
  }

  Json element_to_json(const Element& e) const override { return e.ints(); }

  Element element_from_json(const Json& j) const override {
    IntVector v;
    if (j.is_array()) {
      for (const auto& c : j) v.push_back(json_int(c, kind_));
    } else if (j.is_number_integer() && dim_ == 1) {
      v.push_back(j.get<std::int64_t>());
    } else {
      mismatch(kind_, "element must be an array of residues");
    }
    check_size(v.size());
    for (auto& c : v) c = ((c % modulus_) + modulus_) % modulus_;
    return v;
  }

  std::optional<LatticeModel> lattice_model() const override {
    return lattice(std::vector<std::int64_t>(static_cast<std::size_t>(dim_), modulus_));
  }

 protected:
  std::int64_t modulus_;
};

// ---------------------------------------------------------------------------

/// (Z/2)^E with weighted Hamming distance; elements print as bit strings.
class GraphSpace final : public Cyclic {
 public:
  GraphSpace(long edges, std::optional<RationalVector> weights)
      : Cyclic(2, check_edges(edges), std::move(weights), "graph-space") {}

  Json spec_json() const override {
    Json j{{"kind", kind_}, {"edges", dim_}};
    add_weights(j);
    return j;
  }

  Json element_to_json(const Element& e) const override {
    std::string s;
    for (auto b : e.ints()) s.push_back(b ? '1' : '0');
    return s;
  }

  Element element_from_json(const Json& j) const override {
    if (!j.is_string()) return Cyclic::element_from_json(j);
    IntVector v;
    for (char c : j.get<std::string>()) {
      if (c != '0' && c != '1') mismatch(kind_, "bit strings use 0 and 1 only");
      v.push_back(c - '0');
    }
    check_size(v.size());
    return v;
  }

 private:
  static long check_edges(long edges) {
    if (edges < 1 || edges > kMaxEdges)
      throw Error(ErrorCode::InvalidParameter, "graph-space: edges must be in [1, 62]");
    return edges;
  }
};

// ---------------------------------------------------------------------------

class Torus final : public WeightedInstance {
 public:
  static constexpr double kTolerance = 1e-12;

  Torus(long dim, std::optional<RationalVector> weights) : WeightedInstance("torus", dim, std::move(weights)) {}

  Capabilities capabilities() const override { return {true, true, true, DistanceExactness::Float}; }

  Json spec_json() const override {
    Json j{{"kind", kind_}, {"dim", dim_}};
    add_weights(j);
    return j;
  }

  void check_member(const Element& e) const override {
    if (!std::holds_alternative<RealVector>(e.payload())) mismatch(kind_, "expected a real vector");
    check_size(e.reals().size());
    for (double c : e.reals())
      if (!(c >= 0.0 && c < 1.0)) mismatch(kind_, "torus coordinates must lie in [0, 1)");
  }

  static double wrap(double x) {
    double r = x - std::floor(x);
    return r >= 1.0 ? 0.0 : r;
  }

  static double arc(double x) {
    double r = std::fabs(x - std::nearbyint(x));
    return r;
  }

  Element compose_unchecked(const Element& g, const Element& h) const override {
    RealVector r(g.reals().size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = wrap(g.reals()[i] + h.reals()[i]);
    return r;
  }

  Scalar distance_unchecked(const Element& g, const Element& h) const override {
    double d = 0.0;
    for (std::size_t i = 0; i < g.reals().size(); ++i) d += weights_d_[i] * arc(g.reals()[i] - h.reals()[i]);
    return Scalar::approx(d);
  }

  std::optional<Element> identity() const override { return Element(RealVector(static_cast<std::size_t>(dim_), 0.0)); }

  Element inverse_unchecked(const Element& g) const override {
    RealVector r(g.reals().size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = wrap(-g.reals()[i]);
    return r;
  }

  bool same_element(const Element& a, const Element& b) const override {
    for (std::size_t i = 0; i < a.reals().size(); ++i)
      if (arc(a.reals()[i] - b.reals()[i]) > kTolerance) return false;
    return true;
  }

  double tolerance() const override { return kTolerance; }

  Element sample(std::mt19937_64& rng) const override {
    std::uniform_real_distribution<double> coord(0.0, 1.0);
    RealVector v(static_cast<std::size_t>(dim_));
    for (auto& c : v) c = wrap(coord(rng));
    return v;
  }

  std::vector<Element> enumerate(std::optional<long> bound) const override {
    if (!bound || *bound < 1)
      throw Error(ErrorCode::BoundRequired, "torus is infinite; a grid resolution is required");
    std::vector<Element> out;
    for (auto& v : integer_box(dim_, 0, *bound - 1)) {
      RealVector r;
      for (auto k : v) r.push_back(static_cast<double>(k) / static_cast<double>(*bound));
      out.emplace_back(std::move(r));
    }
    return out;
  }

  Json element_to_json(const Element& e) const override { return e.reals(); }

  Element element_from_json(const Json& j) const override {
    RealVector v;
    auto coord = [&](const Json& c) {
      if (c.is_number()) return wrap(c.get<double>());
      if (c.is_string()) return wrap(parse_rational(c.get<std::string>()).get_d());
      mismatch(kind_, "torus coordinates are numbers or rational strings");
    };
    if (j.is_array()) {
      for (const auto& c : j) v.push_back(coord(c));
    } else if (dim_ == 1) {
      v.push_back(coord(j));
    } else {
      mismatch(kind_, "element must be an array");
    }
    check_size(v.size());
    return v;
  }
};

// ---------------------------------------------------------------------------

class FreeGroup final : public GroupInstance {
 public:
  explicit FreeGroup(long rank) : rank_(rank) {
    if (rank < 1 || rank > 26) throw Error(ErrorCode::InvalidParameter, "free-group: rank must be in [1, 26]");
  }

  std::string kind() const override { return "free-group"; }
  Capabilities capabilities() const override { return {true, true, false, DistanceExactness::SearchBased}; }
  Json spec_json() const override { return {{"kind", "free-group"}, {"rank", rank_}}; }

  void check_member(const Element& e) const override {
    if (!std::holds_alternative<ReducedWord>(e.payload())) mismatch(kind(), "expected a reduced word");
    if (e.word().max_generator() > rank_) mismatch(kind(), "generator outside the rank");
  }

  Element compose_unchecked(const Element& g, const Element& h) const override { return g.word() * h.word(); }

  Scalar distance_unchecked(const Element&, const Element&) const override {
    throw Error(ErrorCode::Unsupported,
                "free-group distance is the search-based bi-invariant word norm; use word-norm");
  }

  std::optional<Element> identity() const override { return Element(ReducedWord{}); }
  Element inverse_unchecked(const Element& g) const override { return g.word().inverse(); }

  Element sample(std::mt19937_64& rng) const override {
    std::uniform_int_distribution<int> len(0, 6);
    std::uniform_int_distribution<int> gen(1, static_cast<int>(rank_));
    std::vector<Letter> letters;
    for (int i = len(rng); i > 0; --i) {
      int g = gen(rng);
      letters.push_back(static_cast<Letter>(rng() % 2 ? g : -g));
    }
    return ReducedWord::reduce(letters);
  }

  std::vector<Element> enumerate(std::optional<long> bound) const override {
    if (!bound) throw Error(ErrorCode::BoundRequired, "free-group is infinite; a word-length bound is required");
    std::vector<Letter> alphabet;
    for (long g = 1; g <= rank_; ++g) {
      alphabet.push_back(static_cast<Letter>(g));
      alphabet.push_back(static_cast<Letter>(-g));
    }
    std::vector<Element> out{Element(ReducedWord{})};
    std::vector<ReducedWord> frontier{ReducedWord{}};
    for (long len = 1; len <= *bound; ++len) {
      std::vector<ReducedWord> next;
      for (const auto& w : frontier) {
        for (Letter l : alphabet) {
          if (!w.empty() && w.letters().back() == -l) continue;
          next.push_back(w * ReducedWord::generator(l));
        }
      }
      if (out.size() + next.size() > kMaxEnumeration) throw Error(ErrorCode::TooLarge, "enumeration too large");
      std::sort(next.begin(), next.end());
      for (const auto& w : next) out.emplace_back(w);
      frontier = std::move(next);
    }
    return out;
  }

  Json element_to_json(const Element& e) const override { return e.word().to_string(); }

  Element element_from_json(const Json& j) const override {
    if (!j.is_string()) mismatch(kind(), "element must be a word string");
    ReducedWord w = parse_word(j.get<std::string>());
    if (w.max_generator() > rank_) mismatch(kind(), "generator outside the rank");
    return w;
  }

 private:
  long rank_;
};

// ---------------------------------------------------------------------------

/// N^d \ {0} under addition: cancellative, no idempotent.
class PositiveNaturals final : public WeightedInstance {
 public:
  PositiveNaturals(long dim, std::optional<RationalVector> weights)
      : WeightedInstance("positive-naturals", dim, std::move(weights)) {}

  Capabilities capabilities() const override { return {false, false, true, DistanceExactness::ExactRational}; }

  Json spec_json() const override {
    Json j{{"kind", kind_}, {"dim", dim_}};
    add_weights(j);
    return j;
  }

  void check_member(const Element& e) const override {
    if (!std::holds_alternative<IntVector>(e.payload())) mismatch(kind_, "expected a natural vector");
    check_size(e.ints().size());
    bool nonzero = false;
    for (auto c : e.ints()) {
      if (c < 0) mismatch(kind_, "coordinates must be >= 0");
      nonzero = nonzero || c > 0;
    }
    if (!nonzero) mismatch(kind_, "the zero vector is not in N^d \\ {0}");
  }

  Element compose_unchecked(const Element& g, const Element& h) const override {
    IntVector r(g.ints().size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = checked_add(g.ints()[i], h.ints()[i]);
    return r;
  }

  Scalar distance_unchecked(const Element& g, const Element& h) const override {
    Rational d = 0;
    for (std::size_t i = 0; i < g.ints().size(); ++i) {
      std::int64_t diff = g.ints()[i] - h.ints()[i];
      d += weights_[i] * Rational(static_cast<long>(diff < 0 ? -diff : diff));
    }
    return Scalar::exact(d);
  }

  Element sample(std::mt19937_64& rng) const override {
    std::uniform_int_distribution<std::int64_t> coord(0, 6);
    IntVector v(static_cast<std::size_t>(dim_));
    do {
      for (auto& c : v) c = coord(rng);
    } while (std::all_of(v.begin(), v.end(), [](auto c) { return c == 0; }));
    return v;
  }

  std::vector<Element> enumerate(std::optional<long> bound) const override {
    if (!bound) throw Error(ErrorCode::BoundRequired, kind_ + " is infinite; a coordinate bound is required");
    std::vector<Element> out;
    for (auto& v : integer_box(dim_, 0, *bound))
      if (std::any_of(v.begin(), v.end(), [](auto c) { return c != 0; })) out.emplace_back(std::move(v));
    return out;
  }

  Json element_to_json(const Element& e) const override {
    if (dim_ == 1) return e.ints()[0];
    return e.ints();
  }

  Element element_from_json(const Json& j) const override {
    IntVector v;
    if (j.is_array()) {
      for (const auto& c : j) v.push_back(json_int(c, kind_));
    } else {
      v.push_back(json_int(j, kind_));
    }
    Element e(std::move(v));
    check_member(e);
    return e;
  }
};

// ---------------------------------------------------------------------------

class RationalVectorInstance final : public WeightedInstance {
 public:
  RationalVectorInstance(long dim, std::optional<RationalVector> weights, bool positive)
      : WeightedInstance("rational-vector", dim, std::move(weights)), positive_(positive) {}

  Capabilities capabilities() const override {
    return {!positive_, !positive_, true, DistanceExactness::ExactRational};
  }

  Json spec_json() const override {
    Json j{{"kind", kind_}, {"dim", dim_}};
    if (positive_) j["positive"] = true;
    add_weights(j);
    return j;
  }

  void check_member(const Element& e) const override {
    if (!std::holds_alternative<RationalVector>(e.payload())) mismatch(kind_, "expected a rational vector");
    check_size(e.rationals().size());
    if (positive_)
      for (const auto& c : e.rationals())
        if (c <= 0) mismatch(kind_, "coordinates must be strictly positive");
  }

  Element compose_unchecked(const Element& g, const Element& h) const override {
    RationalVector r(g.rationals().size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = g.rationals()[i] + h.rationals()[i];
    return r;
  }

  Scalar distance_unchecked(const Element& g, const Element& h) const override {
    Rational d = 0;
    for (std::size_t i = 0; i < g.rationals().size(); ++i)
      d += weights_[i] * rational_abs(g.rationals()[i] - h.rationals()[i]);
    return Scalar::exact(d);
  }

  std::optional<Element> identity() const override {
    if (positive_) return std::nullopt;
    return Element(RationalVector(static_cast<std::size_t>(dim_), Rational(0)));
  }

  Element inverse_unchecked(const Element& g) const override {
    RationalVector r(g.rationals().size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = -g.rationals()[i];
    return r;
  }

  /// Dyadic coordinates k/2^j, |k| <= 16, j <= 3.
  Element sample(std::mt19937_64& rng) const override {
    std::uniform_int_distribution<long> num(positive_ ? 1 : -16, 16);
    std::uniform_int_distribution<long> shift(0, 3);
    RationalVector v(static_cast<std::size_t>(dim_));
    for (auto& c : v) {
      c = Rational(num(rng), 1L << shift(rng));
      c.canonicalize();
    }
    return v;
  }

  /// Half-integer grid k/2 with |k| <= 2 * bound (k >= 1 when positive).
  std::vector<Element> enumerate(std::optional<long> bound) const override {
    if (!bound) throw Error(ErrorCode::BoundRequired, kind_ + " is infinite; a bound is required");
    std::vector<Element> out;
    for (auto& v : integer_box(dim_, positive_ ? 1 : -2 * *bound, 2 * *bound)) {
      RationalVector r;
      for (auto k : v) {
        Rational q(static_cast<long>(k), 2L);
        q.canonicalize();
        r.push_back(q);
      }
      out.emplace_back(std::move(r));
    }
    return out;
  }

  Json element_to_json(const Element& e) const override {
    Json j = Json::array();
    for (const auto& c : e.rationals()) j.push_back(format_rational(c));
    return j;
  }

  Element element_from_json(const Json& j) const override {
    RationalVector v;
    if (j.is_array()) {
      for (const auto& c : j) v.push_back(json_rational(c));
    } else {
      v.push_back(json_rational(j));
    }
    Element e(std::move(v));
    check_member(e);
    return e;
  }

 private:
  bool positive_;
};

// ---------------------------------------------------------------------------

long required(const std::optional<long>& v, const std::string& kind, const char* name) {
  if (!v) throw Error(ErrorCode::InvalidParameter, kind + ": missing \"" + name + "\"");
  return *v;
}

std::optional<long> read_long(const Json& j, const char* name) {
  if (!j.contains(name)) return std::nullopt;
  const Json& v = j.at(name);
  if (!v.is_number_integer()) throw Error(ErrorCode::InvalidParameter, std::string("\"") + name + "\" must be an integer");
  return v.get<long>();
}

}  // namespace

std::vector<std::string> list_kinds() {
  return {"free-abelian", "cyclic", "torus", "graph-space", "free-group", "positive-naturals", "rational-vector"};
}

InstanceSpec parse_instance_spec(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::MalformedJson, "group specification must be a JSON object");
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw Error(ErrorCode::MalformedJson, "group specification needs a string \"kind\"");
  InstanceSpec spec;
  spec.kind = j.at("kind").get<std::string>();
  const auto kinds = list_kinds();
  if (std::find(kinds.begin(), kinds.end(), spec.kind) == kinds.end())
    throw Error(ErrorCode::UnknownKind, "unknown group kind \"" + spec.kind + "\"");

  spec.dim = read_long(j, "dim");
  spec.modulus = read_long(j, "modulus");
  spec.edges = read_long(j, "edges");
  spec.rank = read_long(j, "rank");
  if (j.contains("weights")) {
    if (!j.at("weights").is_array()) throw Error(ErrorCode::InvalidParameter, "\"weights\" must be an array");
    RationalVector w;
    for (const auto& x : j.at("weights")) w.push_back(json_rational(x));
    spec.weights = std::move(w);
  }
  if (j.contains("with_identity")) spec.with_identity = j.at("with_identity").get<bool>();
  if (j.contains("positive")) spec.positive = j.at("positive").get<bool>();

  // Fill defaults so that serialization is explicit.
  if (spec.kind == "cyclic" || spec.kind == "torus" || spec.kind == "positive-naturals")
    if (!spec.dim) spec.dim = 1;
  return spec;
}

Json serialize_instance_spec(const InstanceSpec& spec) {
  Json j{{"kind", spec.kind}};
  if (spec.dim) j["dim"] = *spec.dim;
  if (spec.modulus) j["modulus"] = *spec.modulus;
  if (spec.edges) j["edges"] = *spec.edges;
  if (spec.rank) j["rank"] = *spec.rank;
  if (spec.weights) {
    Json w = Json::array();
    for (const auto& x : *spec.weights) w.push_back(format_rational(x));
    j["weights"] = w;
  }
  if (spec.with_identity) j["with_identity"] = true;
  if (spec.positive) j["positive"] = true;
  return j;
}

InstancePtr build_instance(const InstanceSpec& spec) {
  const std::string& k = spec.kind;
  InstancePtr inst;
  if (k == "free-abelian") {
    inst = make_free_abelian(required(spec.dim, k, "dim"), spec.weights);
  } else if (k == "cyclic") {
    inst = make_cyclic(required(spec.modulus, k, "modulus"), spec.dim.value_or(1), spec.weights);
  } else if (k == "torus") {
    inst = make_torus(spec.dim.value_or(1), spec.weights);
  } else if (k == "graph-space") {
    inst = make_graph_space(required(spec.edges, k, "edges"), spec.weights);
  } else if (k == "free-group") {
    if (spec.weights) throw Error(ErrorCode::InvalidParameter, "free-group takes no weights");
    inst = make_free_group(required(spec.rank, k, "rank"));
  } else if (k == "positive-naturals") {
    inst = make_positive_naturals(spec.dim.value_or(1), spec.weights);
  } else if (k == "rational-vector") {
    inst = make_rational_vector(required(spec.dim, k, "dim"), spec.weights, spec.positive);
  } else {
    throw Error(ErrorCode::UnknownKind, "unknown group kind \"" + k + "\"");
  }
  if (spec.with_identity) inst = adjoin_identity(inst);
  return inst;
}

InstancePtr parse_group_spec(const Json& j) { return build_instance(parse_instance_spec(j)); }

InstancePtr parse_group_spec(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::MalformedJson, std::string("malformed JSON: ") + e.what());
  }
  return parse_group_spec(j);
}

std::vector<Element> enumerate_elements(const GroupInstance& instance, std::optional<long> bound) {
  return instance.enumerate(bound);
}

InstancePtr make_free_abelian(long dim, std::optional<RationalVector> weights) {
  return std::make_shared<FreeAbelian>(dim, std::move(weights));
}
InstancePtr make_cyclic(long modulus, long dim, std::optional<RationalVector> weights) {
  return std::make_shared<Cyclic>(modulus, dim, std::move(weights));
}
InstancePtr make_torus(long dim, std::optional<RationalVector> weights) {
  return std::make_shared<Torus>(dim, std::move(weights));
}
InstancePtr make_graph_space(long edges, std::optional<RationalVector> weights) {
  return std::make_shared<GraphSpace>(edges, std::move(weights));
}
InstancePtr make_free_group(long rank) { return std::make_shared<FreeGroup>(rank); }
InstancePtr make_positive_naturals(long dim, std::optional<RationalVector> weights) {
  return std::make_shared<PositiveNaturals>(dim, std::move(weights));
}
InstancePtr make_rational_vector(long dim, std::optional<RationalVector> weights, bool positive) {
  return std::make_shared<RationalVectorInstance>(dim, std::move(weights), positive);
}

Element int_element(std::initializer_list<std::int64_t> coords) { return IntVector(coords); }
Element real_element(std::initializer_list<double> coords) { return RealVector(coords); }

}  // namespace groupprob
