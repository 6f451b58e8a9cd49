#include <random>

#include "doctest.h"

#include "groupprob/envelope.hpp"
#include "groupprob/error.hpp"
#include "groupprob/instances.hpp"

using namespace groupprob;

namespace {
ErrorCode envelope_error(InstancePtr inst) {
  try {
    Envelope env(std::move(inst));
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("envelope accepted an instance it should refuse");
  return ErrorCode::Io;
}

Element nat(std::int64_t v) { return int_element({v}); }

/// x + x = x for every x: not cancellative.
class MaxSemigroup : public GroupInstance {
 public:
  std::string kind() const override { return "max"; }
  Capabilities capabilities() const override { return {false, false, true, DistanceExactness::ExactRational}; }
  Json spec_json() const override { return {{"kind", "max"}}; }
  void check_member(const Element&) const override {}
  Element compose_unchecked(const Element& g, const Element& h) const override {
    return IntVector{std::max(g.ints()[0], h.ints()[0])};
  }
  Scalar distance_unchecked(const Element& g, const Element& h) const override {
    return Scalar::exact(rational_abs(Rational(g.ints()[0] - h.ints()[0])));
  }
  Element sample(std::mt19937_64& rng) const override {
    return IntVector{std::uniform_int_distribution<std::int64_t>(1, 4)(rng)};
  }
  std::vector<Element> enumerate(std::optional<long>) const override { return {}; }
  Json element_to_json(const Element& e) const override { return e.ints()[0]; }
  Element element_from_json(const Json& j) const override { return IntVector{j.get<std::int64_t>()}; }
};
}  // namespace

TEST_CASE("cancellativity") {
  CHECK(check_cancellative(*adjoin_identity(make_positive_naturals()), 500, 1).cancellative);
  CHECK(check_cancellative(*make_free_abelian(3), 500, 1).cancellative);
  const auto r = check_cancellative(MaxSemigroup{}, 500, 1);
  CHECK_FALSE(r.cancellative);
  REQUIRE(r.counterexample.has_value());
  CHECK(envelope_error(std::make_shared<MaxSemigroup>()) == ErrorCode::GateNotPassed);
}

TEST_CASE("Grothendieck lift over (N u {0}, +)") {
  Envelope env(make_positive_naturals());
  // 0 is the adjoined identity of G'.
  const Element zero = *env.monoid().identity();
  const auto five_three = env.grothendieck_lift(nat(5), nat(3));
  CHECK(env.difference_equal(five_three, env.grothendieck_lift(nat(2), zero)));
  CHECK(env.difference_equal(env.grothendieck_lift(nat(3), nat(3)), env.difference_zero()));
  CHECK(env.difference_equal(env.difference_add(env.grothendieck_lift(zero, nat(4)), env.grothendieck_lift(nat(4), zero)),
                             env.difference_zero()));
  CHECK(env.difference_distance(five_three, env.grothendieck_lift(zero, zero)) == 2);
  CHECK(env.difference_distance(five_three, five_three) == 0);
  CHECK(env.difference_distance(env.grothendieck_lift(nat(7), nat(2)), env.grothendieck_lift(nat(9), nat(4))) == 0);
}

TEST_CASE("rationalization") {
  Envelope env(make_free_abelian(1));
  const auto zero = env.to_rational(env.difference_zero());
  const auto one = env.to_difference(env.to_monoid(env.semigroup(nat(1))));
  const auto half = env.rationalize(one, 2);
  CHECK(env.rational_distance(zero, half) == make_rational(1, 2));
  CHECK(env.rational_distance(zero, env.rationalize(one, 1)) == env.difference_distance(env.difference_zero(), one));
  const auto two = env.to_difference(env.to_monoid(env.semigroup(nat(2))));
  CHECK(env.rational_equal(env.rationalize(two, 4), half));
  CHECK_THROWS_AS(env.rationalize(one, 0), Error);
}

TEST_CASE("scaling law of the rational distance") {
  Envelope env(make_free_abelian(2, RationalVector{1, make_rational(1, 3)}));
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<long> c(-6, 6), k(1, 7);
  const auto zero = env.to_rational(env.difference_zero());
  for (int i = 0; i < 200; ++i) {
    const auto g = env.rationalize(env.to_difference(env.to_monoid(env.semigroup(int_element({c(rng), c(rng)})))), k(rng));
    const Rational r = make_rational(c(rng), k(rng));
    CHECK(env.rational_distance(zero, env.rational_scale(g, r)) == rational_abs(r) * env.rational_distance(zero, g));
  }
}

TEST_CASE("Banach embedding and refusals") {
  Envelope z(make_free_abelian(1));
  const auto three = z.embed_to_banach(z.to_rational(z.to_difference(z.to_monoid(z.semigroup(nat(3))))));
  CHECK(three.coords == RationalVector{3});
  CHECK(z.banach_norm(three) == 3);

  Envelope z2(make_free_abelian(2));
  EnvelopeElement q = z2.rational_add(
      z2.rationalize(z2.to_difference(z2.to_monoid(z2.semigroup(int_element({1, 0})))), 2),
      z2.rationalize(z2.to_difference(z2.to_monoid(z2.semigroup(int_element({0, -1})))), 3));
  CHECK(z2.embed_to_banach(q).coords == RationalVector{make_rational(1, 2), make_rational(-1, 3)});

  CHECK(envelope_error(make_graph_space(3)) == ErrorCode::NotNormed);
  CHECK(envelope_error(make_cyclic(5)) == ErrorCode::NotNormed);
  CHECK(envelope_error(make_torus(1)) == ErrorCode::NotNormed);
  CHECK(envelope_error(make_free_group(2)) == ErrorCode::NotNormed);
}

TEST_CASE("expectation examples") {
  Envelope z(make_free_abelian(1));
  FiniteDistribution d{{{nat(0), make_rational(1, 2)}, {nat(1), make_rational(1, 2)}}};
  CHECK(z.expectation(d).coords == RationalVector{make_rational(1, 2)});
  d = {{{nat(-3), make_rational(1, 3)}, {nat(1), make_rational(1, 3)}, {nat(5), make_rational(1, 3)}}};
  CHECK(z.expectation(d).coords == RationalVector{1});
  Envelope z2(make_free_abelian(2));
  d = {{{int_element({2, -1}), Rational(1)}}};
  CHECK(z2.expectation(d).coords == RationalVector{2, -1});

  FiniteDistribution bad{{{nat(0), make_rational(1, 2)}}};
  CHECK_THROWS_AS(validate_distribution(*make_free_abelian(1), bad), Error);
  FiniteDistribution dup{{{nat(0), make_rational(1, 2)}, {nat(0), make_rational(1, 2)}}};
  CHECK_THROWS_AS(validate_distribution(*make_free_abelian(1), dup), Error);
}

TEST_CASE("round trip and trace") {
  for (auto inst : {make_positive_naturals(), make_free_abelian(2, RationalVector{2, make_rational(1, 2)}),
                    make_rational_vector(2)}) {
    Envelope env(inst);
    const RoundtripReport r = envelope_roundtrip(env, 100, 5);
    CHECK(r.passed());
    CHECK(r.comparisons > 0);
  }
  Envelope z2(make_free_abelian(2));
  const Json t = z2.trace(int_element({0, 0}));
  for (const auto& s : t.at("stages")) CHECK(s.at("norm") == "0/1");
}
