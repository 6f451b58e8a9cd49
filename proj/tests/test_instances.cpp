#include "doctest.h"

#include "groupprob/error.hpp"
#include "groupprob/instances.hpp"

using namespace groupprob;

namespace {
ErrorCode code_of(const std::string& text) {
  try {
    parse_group_spec(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error for " << text);
  return ErrorCode::Io;
}

const char* kSpecs[] = {
    R"({"kind":"free-abelian","dim":3,"weights":["1/1","1/2","3/1"]})",
    R"({"kind":"cyclic","modulus":5})",
    R"({"kind":"cyclic","modulus":6,"dim":2})",
    R"({"kind":"torus","dim":2})",
    R"({"kind":"graph-space","edges":3})",
    R"({"kind":"graph-space","edges":4,"weights":["1/1","2/1","1/3","5/1"]})",
    R"({"kind":"free-group","rank":2})",
    R"({"kind":"positive-naturals"})",
    R"({"kind":"positive-naturals","with_identity":true})",
    R"({"kind":"rational-vector","dim":2,"weights":["1/1","1/2"]})",
};
}  // namespace

TEST_CASE("spec examples") {
  auto cyc = parse_group_spec(R"({"kind":"cyclic","modulus":5})");
  CHECK(cyc->kind() == "cyclic");
  CHECK(cyc->distance_unchecked(cyc->element_from_json(1), cyc->element_from_json(4)) == Scalar::exact(2));

  auto g = parse_group_spec(R"({"kind":"graph-space","edges":3})");
  const Capabilities c = g->capabilities();
  CHECK(c.is_abelian);
  CHECK(c.has_identity);
  CHECK(c.has_inverses);
  CHECK(c.exactness == DistanceExactness::ExactRational);
  CHECK(g->element_to_json(compose(*g, g->element_from_json("101"), g->element_from_json("110"))) == "011");

  auto z2 = parse_group_spec(R"({"kind":"free-abelian","dim":2,"weights":["1/1","1/2"]})");
  CHECK(distance(*z2, int_element({0, 0}), int_element({1, 2})) == Scalar::exact(2));
  CHECK(compose(*z2, int_element({1, 2}), int_element({3, -1})) == int_element({4, 1}));

  auto f2 = parse_group_spec(R"({"kind":"free-group","rank":2})");
  CHECK_FALSE(f2->capabilities().is_abelian);
  CHECK(f2->capabilities().exactness == DistanceExactness::SearchBased);
}

TEST_CASE("distinct error codes") {
  CHECK(code_of("{not json") == ErrorCode::MalformedJson);
  CHECK(code_of(R"({"dim":2})") == ErrorCode::MalformedJson);
  CHECK(code_of(R"({"kind":"sphere"})") == ErrorCode::UnknownKind);
  CHECK(code_of(R"({"kind":"cyclic","modulus":1})") == ErrorCode::InvalidParameter);
  CHECK(code_of(R"({"kind":"free-abelian","dim":0})") == ErrorCode::InvalidParameter);
  CHECK(code_of(R"({"kind":"free-abelian","dim":2,"weights":["1/1","-1/2"]})") == ErrorCode::InvalidParameter);
  CHECK(code_of(R"({"kind":"free-abelian","dim":2,"weights":["1/1"]})") == ErrorCode::InvalidParameter);
}

TEST_CASE("parse, serialize, parse is the identity") {
  for (const char* text : kSpecs) {
    CAPTURE(text);
    const InstanceSpec spec = parse_instance_spec(Json::parse(text));
    const Json ser = serialize_instance_spec(spec);
    CHECK(parse_instance_spec(ser) == spec);
    CHECK(parse_group_spec(text)->spec_json() == parse_group_spec(ser)->spec_json());
  }
}

TEST_CASE("enumeration") {
  auto g = make_graph_space(3);
  const auto all = enumerate_elements(*g);
  CHECK(all.size() == 8);

  auto z = make_free_abelian(1);
  const auto box = enumerate_elements(*z, 2);
  REQUIRE(box.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(box[i] == int_element({i - 2}));
  CHECK_THROWS_AS(enumerate_elements(*z), Error);

  auto f2 = make_free_group(2);
  const auto words = enumerate_elements(*f2, 2);
  CHECK(words.size() == 17);
  std::size_t len2 = 0;
  for (const auto& w : words) len2 += w.word().length() == 2;
  CHECK(len2 == 12);
}

TEST_CASE("every instance passes the axiom audit") {
  for (const char* text : kSpecs) {
    CAPTURE(text);
    const AxiomAudit a = audit_axioms(*parse_group_spec(text), 1000, 42);
    CHECK(a.passed());
  }
}

TEST_CASE("graph space elements have order at most two") {
  auto g = make_graph_space(4);
  for (const auto& e : enumerate_elements(*g)) CHECK(power(*g, e, 2) == *g->identity());
}

TEST_CASE("element JSON round trip and membership") {
  for (const char* text : kSpecs) {
    auto inst = parse_group_spec(text);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
      const Element e = inst->sample(rng);
      CHECK_NOTHROW(inst->check_member(e));
      CHECK(inst->same_element(inst->element_from_json(inst->element_to_json(e)), e));
    }
  }
  auto z5 = make_cyclic(5);
  CHECK(z5->element_to_json(z5->element_from_json(7)) == Json::array({2}));
  CHECK_THROWS_AS(z5->check_member(Element(IntVector{5})), Error);
  CHECK_THROWS_AS(make_positive_naturals()->element_from_json(0), Error);
}
