#include <cmath>
#include <cstdlib>
#include <map>
#include <random>

#include "doctest.h"

#include "groupprob/error.hpp"
#include "groupprob/instances.hpp"
#include "groupprob/rademacher.hpp"

using namespace groupprob;

namespace {

using Law = std::map<Rational, Rational>;

/// Law of sum_i w_i |sum_k r_k m x_ki|_(mod) by direct loops over sign vectors.
Law oracle_law(const std::vector<std::vector<long>>& xs, const std::vector<Rational>& w, long modulus, long m) {
  Law law;
  const std::size_t n = xs.size();
  const Rational p = Rational(1, 1UL << n);
  for (std::uint64_t bits = 0; bits < (1ULL << n); ++bits) {
    Rational d = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      long s = 0;
      for (std::size_t k = 0; k < n; ++k) s += ((bits >> k) & 1U ? -1 : 1) * m * xs[k][i];
      if (modulus) {
        s %= modulus;
        if (s < 0) s += modulus;
        s = std::min(s, modulus - s);
      }
      d += w[i] * std::labs(s);
    }
    law[d] += p;
  }
  return law;
}

Law as_law(const DistanceDistribution& d) {
  Law l;
  for (const auto& [v, p] : d.atoms) l[v.exact_value()] += p;
  return l;
}

Rational tail(const Law& law, const Rational& t, bool inclusive = false) {
  Rational r = 0;
  for (const auto& [v, p] : law)
    if (inclusive ? v >= t : v > t) r += p;
  return r;
}

RademacherScenario z_scenario(std::vector<long> xs, long m = 1) {
  RademacherScenario s;
  s.instance = make_free_abelian(1);
  for (long x : xs) s.elements.push_back(int_element({x}));
  s.m = m;
  return s;
}

Json scenario(const std::string& group, const std::string& elements, const std::string& p = "1",
              const std::string& q = "1") {
  return Json::parse(R"({"group":)" + group + R"(,"elements":)" + elements + R"(,"p":")" + p + R"(","q":")" + q + "\"}");
}

}  // namespace

TEST_CASE("enumeration examples") {
  Law l = as_law(enumerate_rademacher(z_scenario({1, 1})));
  CHECK(l == Law{{0, Rational(1, 2)}, {2, Rational(1, 2)}});
  l = as_law(enumerate_rademacher(z_scenario({1})));
  CHECK(l == Law{{1, 1}});
  auto sc = scenario_from_json(scenario(R"({"kind":"graph-space","edges":1})", R"(["1"])"));
  sc.m = 2;
  l = as_law(enumerate_rademacher(sc));
  CHECK(l == Law{{0, 1}});
}

TEST_CASE("enumeration agrees with a direct oracle") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> coord(-5, 5), nn(1, 12), dd(1, 4), mm(1, 4);
  for (int trial = 0; trial < 120; ++trial) {
    const long n = nn(rng), d = dd(rng), m = mm(rng);
    const long modulus = trial % 3 == 0 ? std::vector<long>{2, 3, 5, 6, 7}[trial % 5] : 0;
    std::vector<std::vector<long>> xs(n, std::vector<long>(d));
    std::vector<Rational> w(d);
    Json weights = Json::array(), elements = Json::array();
    for (long i = 0; i < d; ++i) {
      w[i] = make_rational(1 + trial % 3, 1 + i % 2);
      weights.push_back(format_rational(w[i]));
    }
    for (auto& x : xs) {
      Json e = Json::array();
      for (auto& c : x) {
        c = coord(rng);
        if (modulus) c = ((c % modulus) + modulus) % modulus;
        e.push_back(c);
      }
      elements.push_back(e);
    }
    Json group = modulus ? Json{{"kind", "cyclic"}, {"modulus", modulus}, {"dim", d}, {"weights", weights}}
                         : Json{{"kind", "free-abelian"}, {"dim", d}, {"weights", weights}};
    RademacherScenario s = scenario_from_json({{"group", group}, {"elements", elements}});
    s.m = m;
    const DistanceDistribution law = enumerate_rademacher(s);
    CHECK(law.outcomes == (1ULL << n));
    CHECK(law.total() == 1);
    CHECK(as_law(law) == oracle_law(xs, w, modulus, m));
  }
}

TEST_CASE("torus enumeration uses the arc metric") {
  auto sc = scenario_from_json(scenario(R"({"kind":"torus","dim":1})", "[[0.125],[0.25],[0.4]]"));
  const DistanceDistribution d = enumerate_rademacher(sc);
  CHECK_FALSE(d.exact_values);
  std::map<double, int> oracle;
  for (int bits = 0; bits < 8; ++bits) {
    double s = 0;
    const double xs[] = {0.125, 0.25, 0.4};
    for (int k = 0; k < 3; ++k) s += ((bits >> k) & 1 ? -1 : 1) * xs[k];
    s -= std::floor(s);
    ++oracle[std::min(s, 1 - s)];
  }
  double mass = 0;
  for (const auto& [v, p] : d.atoms) {
    bool found = false;
    for (const auto& [ov, c] : oracle)
      if (std::fabs(ov - v.to_double()) < 1e-12) found = true;
    CHECK(found);
    mass += to_double(p);
  }
  CHECK(mass == doctest::Approx(1.0));
}

TEST_CASE("law is invariant under flipping signs of a subset") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> c(-5, 5);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<long> xs(8);
    for (auto& x : xs) x = c(rng);
    std::vector<long> flipped = xs;
    for (std::size_t k = 0; k < xs.size(); k += 1 + trial % 3) flipped[k] = -flipped[k];
    CHECK(as_law(enumerate_rademacher(z_scenario(xs))) == as_law(enumerate_rademacher(z_scenario(flipped))));
  }
}

TEST_CASE("results do not depend on thread count or kernel") {
  RademacherScenario s = scenario_from_json(
      scenario(R"({"kind":"free-abelian","dim":2,"weights":["1/1","1/3"]})",
               "[[1,2],[3,-1],[0,4],[-2,2],[5,5],[1,-3],[2,0],[4,1],[-1,-1],[3,3],[2,-5],[1,1],[0,1],[5,-4],[2,2],[1,0],[3,2]]"));
  setenv("GROUPPROB_THREADS", "1", 1);
  const Law one = as_law(enumerate_rademacher(s));
  setenv("GROUPPROB_THREADS", "3", 1);
  const Law three = as_law(enumerate_rademacher(s));
  setenv("GROUPPROB_KERNEL", "scalar", 1);
  const Law scalar = as_law(enumerate_rademacher(s));
  unsetenv("GROUPPROB_KERNEL");
  unsetenv("GROUPPROB_THREADS");
  CHECK(one == three);
  CHECK(one == scalar);
}

TEST_CASE("sampling converges to the exact law") {
  const RademacherScenario s = z_scenario({1, 2, 3, 1, 1, 2});
  const DistanceDistribution exact = enumerate_rademacher(s);
  const std::uint64_t n = 200000;
  const DistanceDistribution sampled = sample_rademacher(s, n, 99);
  CHECK(sampled.outcomes == n);
  for (const Rational t : {Rational(0), Rational(1), Rational(2), Rational(4), Rational(6)}) {
    const double p = to_double(exact.tail(t));
    const double ph = to_double(sampled.tail(t));
    CHECK(std::fabs(p - ph) <= 3 * std::sqrt(p * (1 - p) / n) + 1e-12);
  }
  // Same seed, same stream.
  CHECK(as_law(sample_rademacher(s, 1000, 7)) == as_law(sample_rademacher(s, 1000, 7)));
}

TEST_CASE("moments") {
  const DistanceDistribution d = enumerate_rademacher(z_scenario({1, 1}));
  CHECK(*moment(d, 2).raw_exact == 2);
  CHECK(*moment(d, 1).raw_exact == 1);
  const DistanceDistribution point = enumerate_rademacher(z_scenario({7}));
  for (const Rational& p : {Rational(1), Rational(3, 2), Rational(5)}) {
    const MomentResult r = moment(point, p);
    REQUIRE(r.root_exact.has_value());
    CHECK(compare(*r.root_exact, PowerProduct::rational(7)) == 0);
    CHECK(r.root.contains(7.0));
  }
  CHECK_THROWS_AS(moment(d, Rational(1, 2)), Error);
}

TEST_CASE("moment matches the layer-cake identity") {
  // E[Z^p] = sum over atoms of (v_j^p - v_{j-1}^p) P(Z >= v_j) for integer p.
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<long> c(-4, 4);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<long> xs(6);
    for (auto& x : xs) x = c(rng);
    const DistanceDistribution d = enumerate_rademacher(z_scenario(xs));
    for (long p = 1; p <= 4; ++p) {
      Rational cake = 0, prev = 0;
      for (const auto& [v, pr] : d.atoms) {
        const Rational vp = rational_pow(v.exact_value(), p);
        cake += (vp - prev) * d.tail(v, true);
        prev = vp;
      }
      CHECK(*moment(d, p).raw_exact == cake);
    }
  }
}

TEST_CASE("L^p norms are monotone in p") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<long> c(-5, 5);
  const std::vector<Rational> ps{1, Rational(5, 4), Rational(3, 2), 2, 3, Rational(7, 2), 5};
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<long> xs(1 + trial % 9);
    for (auto& x : xs) x = c(rng);
    const DistanceDistribution d = enumerate_rademacher(z_scenario(xs));
    for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
      const Side a = moment(d, ps[i]).side(), b = moment(d, ps[i + 1]).side();
      const Comparison cmp = compare_sides(a, b);
      CHECK(cmp.decided);
      CHECK(cmp.satisfied);
    }
  }
}

TEST_CASE("constants") {
  CHECK(kk_constant(2, 1, KKRegime::NormedGeneral).value.factors.empty());
  CHECK(compare(kk_constant(1, 2, KKRegime::NormedSharp).value, PowerProduct::power(2, Rational(1, 2))) == 0);
  CHECK(compare(kk_constant(1, 2, KKRegime::General).value,
                PowerProduct::rational(256) * PowerProduct::power(2, Rational(-1, 2))) == 0);
  CHECK(kk_constant(1, 2, KKRegime::General).interval().contains(256 / std::sqrt(2.0)));
  CHECK(kk_constant(1, 3, KKRegime::NormedGeneral).interval().contains(64 * 3 * std::pow(0.75, 1.0 / 3)));
  CHECK_THROWS_AS(kk_constant(2, 2, KKRegime::NormedSharp), Error);
  CHECK_THROWS_AS(kk_constant(1, 3, KKRegime::NormedSharp), Error);

  CHECK(kk_level(1) == 1);
  CHECK(kk_level(Rational(3, 2)) == 1);
  CHECK(kk_level(2) == 2);
  CHECK(kk_level(3) == 2);
  CHECK(kk_level(Rational(7, 2)) == 2);
  CHECK(kk_level(4) == 3);
  for (long l = 1; l <= 10; ++l)
    for (const Rational& q : {Rational(1L << (l - 1)), Rational((1L << l) * 3 - 1, 3)}) {
      const long got = kk_level(q);
      CHECK(Rational(1L << (got - 1)) <= q);
      CHECK(q < Rational(1L << got));
    }
}

TEST_CASE("KK examples") {
  InequalityReport r = check_kk(scenario_from_json(scenario(R"({"kind":"free-abelian","dim":1})", "[[1],[1]]", "1", "2")),
                                KKRegime::NormedSharp);
  CHECK(r.satisfied);
  CHECK(r.slack == "1");
  CHECK(r.lhs_interval->contains(std::sqrt(2.0)));

  for (const auto& [p, q] : std::vector<std::pair<std::string, std::string>>{{"1", "1"}, {"2", "1"}, {"1", "3"}, {"3/2", "5/2"}}) {
    for (KKRegime reg : {KKRegime::NormedGeneral, KKRegime::General}) {
      r = check_kk(scenario_from_json(scenario(R"({"kind":"free-abelian","dim":1})", "[[1]]", p, q)), reg);
      CHECK(r.satisfied);
      CHECK(r.decided);
    }
  }
  r = check_kk(scenario_from_json(scenario(R"({"kind":"free-abelian","dim":1})", "[[1]]", "1", "3")),
               KKRegime::NormedGeneral);
  CHECK(r.lhs == "1/1");

  r = check_kk(scenario_from_json(scenario(R"({"kind":"graph-space","edges":3})", R"(["100","010","001"])", "1", "3")),
               KKRegime::General);
  CHECK(r.satisfied);
  CHECK(r.lhs == "0/1");
  CHECK(r.slack == "inf");
  CHECK(r.details.at("exponent") == 4);
}

TEST_CASE("KK errors") {
  CHECK_THROWS_AS(check_kk(scenario_from_json(scenario(R"({"kind":"cyclic","modulus":5})", "[[2]]", "1", "2")),
                           KKRegime::NormedGeneral),
                  Error);
  try {
    check_kk(scenario_from_json(scenario(R"({"kind":"cyclic","modulus":5})", "[[2]]", "1", "2")), KKRegime::NormedSharp);
    FAIL("expected NotNormed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotNormed);
  }
  CHECK_THROWS_AS(scenario_from_json(scenario(R"({"kind":"free-group","rank":2})", R"(["a"])")), Error);
  CHECK_THROWS_AS(scenario_from_json(scenario(R"({"kind":"positive-naturals"})", "[[1]]")), Error);
  CHECK_THROWS_AS(scenario_from_json(scenario(R"({"kind":"free-abelian","dim":1})", "[]")), Error);
  std::vector<long> big(25, 1);
  CHECK_THROWS_AS(enumerate_rademacher(z_scenario(big)), Error);
}

TEST_CASE("q <= p always holds with constant 1") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<long> c(-5, 5);
  const std::vector<std::pair<Rational, Rational>> pq{{2, 1}, {3, Rational(3, 2)}, {Rational(5, 2), 2}, {2, 2}, {4, 3}};
  for (int trial = 0; trial < 60; ++trial) {
    RademacherScenario s = z_scenario({});
    s.elements.clear();
    for (int k = 0; k < 1 + trial % 8; ++k) s.elements.push_back(int_element({c(rng)}));
    std::tie(s.p, s.q) = pq[trial % pq.size()];
    const InequalityReport r = check_kk(s, KKRegime::NormedGeneral);
    CHECK(r.decided);
    CHECK(r.satisfied);
  }
}

TEST_CASE("sharpness ratio") {
  auto z = make_free_abelian(1);
  SharpnessResult r = sharpness_ratio(z, int_element({1}), 2);
  REQUIRE(r.ratio_pow_q.has_value());
  CHECK(*r.ratio_pow_q == 2);
  CHECK(r.matches_exactly == true);
  r = sharpness_ratio(z, int_element({5}), 2);
  CHECK(*r.ratio_pow_q == 2);
  CHECK(r.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  r = sharpness_ratio(z, int_element({3}), 1);
  CHECK(*r.ratio_pow_q == 1);
  for (const Rational& q : {Rational(5, 4), Rational(3, 2), Rational(2)}) {
    r = sharpness_ratio(make_free_abelian(2, RationalVector{1, Rational(1, 2)}), int_element({2, -3}), q);
    CHECK(std::fabs(r.value - std::pow(2.0, 1 - to_double(Rational(1) / q))) <= 1e-12);
    CHECK(r.matches_exactly == true);
  }
  CHECK_THROWS_AS(sharpness_ratio(z, int_element({1}), 3), Error);
  CHECK_THROWS_AS(sharpness_ratio(z, int_element({0}), 2), Error);
  CHECK_THROWS_AS(sharpness_ratio(make_cyclic(5), Element(IntVector{2}), 2), Error);
}

TEST_CASE("laminar families") {
  CHECK(validate_laminar({{1}, {1, 2}, {1, 2, 3}}));
  CHECK(validate_laminar({{1}, {1, 2}, {3, 4, 5}, {3, 4, 5, 6}}));
  CHECK_FALSE(validate_laminar({{1, 2}, {2, 3}}));
  CHECK_FALSE(validate_laminar({{1}, {}}));
  for (int n = 1; n <= 6; ++n) {
    CHECK(validate_laminar(prefix_family(n)));
    CHECK(validate_laminar(suffix_family(n)));
    CHECK(validate_laminar(singleton_family(n)));
  }
  CHECK(family_from_json(Json::parse("[[1],[1,2]]")) == LaminarFamily{{1}, {1, 2}});
}

TEST_CASE("Levy examples and oracle") {
  InequalityReport r = check_levy(z_scenario({1, 1}), {{1}, {1, 2}}, 1, 1);
  CHECK(r.lhs == "1/2");
  CHECK(r.rhs == "1/1");
  CHECK(r.satisfied);

  // s + t at least twice the total length: nothing exceeds it.
  r = check_levy(z_scenario({1, 2, -3}), prefix_family(3), 6, 6);
  CHECK(r.lhs == "0/1");

  // Brute force for xs = [1,2,3] with the suffix family, s = t = 2.
  const std::vector<long> xs{1, 2, 3};
  const LaminarFamily fam = suffix_family(3);
  Rational lhs = 0, ps = 0;
  for (int bits = 0; bits < 8; ++bits) {
    long total = 0, best = 0;
    for (int k = 0; k < 3; ++k) total += ((bits >> k) & 1 ? -1 : 1) * xs[k];
    for (const auto& b : fam) {
      long sb = 0;
      for (int i : b) sb += ((bits >> (i - 1)) & 1 ? -1 : 1) * xs[i - 1];
      best = std::max(best, std::labs(2 * sb));
    }
    if (best > 4) lhs += Rational(1, 8);
    if (std::labs(total) > 2) ps += Rational(1, 8);
  }
  r = check_levy(z_scenario(xs), fam, 2, 2);
  CHECK(r.lhs == format_rational(lhs));
  CHECK(r.rhs == format_rational(2 * ps));
  CHECK(r.satisfied);

  CHECK_THROWS_AS(check_levy(z_scenario({1, 2}), {{1, 2}, {2, 3}}, 1, 1), Error);
  CHECK_THROWS_AS(check_levy(z_scenario({1, 2}), {{1}, {5}}, 1, 1), Error);
  CHECK_THROWS_AS(check_levy(z_scenario({1, 2}), {{1}}, 0, 1), Error);
}

TEST_CASE("Levy generic path matches the lattice path") {
  // The torus at dyadic points is exact in doubles, so both paths must agree.
  auto sc = scenario_from_json(scenario(R"({"kind":"torus","dim":1})", "[[0.0625],[0.125],[0.03125]]"));
  const InequalityReport t = check_levy(sc, prefix_family(3), Rational(1, 8), Rational(1, 16));
  // Oracle on Z/32 with the same geometry scaled by 32.
  auto sc32 = scenario_from_json(scenario(R"({"kind":"cyclic","modulus":32})", "[[2],[4],[1]]"));
  const InequalityReport c = check_levy(sc32, prefix_family(3), 4, 2);
  CHECK(t.lhs == c.lhs);
  CHECK(t.rhs == c.rhs);
}

TEST_CASE("tail-product examples and oracle") {
  InequalityReport r = check_tail(z_scenario({1, 1, 1}), Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2));
  CHECK(r.lhs == "1/4");
  CHECK(r.rhs == "4/1");
  CHECK(r.satisfied);
  r = check_tail(z_scenario({0, 0}), 1, 1, 1, 1);
  CHECK(r.lhs == "0/1");
  CHECK(r.satisfied);

  auto z2 = scenario_from_json(scenario(R"({"kind":"free-abelian","dim":2})", "[[1,0],[0,1],[1,0]]"));
  r = check_tail(z2, 1, 1, 1, 1);
  const Law l2 = oracle_law({{1, 0}, {0, 1}, {1, 0}}, {1, 1}, 0, 2);
  const Law l1 = oracle_law({{1, 0}, {0, 1}, {1, 0}}, {1, 1}, 0, 1);
  CHECK(r.lhs == format_rational(tail(l2, 4)));
  CHECK(r.rhs == format_rational(Rational(4 * tail(l1, 1) * tail(l1, 1))));
  CHECK(r.satisfied);
}

TEST_CASE("Mont maximal inequality") {
  auto z = make_free_abelian(1);
  FiniteDistribution law{{{int_element({-1}), Rational(1, 2)}, {int_element({1}), Rational(1, 2)}}};
  InequalityReport r = check_mont(z, law, int_element({0}), int_element({0}), 4, {3}, MontMode{});
  // Oracle: 16 paths; max_k |S_k| >= 3 needs |S_3| = 3.
  Rational lhs = 0, end = 0;
  for (int bits = 0; bits < 16; ++bits) {
    long s = 0, mx = 0;
    for (int k = 0; k < 4; ++k) {
      s += (bits >> k) & 1 ? -1 : 1;
      mx = std::max(mx, std::labs(s));
    }
    if (mx >= 3) lhs += Rational(1, 16);
    if (Rational(std::labs(s)) >= Rational(3, 10)) end += Rational(1, 16);
  }
  CHECK(lhs == Rational(1, 4));
  CHECK(r.lhs == format_rational(lhs));
  CHECK(r.rhs == format_rational(Rational(3 * end)));
  CHECK(r.satisfied);

  // t <= d(z0, z1): the threshold is nonpositive and the right side is 3.
  r = check_mont(z, law, int_element({0}), int_element({5}), 4, {1, 2, 5}, MontMode{});
  for (const auto& row : r.details.at("per_t")) CHECK(row.at("rhs") == "3/1");

  // Sampled mode on Z^2 with four unit steps.
  auto z2 = make_free_abelian(2);
  FiniteDistribution steps{{{int_element({1, 0}), Rational(1, 4)},
                            {int_element({-1, 0}), Rational(1, 4)},
                            {int_element({0, 1}), Rational(1, 4)},
                            {int_element({0, -1}), Rational(1, 4)}}};
  MontMode sample{false, 1234, 100000};
  std::vector<Rational> grid{1, 2, 3, 4, 5};
  r = check_mont(z2, steps, int_element({0, 0}), int_element({0, 0}), 5, grid, sample);
  CHECK(r.satisfied);
  CHECK_FALSE(r.exact);
  const InequalityReport ex = check_mont(z2, steps, int_element({0, 0}), int_element({0, 0}), 5, grid, MontMode{});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double p = to_double(parse_rational(ex.details.at("per_t")[i].at("lhs").get<std::string>()));
    const double ph = std::stod(r.details.at("per_t")[i].at("lhs").get<std::string>());
    CHECK(std::fabs(p - ph) <= 3 * std::sqrt(p * (1 - p) / 100000) + 1e-12);
  }

  CHECK_THROWS_AS(check_mont(make_cyclic(5), FiniteDistribution{{{Element(IntVector{2}), Rational(1)}}},
                             Element(IntVector{0}), Element(IntVector{0}), 2, {1}, MontMode{}),
                  Error);
  CHECK_THROWS_AS(check_mont(z, law, int_element({0}), int_element({0}), 30, {1}, MontMode{}), Error);
}

TEST_CASE("scenario JSON round trip") {
  const Json j = scenario(R"({"kind":"free-abelian","dim":2,"weights":["1/1","1/2"]})", "[[1,2],[3,4]]", "3/2", "5/2");
  const RademacherScenario s = scenario_from_json(j);
  CHECK(s.p == Rational(3, 2));
  CHECK(s.q == Rational(5, 2));
  const RademacherScenario back = scenario_from_json(scenario_to_json(s));
  CHECK(back.elements == s.elements);
  CHECK(back.p == s.p);
  CHECK(back.instance->spec_json() == s.instance->spec_json());
}
