#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "groupprob/algebra.hpp"

namespace groupprob {

enum class Stage { Semigroup, Monoid, Difference, Rational, Banach };

std::string_view stage_name(Stage s);

/// A value at one stage of G -> G' -> G_Z -> G_Q -> B(G).
///   Semigroup, Monoid: `p`.
///   Difference: p - q with p, q in the monoid.
///   Rational: (p - q) / denominator.
///   Banach: `coords`.
struct EnvelopeElement {
  Stage stage = Stage::Semigroup;
  Element p;
  Element q;
  mpz_class denominator = 1;
  RationalVector coords;
};

struct FiniteDistribution {
  std::vector<std::pair<Element, Rational>> support;
};

/// Validates probabilities (positive, summing to 1) and distinct members.
void validate_distribution(const GroupInstance& instance, const FiniteDistribution& dist);
FiniteDistribution distribution_from_json(const GroupInstance& instance, const Json& j);

struct CancellativeReport {
  std::size_t samples = 0;
  bool cancellative = true;
  std::optional<std::array<Element, 3>> counterexample;  // a, b, c with ac = bc, a != b
  Json to_json(const GroupInstance& instance) const;
};

CancellativeReport check_cancellative(const GroupInstance& instance, std::size_t samples,
                                      std::uint64_t seed);

struct RoundtripReport {
  std::size_t samples = 0;
  std::size_t comparisons = 0;
  std::size_t mismatches = 0;
  std::optional<Json> first_mismatch;
  bool passed() const { return mismatches == 0; }
  Json to_json() const;
};

/// The envelope chain of an abelian, cancellative, torsion-free instance
/// with a linear model (free-abelian, positive-naturals, rational-vector).
class Envelope {
 public:
  /// Runs the gates. Throws GateNotPassed (non-abelian, not cancellative)
  /// or NotNormed (torsion, or no linear model).
  explicit Envelope(InstancePtr instance, std::size_t gate_samples = 256, std::uint64_t seed = 0);

  const GroupInstance& base() const { return *base_; }
  const GroupInstance& monoid() const { return *monoid_; }
  long dim() const { return dim_; }
  const RationalVector& weights() const { return weights_; }

  EnvelopeElement semigroup(const Element& g) const;
  EnvelopeElement to_monoid(const EnvelopeElement& x) const;

  EnvelopeElement grothendieck_lift(const Element& p, const Element& q) const;
  EnvelopeElement to_difference(const EnvelopeElement& x) const;
  bool difference_equal(const EnvelopeElement& x, const EnvelopeElement& y) const;
  Rational difference_distance(const EnvelopeElement& x, const EnvelopeElement& y) const;
  EnvelopeElement difference_add(const EnvelopeElement& x, const EnvelopeElement& y) const;
  EnvelopeElement difference_negate(const EnvelopeElement& x) const;
  EnvelopeElement difference_zero() const;
  /// k-fold sum, k >= 0.
  EnvelopeElement difference_scale(const EnvelopeElement& x, long k) const;

  /// x / k with the least denominator. Throws InvalidArgument for k = 0.
  EnvelopeElement rationalize(const EnvelopeElement& x, long k) const;
  EnvelopeElement to_rational(const EnvelopeElement& x) const;
  bool rational_equal(const EnvelopeElement& g, const EnvelopeElement& h) const;
  Rational rational_distance(const EnvelopeElement& g, const EnvelopeElement& h) const;
  EnvelopeElement rational_scale(const EnvelopeElement& g, const Rational& r) const;
  EnvelopeElement rational_add(const EnvelopeElement& g, const EnvelopeElement& h) const;

  EnvelopeElement embed_to_banach(const EnvelopeElement& x) const;
  Rational banach_distance(const EnvelopeElement& x, const EnvelopeElement& y) const;
  Rational banach_norm(const EnvelopeElement& x) const;

  /// sum_i p_i embed(x_i), exact.
  EnvelopeElement expectation(const FiniteDistribution& dist) const;

  /// Distance from zero at each stage, with the value at each stage.
  Json trace(const Element& g) const;
  Json to_json(const EnvelopeElement& x) const;

 private:
  Element monoid_scale(const Element& x, long k) const;
  RationalVector vec(const Element& e) const;
  EnvelopeElement canonical_difference(Element p, Element q) const;
  EnvelopeElement reduce_rational(EnvelopeElement x) const;

  InstancePtr base_;
  InstancePtr monoid_;
  long dim_ = 0;
  RationalVector weights_;
  bool divisible_ = false;
};

/// Compares G_Q(G_Z(G')) with the direct rational model Q^d on sampled
/// pairs and random denominators; also checks every arrow is isometric.
RoundtripReport envelope_roundtrip(const Envelope& env, std::size_t samples, std::uint64_t seed);

}  // namespace groupprob
