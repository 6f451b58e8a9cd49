#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "groupprob/error.hpp"
#include "groupprob/rational.hpp"
#include "groupprob/scalar.hpp"
#include "groupprob/word.hpp"

namespace groupprob {

using Json = nlohmann::json;

/// The identity 1' attached to a semigroup that has none.
struct AdjoinedUnit {
  friend bool operator==(AdjoinedUnit, AdjoinedUnit) { return true; }
  friend bool operator<(AdjoinedUnit, AdjoinedUnit) { return false; }
};

using IntVector = std::vector<std::int64_t>;
using RealVector = std::vector<double>;

/// Instance-specific value in canonical form. Canonical form is the
/// constructing instance's responsibility; operations do not re-check it.
class Element {
 public:
  using Payload = std::variant<AdjoinedUnit, IntVector, RealVector, RationalVector, ReducedWord>;

  Element() = default;
  Element(AdjoinedUnit u) : payload_(u) {}
  Element(IntVector v) : payload_(std::move(v)) {}
  Element(RealVector v) : payload_(std::move(v)) {}
  Element(RationalVector v) : payload_(std::move(v)) {}
  Element(ReducedWord w) : payload_(std::move(w)) {}

  const Payload& payload() const { return payload_; }

  bool is_adjoined_unit() const { return std::holds_alternative<AdjoinedUnit>(payload_); }
  const IntVector& ints() const;
  const RealVector& reals() const;
  const RationalVector& rationals() const;
  const ReducedWord& word() const;

  friend bool operator==(const Element& a, const Element& b) { return a.payload_ == b.payload_; }
  friend bool operator<(const Element& a, const Element& b) { return a.payload_ < b.payload_; }

 private:
  Payload payload_;
};

enum class DistanceExactness { ExactRational, Float, SearchBased };

struct Capabilities {
  bool has_identity = false;
  bool has_inverses = false;
  bool is_abelian = false;
  DistanceExactness exactness = DistanceExactness::ExactRational;
};

/// Integer description of an abelian lattice-type instance: coordinates
/// live in Z (modulus 0) or Z/m, and the distance of a coordinate vector c
/// from the identity is sum_i weights[i] * |c_i|_m / scale, where |.|_m is
/// the absolute value or the shorter-arc residue.
struct LatticeModel {
  std::vector<std::int64_t> moduli;
  std::vector<std::int64_t> weights;
  std::int64_t scale = 1;
};

/// A concrete metric (semi)group. Implementations are immutable.
class GroupInstance {
 public:
  virtual ~GroupInstance() = default;

  virtual std::string kind() const = 0;
  virtual Capabilities capabilities() const = 0;
  /// Serialized group specification (round-trips through parse_group_spec).
  virtual Json spec_json() const = 0;

  /// Throws ErrorCode::InstanceMismatch when `e` is not a canonical member.
  virtual void check_member(const Element& e) const = 0;

  virtual Element compose_unchecked(const Element& g, const Element& h) const = 0;
  virtual Scalar distance_unchecked(const Element& g, const Element& h) const = 0;

  virtual std::optional<Element> identity() const { return std::nullopt; }
  /// Only called when capabilities().has_inverses.
  virtual Element inverse_unchecked(const Element& g) const;

  /// Equality up to the instance's float tolerance.
  virtual bool same_element(const Element& a, const Element& b) const { return a == b; }
  /// Absolute tolerance for distance comparisons (0 for exact instances).
  virtual double tolerance() const { return 0.0; }

  /// Random element with small coordinates, for audits.
  virtual Element sample(std::mt19937_64& rng) const = 0;

  /// Deterministic listing: complete for finite instances, complete up to
  /// `bound` otherwise. Throws ErrorCode::BoundRequired when needed.
  virtual std::vector<Element> enumerate(std::optional<long> bound) const = 0;

  virtual Json element_to_json(const Element& e) const = 0;
  virtual Element element_from_json(const Json& j) const = 0;

  virtual std::optional<LatticeModel> lattice_model() const { return std::nullopt; }
};

using InstancePtr = std::shared_ptr<const GroupInstance>;

Element compose(const GroupInstance& instance, const Element& g, const Element& h);
Scalar distance(const GroupInstance& instance, const Element& g, const Element& h);
Element inverse(const GroupInstance& instance, const Element& g);

/// k-fold composition; k <= 0 requires inverses (k = 0 also an identity).
Element power(const GroupInstance& instance, const Element& g, long k);

/// d(a, a*b). Independent of the base point a in any metric semigroup.
Scalar displacement(const GroupInstance& instance, const Element& a, const Element& b);

/// G' = G with an identity 1' attached, d(1', b) := d(b, b^2). Returns the
/// input unchanged when it already has an identity.
InstancePtr adjoin_identity(InstancePtr instance);

/// The unique idempotent among `candidates`, if any. Throws
/// ErrorCode::DuplicateIdempotent if two distinct ones are found and
/// ErrorCode::InvalidArgument if the idempotent fails to act as identity.
std::optional<Element> find_idempotent(const GroupInstance& instance,
                                       const std::vector<Element>& candidates);

struct AxiomFailure {
  std::string axiom;
  Json witness;
  std::string detail;
};

struct AxiomAudit {
  std::string instance_kind;
  std::size_t sample_size = 0;
  std::vector<std::string> checked;
  std::vector<std::string> skipped;
  std::optional<AxiomFailure> first_failure;
  std::size_t failures = 0;

  bool passed() const { return failures == 0; }
  Json to_json() const;
};

/// Seeded audit of associativity, commutativity (when claimed), metric
/// axioms, translation invariance and d(y1 y2, z1 z2) <= d(y1,z1) + d(y2,z2).
AxiomAudit audit_axioms(const GroupInstance& instance, std::size_t sample_size,
                        std::uint64_t seed);

}  // namespace groupprob
