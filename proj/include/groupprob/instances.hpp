#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "groupprob/algebra.hpp"

namespace groupprob {

/// Parsed group specification. Unused parameters stay empty.
struct InstanceSpec {
  std::string kind;
  std::optional<long> dim;
  std::optional<long> modulus;
  std::optional<long> edges;
  std::optional<long> rank;
  std::optional<RationalVector> weights;
  /// positive-naturals / rational-vector semigroups only: return G' instead.
  bool with_identity = false;
  /// rational-vector only: restrict to strictly positive coordinates.
  bool positive = false;

  friend bool operator==(const InstanceSpec&, const InstanceSpec&) = default;
};

/// Supported families, in the order printed by `--list-kinds`.
std::vector<std::string> list_kinds();

InstanceSpec parse_instance_spec(const Json& j);
Json serialize_instance_spec(const InstanceSpec& spec);
InstancePtr build_instance(const InstanceSpec& spec);

/// Malformed JSON, unknown kinds and invalid parameters raise distinct
/// error codes.
InstancePtr parse_group_spec(std::string_view text);
InstancePtr parse_group_spec(const Json& j);
inline InstancePtr parse_group_spec(const char* text) { return parse_group_spec(std::string_view(text)); }
inline InstancePtr parse_group_spec(const std::string& text) { return parse_group_spec(std::string_view(text)); }

std::vector<Element> enumerate_elements(const GroupInstance& instance,
                                        std::optional<long> bound = std::nullopt);

// Direct constructors. `weights` defaults to all ones.
InstancePtr make_free_abelian(long dim, std::optional<RationalVector> weights = {});
InstancePtr make_cyclic(long modulus, long dim = 1, std::optional<RationalVector> weights = {});
InstancePtr make_torus(long dim, std::optional<RationalVector> weights = {});
InstancePtr make_graph_space(long edges, std::optional<RationalVector> weights = {});
InstancePtr make_free_group(long rank);
/// (N^d \ {0}, +): a semigroup without identity.
InstancePtr make_positive_naturals(long dim = 1, std::optional<RationalVector> weights = {});
/// Q^d with weighted L1 distance; `positive` restricts to the semigroup of
/// strictly positive vectors.
InstancePtr make_rational_vector(long dim, std::optional<RationalVector> weights = {},
                                 bool positive = false);

// Convenience element builders.
Element int_element(std::initializer_list<std::int64_t> coords);
Element real_element(std::initializer_list<double> coords);

}  // namespace groupprob
