#pragma once

#include <cstdint>
#include <vector>

#include "paradoxlab/graph.hpp"

namespace paradoxlab {

/// Per-node paradox predicates over full-graph neighborhoods. A node is
/// degree-paradoxed when its degree is strictly below its neighbors' mean
/// degree, attribute-paradoxed when its own attribute is strictly below the
/// mean attribute of its attributed neighbors. Flags are defined only where
/// the corresponding validity entry is set.
///
/// The strict comparison x(u) < mean_{v in N(u)} x(v) is evaluated as
/// sum_{v} (x(v) - x(u)) > 0, which is exact for integer degrees and exact
/// on ties (a constant attribute yields a sum of exact zeros).
struct ParadoxFlags {
  std::vector<std::uint8_t> degree_flag;
  std::vector<std::uint8_t> degree_valid;  // degree >= 1
  std::vector<std::uint8_t> attr_flag;
  std::vector<std::uint8_t> attr_valid;    // own attribute + >= 1 attributed neighbor

  std::vector<double> mean_neighbor_degree;     // NaN where invalid
  std::vector<double> mean_neighbor_attribute;  // NaN where invalid

  std::size_t degree_eligible = 0;
  std::size_t attr_eligible = 0;
  std::size_t excluded_missing_own = 0;        // nodes without their own attribute
  std::size_t excluded_no_attributed_nbrs = 0; // attributed nodes with no attributed neighbor
  std::size_t isolated = 0;                    // degree 0
};

ParadoxFlags compute_paradox_flags(const AttributedGraph& g);

struct FractionResult {
  double value = 0.0;
  std::size_t eligible = 0;  // denominator
  std::size_t excluded = 0;  // nodes outside the denominator
};

/// Fraction of nodes with degree strictly below their neighbors' mean degree,
/// over all nodes with a defined neighborhood. Throws NumericError when no
/// node qualifies (empty graph).
FractionResult paradox_fraction_degree(const AttributedGraph& g);

/// Attribute analogue over nodes with an own attribute and at least one
/// attributed neighbor. Throws NumericError when no node is eligible.
FractionResult paradox_fraction_attribute(const AttributedGraph& g);

struct CorrelationResult {
  double pearson_r = 0.0;    // attribute vs ln(degree)
  double spearman_rho = 0.0; // attribute vs raw degree, average ranks
  std::size_t n = 0;
};

/// Throws NumericError with "undefined correlation" for constant inputs or
/// n < 3. Natural log; Pearson is invariant under the log base anyway.
CorrelationResult correlate_degree_attribute(const AttributedGraph& g);

namespace detail {

enum class Comparator { kStrict, kWeak };  // kWeak (<=) exists for tests only

FractionResult degree_fraction(const AttributedGraph& g, Comparator cmp);
FractionResult attribute_fraction(const AttributedGraph& g, Comparator cmp);

}  // namespace detail

}  // namespace paradoxlab
