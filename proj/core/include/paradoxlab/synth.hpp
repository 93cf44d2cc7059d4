#pragma once

#include <cstdint>
#include <variant>

#include "paradoxlab/graph.hpp"

namespace paradoxlab {

/// Growth model: starts from m isolated seed nodes; each new node attaches
/// to m distinct existing nodes with probability proportional to degree
/// (uniform while all degrees are zero, so the first arrival links to every
/// seed). Exactly m*(n-m) edges.
struct PreferentialAttachment {
  std::size_t m = 3;
};

/// Power-law degree sequence P(k) ~ k^-gamma on [min_degree, n-1], stub
/// matched; self-loops and multi-edges are discarded and the graph
/// simplified.
struct ConfigurationModel {
  double gamma = 2.5;
  std::size_t min_degree = 1;
};

struct BimodalAttributes {
  double mu1 = 0.2;
  double mu2 = 0.0;
  double sigma = 0.05;
  double mix = 0.5;  // probability of the mu1 mode
};

struct MonoAttributes {
  double mu = 0.0;
  double sigma = 0.05;
};

struct SynthSpec {
  std::size_t n = 1000;
  std::variant<PreferentialAttachment, ConfigurationModel> degree_model =
      PreferentialAttachment{};
  std::variant<BimodalAttributes, MonoAttributes> attr_model = BimodalAttributes{};
  /// Target Pearson between attribute and ln(degree); attributes are
  /// rank-coupled to degree through a Gaussian copula until the measured
  /// value is within +-0.02 (the attribute marginal is never altered).
  double degree_corr = 0.0;
  /// Greedy attribute-swap passes (n proposals each) between equal-degree
  /// nodes; raises attribute assortativity while preserving both the
  /// attribute multiset and the attribute-degree joint distribution.
  std::size_t homophily_rounds = 0;
  std::uint64_t seed = 0;
};

/// Topology only (no attributes). Throws ConfigError on an invalid spec.
AttributedGraph gen_graph(const SynthSpec& spec);

/// Draws attributes, imposes the degree correlation, then runs the homophily
/// passes. Throws UnreachableCorrelationError when the target correlation
/// cannot be realized on this topology.
AttributedGraph assign_attributes(const AttributedGraph& g, const SynthSpec& spec);

/// gen_graph + assign_attributes.
AttributedGraph gen_attributed_graph(const SynthSpec& spec);

/// Deterministic cohort-scale fixture: 39,110 nodes, minimum degree 15,
/// heavy-tailed degrees, bimodal assortative attributes with Pearson
/// (attribute, ln degree) targeted at 0.11.
AttributedGraph paperlike_fixture(std::uint64_t seed);

/// The SynthSpec behind paperlike_fixture (exposed for the CLI).
SynthSpec paperlike_spec(std::uint64_t seed);

}  // namespace paradoxlab
