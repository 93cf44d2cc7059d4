#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "paradoxlab/gmm.hpp"
#include "paradoxlab/graph.hpp"
#include "paradoxlab/paradox.hpp"
#include "paradoxlab/report.hpp"
#include "paradoxlab/resample.hpp"
#include "paradoxlab/stats.hpp"

namespace paradoxlab {

struct GroupReportOptions {
  double sample_frac = 0.1;  // fraction of the group, per replicate
  std::size_t replicates = 5000;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  double ci_level = 0.95;
  std::optional<std::pair<double, double>> compat_percentiles;  // e.g. {5, 95}
  /// Sensitivity switch: re-induce the subgraph of the group instead of
  /// evaluating members against their full-graph neighborhoods.
  bool induced_subgraph = false;
};

struct GroupReport {
  GroupLabel group = GroupLabel::kUnassigned;
  std::size_t n = 0;  // labeled nodes in the group
  ParadoxReport degree_paradox;
  ParadoxReport attribute_paradox;
  CorrelationResult correlation;
  RegressionResult regression;
};

/// Statistics restricted to the nodes labeled `group`. Subjects keep their
/// full-graph neighborhoods (the demarcation plane was built from them);
/// options.induced_subgraph switches to the re-induced alternative.
/// Throws NumericError when the group has fewer than 10 members.
GroupReport group_report(const AttributedGraph& g, std::span<const GroupLabel> labels,
                         GroupLabel group, const GroupReportOptions& options = {});

/// OLS of own attribute on the mean attribute of (attributed) neighbors over
/// the given subjects; throws NumericError on a constant regressor or fewer
/// than 3 usable subjects.
RegressionResult regress_attr_on_neighbor_mean(const AttributedGraph& g,
                                               std::span<const NodeId> subjects);

}  // namespace paradoxlab
