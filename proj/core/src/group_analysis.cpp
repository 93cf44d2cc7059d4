#include "paradoxlab/group_analysis.hpp"

#include <cmath>
#include <string>

#include "paradoxlab/errors.hpp"

namespace paradoxlab {

namespace {

ParadoxReport fraction_over_subjects(const ParadoxFlags& flags,
                                     std::span<const NodeId> subjects, bool degree) {
  const auto& valid = degree ? flags.degree_valid : flags.attr_valid;
  const auto& flag = degree ? flags.degree_flag : flags.attr_flag;
  ParadoxReport report;
  std::size_t hits = 0;
  for (const NodeId u : subjects) {
    if (!valid[u]) {
      ++report.excluded;
      continue;
    }
    ++report.eligible;
    hits += flag[u];
  }
  if (report.eligible == 0) {
    throw NumericError("group paradox fraction undefined: no eligible subject");
  }
  report.value = static_cast<double>(hits) / static_cast<double>(report.eligible);
  return report;
}

ConfidenceInterval interval(const ResampleDistribution& dist, const GroupReportOptions& options) {
  if (options.compat_percentiles) {
    return percentile_ci_at(dist, options.compat_percentiles->first,
                            options.compat_percentiles->second);
  }
  return percentile_ci(dist, options.ci_level);
}

}  // namespace

RegressionResult regress_attr_on_neighbor_mean(const AttributedGraph& g,
                                               std::span<const NodeId> subjects) {
  const ParadoxFlags flags = compute_paradox_flags(g);
  std::vector<double> x, y;
  for (const NodeId u : subjects) {
    if (!flags.attr_valid[u]) continue;
    x.push_back(flags.mean_neighbor_attribute[u]);
    y.push_back(g.attribute(u));
  }
  return ols_regression(x, y);
}

GroupReport group_report(const AttributedGraph& g, std::span<const GroupLabel> labels,
                         GroupLabel group, const GroupReportOptions& options) {
  if (labels.size() != g.node_count()) {
    throw ConfigError("group_report: label array size mismatch");
  }
  std::vector<NodeId> subjects;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (labels[u] == group) subjects.push_back(u);
  }
  if (subjects.size() < 10) {
    throw NumericError("group too small: " + std::string(group_label_name(group)) + " has " +
                       std::to_string(subjects.size()) + " members (need >= 10)");
  }

  const AttributedGraph* graph = &g;
  AttributedGraph induced;
  std::vector<NodeId> induced_subjects;
  if (options.induced_subgraph) {
    std::vector<std::uint8_t> keep(g.node_count(), 0);
    for (const NodeId u : subjects) keep[u] = 1;
    induced = induce_subgraph(g, keep);
    graph = &induced;
    induced_subjects.resize(induced.node_count());
    for (NodeId u = 0; u < induced.node_count(); ++u) induced_subjects[u] = u;
  }
  const std::span<const NodeId> eval_subjects =
      options.induced_subgraph ? std::span<const NodeId>(induced_subjects)
                               : std::span<const NodeId>(subjects);

  GroupReport report;
  report.group = group;
  report.n = subjects.size();

  const ParadoxFlags flags = compute_paradox_flags(*graph);
  report.degree_paradox = fraction_over_subjects(flags, eval_subjects, /*degree=*/true);
  report.attribute_paradox = fraction_over_subjects(flags, eval_subjects, /*degree=*/false);

  // bootstrap CIs over the group's subject pool
  BootstrapOptions boot;
  boot.sample_frac = options.sample_frac;
  boot.replicates = options.replicates;
  boot.seed = options.seed;
  boot.workers = options.workers;
  boot.subjects.assign(eval_subjects.begin(), eval_subjects.end());

  const auto degree_dist = bootstrap(*graph, Statistic::kDegreeParadoxFraction, boot);
  report.degree_paradox.ci = interval(degree_dist, options);
  report.degree_paradox.replicates = degree_dist.replicates;
  report.degree_paradox.missing_replicates = degree_dist.missing();

  const auto attr_dist = bootstrap(*graph, Statistic::kAttributeParadoxFraction, boot);
  report.attribute_paradox.ci = interval(attr_dist, options);
  report.attribute_paradox.replicates = attr_dist.replicates;
  report.attribute_paradox.missing_replicates = attr_dist.missing();

  // correlation and regression over the group members
  {
    std::vector<double> attr, log_deg, raw_deg;
    for (const NodeId u : eval_subjects) {
      if (!graph->has_attribute(u) || graph->degree(u) == 0) continue;
      attr.push_back(graph->attribute(u));
      log_deg.push_back(std::log(static_cast<double>(graph->degree(u))));
      raw_deg.push_back(static_cast<double>(graph->degree(u)));
    }
    if (attr.size() < 3) throw NumericError("undefined correlation: group too sparse");
    const auto r = pearson(attr, log_deg);
    const auto rho = spearman(attr, raw_deg);
    if (!r || !rho) throw NumericError("undefined correlation: constant input vector");
    report.correlation.pearson_r = *r;
    report.correlation.spearman_rho = *rho;
    report.correlation.n = attr.size();
  }
  report.regression = regress_attr_on_neighbor_mean(*graph, eval_subjects);
  return report;
}

}  // namespace paradoxlab
