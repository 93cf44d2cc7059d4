#include "paradoxlab/paradox.hpp"

#include <cmath>
#include <limits>

#include "paradoxlab/errors.hpp"
#include "paradoxlab/stats.hpp"

namespace paradoxlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

ParadoxFlags compute_paradox_flags(const AttributedGraph& g) {
  const std::size_t n = g.node_count();
  ParadoxFlags flags;
  flags.degree_flag.assign(n, 0);
  flags.degree_valid.assign(n, 0);
  flags.attr_flag.assign(n, 0);
  flags.attr_valid.assign(n, 0);
  flags.mean_neighbor_degree.assign(n, kNaN);
  flags.mean_neighbor_attribute.assign(n, kNaN);

  for (NodeId u = 0; u < n; ++u) {
    const auto nbrs = g.neighbors(u);
    if (nbrs.empty()) {
      ++flags.isolated;
      continue;
    }

    const auto deg_u = static_cast<std::int64_t>(nbrs.size());
    std::int64_t degree_diff = 0;  // sum of deg(v) - deg(u), exact
    std::uint64_t degree_sum = 0;
    for (const NodeId v : nbrs) {
      const auto deg_v = static_cast<std::int64_t>(g.degree(v));
      degree_diff += deg_v - deg_u;
      degree_sum += static_cast<std::uint64_t>(deg_v);
    }
    flags.degree_valid[u] = 1;
    flags.degree_flag[u] = degree_diff > 0;
    flags.mean_neighbor_degree[u] =
        static_cast<double>(degree_sum) / static_cast<double>(deg_u);
    ++flags.degree_eligible;

    if (!g.has_attribute(u)) {
      ++flags.excluded_missing_own;
      continue;
    }
    const double a_u = g.attribute(u);
    double attr_diff = 0.0;  // sum of a(v) - a(u) over attributed neighbors
    double attr_sum = 0.0;
    std::size_t attr_cnt = 0;
    for (const NodeId v : nbrs) {
      if (!g.has_attribute(v)) continue;
      attr_diff += g.attribute(v) - a_u;
      attr_sum += g.attribute(v);
      ++attr_cnt;
    }
    if (attr_cnt == 0) {
      ++flags.excluded_no_attributed_nbrs;
      continue;
    }
    flags.attr_valid[u] = 1;
    flags.attr_flag[u] = attr_diff > 0.0;
    flags.mean_neighbor_attribute[u] = attr_sum / static_cast<double>(attr_cnt);
    ++flags.attr_eligible;
  }
  return flags;
}

FractionResult paradox_fraction_degree(const AttributedGraph& g) {
  return detail::degree_fraction(g, detail::Comparator::kStrict);
}

FractionResult paradox_fraction_attribute(const AttributedGraph& g) {
  return detail::attribute_fraction(g, detail::Comparator::kStrict);
}

CorrelationResult correlate_degree_attribute(const AttributedGraph& g) {
  std::vector<double> attr, log_deg, raw_deg;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (!g.has_attribute(u) || g.degree(u) == 0) continue;
    attr.push_back(g.attribute(u));
    log_deg.push_back(std::log(static_cast<double>(g.degree(u))));
    raw_deg.push_back(static_cast<double>(g.degree(u)));
  }
  if (attr.size() < 3) {
    throw NumericError("undefined correlation: fewer than 3 attributed nodes with edges");
  }
  const auto r = pearson(attr, log_deg);
  const auto rho = spearman(attr, raw_deg);
  if (!r || !rho) throw NumericError("undefined correlation: constant input vector");

  CorrelationResult out;
  out.pearson_r = *r;
  out.spearman_rho = *rho;
  out.n = attr.size();
  return out;
}

namespace detail {

FractionResult degree_fraction(const AttributedGraph& g, Comparator cmp) {
  const std::size_t n = g.node_count();
  FractionResult res;
  std::size_t count = 0;
  for (NodeId u = 0; u < n; ++u) {
    const auto nbrs = g.neighbors(u);
    if (nbrs.empty()) {
      ++res.excluded;
      continue;
    }
    const auto deg_u = static_cast<std::int64_t>(nbrs.size());
    std::int64_t diff = 0;
    for (const NodeId v : nbrs) diff += static_cast<std::int64_t>(g.degree(v)) - deg_u;
    count += cmp == Comparator::kStrict ? diff > 0 : diff >= 0;
    ++res.eligible;
  }
  if (res.eligible == 0) {
    throw NumericError("degree paradox fraction undefined: no node with a neighborhood");
  }
  res.value = static_cast<double>(count) / static_cast<double>(res.eligible);
  return res;
}

FractionResult attribute_fraction(const AttributedGraph& g, Comparator cmp) {
  const std::size_t n = g.node_count();
  FractionResult res;
  std::size_t count = 0;
  for (NodeId u = 0; u < n; ++u) {
    if (!g.has_attribute(u)) {
      ++res.excluded;
      continue;
    }
    const double a_u = g.attribute(u);
    double diff = 0.0;
    std::size_t cnt = 0;
    for (const NodeId v : g.neighbors(u)) {
      if (!g.has_attribute(v)) continue;
      diff += g.attribute(v) - a_u;
      ++cnt;
    }
    if (cnt == 0) {
      ++res.excluded;
      continue;
    }
    count += cmp == Comparator::kStrict ? diff > 0.0 : diff >= 0.0;
    ++res.eligible;
  }
  if (res.eligible == 0) {
    throw NumericError(
        "attribute paradox fraction undefined: no node with an attribute and an attributed "
        "neighbor");
  }
  res.value = static_cast<double>(count) / static_cast<double>(res.eligible);
  return res;
}

}  // namespace detail

}  // namespace paradoxlab
