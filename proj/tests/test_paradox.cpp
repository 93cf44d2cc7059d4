#include <doctest.h>

#include <cmath>
#include <vector>

#include "paradoxlab/errors.hpp"
#include "paradoxlab/graph.hpp"
#include "paradoxlab/ingest.hpp"
#include "paradoxlab/paradox.hpp"
#include "paradoxlab/rng.hpp"

using namespace paradoxlab;

namespace {

AttributedGraph star(std::size_t leaves) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t i = 1; i <= leaves; ++i) edges.emplace_back(0, static_cast<NodeId>(i));
  return AttributedGraph::from_undirected_edges(leaves + 1, edges);
}

AttributedGraph cycle(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>((i + 1) % n));
  }
  return AttributedGraph::from_undirected_edges(n, edges);
}

AttributedGraph path3_attributed(double a, double b, double c) {
  const std::vector<std::pair<NodeId, NodeId>> edges{{0, 1}, {1, 2}};
  auto g = AttributedGraph::from_undirected_edges(3, edges);
  const std::vector<double> values{a, b, c};
  const std::vector<std::uint8_t> present{1, 1, 1};
  return replace_attributes(g, values, present);
}

AttributedGraph random_graph(std::size_t n, double p, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (rng.unit() < p) edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    }
  }
  return AttributedGraph::from_undirected_edges(n, edges);
}

AttributedGraph with_random_attributes(const AttributedGraph& g, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> values(g.node_count());
  std::vector<std::uint8_t> present(g.node_count(), 1);
  for (auto& v : values) v = 2.0 * rng.unit() - 1.0;
  return replace_attributes(g, values, present);
}

// Brute-force oracle: naive double loop over the graph API, explicit means.
double oracle_degree_fraction(const AttributedGraph& g) {
  std::size_t eligible = 0, hits = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (g.degree(u) == 0) continue;
    ++eligible;
    double diff = 0.0;
    for (const NodeId v : g.neighbors(u)) {
      diff += static_cast<double>(g.degree(v)) - static_cast<double>(g.degree(u));
    }
    if (diff > 0.0) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(eligible);
}

double oracle_attribute_fraction(const AttributedGraph& g) {
  std::size_t eligible = 0, hits = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (!g.has_attribute(u)) continue;
    double diff = 0.0;
    std::size_t cnt = 0;
    for (const NodeId v : g.neighbors(u)) {
      if (!g.has_attribute(v)) continue;
      diff += g.attribute(v) - g.attribute(u);
      ++cnt;
    }
    if (cnt == 0) continue;
    ++eligible;
    if (diff > 0.0) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(eligible);
}

}  // namespace

TEST_CASE("degree paradox on the star K_{1,4} is 0.8") {
  const auto res = paradox_fraction_degree(star(4));
  CHECK(res.value == 0.8);
  CHECK(res.eligible == 5);
}

TEST_CASE("regular graphs have zero degree paradox") {
  CHECK(paradox_fraction_degree(cycle(5)).value == 0.0);
  CHECK(paradox_fraction_degree(cycle(17)).value == 0.0);
}

TEST_CASE("degree paradox on the path is 2/3") {
  const auto g = path3_attributed(0.1, 0.5, 0.2);
  CHECK(paradox_fraction_degree(g).value == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("attribute paradox on the path (0.1, 0.5, 0.2) is 2/3") {
  const auto g = path3_attributed(0.1, 0.5, 0.2);
  const auto res = paradox_fraction_attribute(g);
  CHECK(res.value == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(res.eligible == 3);
}

TEST_CASE("constant attributes give zero attribute paradox") {
  const auto g = path3_attributed(0.3, 0.3, 0.3);
  CHECK(paradox_fraction_attribute(g).value == 0.0);

  // also on a denser graph with an awkward constant
  auto dense = random_graph(50, 0.2, 9);
  std::vector<double> values(dense.node_count(), 0.1);  // 0.1 is not exactly representable
  const std::vector<std::uint8_t> present(dense.node_count(), 1);
  dense = replace_attributes(dense, values, present);
  CHECK(paradox_fraction_attribute(dense).value == 0.0);
}

TEST_CASE("empty and edgeless graphs are errors") {
  const AttributedGraph empty;
  CHECK_THROWS_AS(paradox_fraction_degree(empty), NumericError);
  const auto isolated = AttributedGraph::from_undirected_edges(3, {});
  CHECK_THROWS_AS(paradox_fraction_degree(isolated), NumericError);
  CHECK_THROWS_AS(paradox_fraction_attribute(isolated), NumericError);
}

TEST_CASE("flags agree with fractions and with hand enumeration") {
  const auto g = path3_attributed(0.1, 0.5, 0.2);
  const auto flags = compute_paradox_flags(g);
  CHECK(flags.attr_flag == std::vector<std::uint8_t>{1, 0, 1});
  CHECK(flags.degree_flag == std::vector<std::uint8_t>{1, 0, 1});

  const auto s = star(4);
  const auto sflags = compute_paradox_flags(s);
  CHECK(sflags.degree_flag[0] == 0);  // hub
  for (NodeId u = 1; u <= 4; ++u) CHECK(sflags.degree_flag[u] == 1);

  const auto c = cycle(5);
  const auto cflags = compute_paradox_flags(c);
  for (NodeId u = 0; u < 5; ++u) CHECK(cflags.degree_flag[u] == 0);
}

TEST_CASE("oracle equivalence on random graphs") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t n = 20 + (seed * 13) % 180;
    auto g = random_graph(n, 0.02 + 0.3 * (static_cast<double>(seed) / 30.0), seed + 1000);
    if (g.edge_count() == 0) continue;
    g = with_random_attributes(g, seed);
    CHECK(paradox_fraction_degree(g).value == oracle_degree_fraction(g));
    CHECK(paradox_fraction_attribute(g).value == oracle_attribute_fraction(g));
  }
}

TEST_CASE("strict vs weak comparator: weak fraction can only be larger") {
  for (std::uint64_t seed = 50; seed < 60; ++seed) {
    auto g = random_graph(80, 0.08, seed);
    if (g.edge_count() == 0) continue;
    g = with_random_attributes(g, seed);
    const auto strict_d = detail::degree_fraction(g, detail::Comparator::kStrict);
    const auto weak_d = detail::degree_fraction(g, detail::Comparator::kWeak);
    CHECK(weak_d.value >= strict_d.value);
    const auto strict_a = detail::attribute_fraction(g, detail::Comparator::kStrict);
    const auto weak_a = detail::attribute_fraction(g, detail::Comparator::kWeak);
    CHECK(weak_a.value >= strict_a.value);
  }
  // on a regular graph the gap is total: strict 0, weak 1
  const auto c = cycle(9);
  CHECK(detail::degree_fraction(c, detail::Comparator::kStrict).value == 0.0);
  CHECK(detail::degree_fraction(c, detail::Comparator::kWeak).value == 1.0);
}

TEST_CASE("correlation: exact log-linear attribute gives pearson 1") {
  // star with extra edges so degrees vary: use a small preferential-ish graph
  auto g = random_graph(60, 0.1, 7);
  std::vector<double> values(g.node_count(), 0.0);
  std::vector<std::uint8_t> present(g.node_count(), 0);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (g.degree(u) == 0) continue;
    values[u] = 0.1 * std::log(static_cast<double>(g.degree(u)));
    present[u] = 1;
  }
  g = replace_attributes(g, values, present);
  const auto corr = correlate_degree_attribute(g);
  CHECK(corr.pearson_r == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(corr.spearman_rho == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pearson against log degree is invariant under the log base") {
  auto g = random_graph(80, 0.1, 21);
  g = with_random_attributes(g, 22);

  std::vector<double> attr, ln_deg, log10_deg;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (!g.has_attribute(u) || g.degree(u) == 0) continue;
    attr.push_back(g.attribute(u));
    ln_deg.push_back(std::log(static_cast<double>(g.degree(u))));
    log10_deg.push_back(std::log10(static_cast<double>(g.degree(u))));
  }
  const double r_ln = *pearson(attr, ln_deg);
  const double r_log10 = *pearson(attr, log10_deg);
  CHECK(std::fabs(r_ln - r_log10) <= 1e-12);
  CHECK(correlate_degree_attribute(g).pearson_r == doctest::Approx(r_ln).epsilon(1e-14));
}

TEST_CASE("shuffled attributes decorrelate: |r| < 0.03 at n = 10000") {
  // fixed-degree-structure graph with independently drawn attributes
  Rng rng(314159);
  const std::size_t n = 10000;
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t u = 1; u < n; ++u) {
    // attach to a random earlier node: varied degrees, connected
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(rng.index(u)));
  }
  auto g = AttributedGraph::from_undirected_edges(n, edges);
  g = with_random_attributes(g, 9001);
  const auto corr = correlate_degree_attribute(g);
  CHECK(std::fabs(corr.pearson_r) < 0.03);
  CHECK(std::fabs(corr.spearman_rho) < 0.03);
}

TEST_CASE("undefined correlation cases throw") {
  // fewer than 3 attributed nodes
  const auto tiny = path3_attributed(0.1, 0.5, 0.2);
  auto partial = replace_attributes(tiny, {0.1, 0.5, 0.0},
                                    std::vector<std::uint8_t>{1, 1, 0});
  CHECK_THROWS_AS(correlate_degree_attribute(partial), NumericError);

  // constant attribute vector
  const auto constant = path3_attributed(0.3, 0.3, 0.3);
  CHECK_THROWS_AS(correlate_degree_attribute(constant), NumericError);

  // constant degree (cycle) with varying attributes: log-degree constant
  auto c = with_random_attributes(cycle(10), 5);
  CHECK_THROWS_AS(correlate_degree_attribute(c), NumericError);
}
