#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "paradoxlab/errors.hpp"
#include "paradoxlab/graph.hpp"
#include "paradoxlab/ingest.hpp"
#include "paradoxlab/rng.hpp"

using namespace paradoxlab;

namespace {

using Edges = std::vector<std::pair<std::string, std::string>>;

AttributedGraph path3() {
  // a - b - c as reciprocal directed pairs
  const Edges edges{{"a", "b"}, {"b", "a"}, {"b", "c"}, {"c", "b"}};
  return build_undirected(edges, BuildMode::kReciprocalOnly);
}

AttributedGraph star(std::size_t leaves) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t i = 1; i <= leaves; ++i) edges.emplace_back(0, static_cast<NodeId>(i));
  return AttributedGraph::from_undirected_edges(leaves + 1, edges);
}

// Erdos-Renyi-ish random graph for property tests.
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

}  // namespace

TEST_CASE("reciprocal mode keeps only two-way pairs") {
  const Edges edges{{"a", "b"}, {"b", "a"}, {"a", "c"}};
  BuildStats stats;
  const auto g = build_undirected(edges, BuildMode::kReciprocalOnly, &stats);
  REQUIRE(g.node_count() == 2);  // c had no surviving edge and no declaration
  CHECK(g.edge_count() == 1);
  CHECK(g.find_node("a").has_value());
  CHECK(g.find_node("b").has_value());
  CHECK_FALSE(g.find_node("c").has_value());
  CHECK(stats.one_way_dropped == 1);
  CHECK(stats.undirected_edges == 1);
  g.validate();
}

TEST_CASE("symmetrize mode keeps either direction") {
  const Edges edges{{"a", "b"}, {"b", "a"}, {"a", "c"}};
  const auto g = build_undirected(edges, BuildMode::kSymmetrize);
  REQUIRE(g.node_count() == 3);
  CHECK(g.edge_count() == 2);
  const auto a = *g.find_node("a");
  CHECK(g.degree(a) == 2);
  g.validate();
}

TEST_CASE("empty edge set gives the empty graph") {
  const auto g = build_undirected({}, BuildMode::kReciprocalOnly);
  CHECK(g.node_count() == 0);
  CHECK(g.edge_count() == 0);
}

TEST_CASE("self edges are skipped and counted, duplicates deduplicated") {
  const Edges edges{{"x", "x"}, {"a", "b"}, {"a", "b"}, {"b", "a"}};
  BuildStats stats;
  const auto g = build_undirected(edges, BuildMode::kReciprocalOnly, &stats);
  CHECK(stats.self_edges == 1);
  CHECK(stats.duplicate_edges == 1);
  CHECK(g.edge_count() == 1);
  CHECK_FALSE(g.find_node("x").has_value());
}

TEST_CASE("declared nodes survive without edges") {
  GraphBuilder builder;
  builder.add_edge("a", "b");
  builder.add_edge("b", "a");
  builder.declare_node("lonely");
  const auto g = builder.finalize(BuildMode::kReciprocalOnly);
  REQUIRE(g.node_count() == 3);
  const auto lonely = *g.find_node("lonely");
  CHECK(g.degree(lonely) == 0);
}

TEST_CASE("min-degree filter: single pass on a path") {
  const auto g = path3();
  const auto filtered = filter_min_degree(g, 2, /*iterate=*/false);
  REQUIRE(filtered.node_count() == 1);  // only b survives, with no edges left
  CHECK(filtered.original_id(0) == "b");
  CHECK(filtered.edge_count() == 0);
}

TEST_CASE("min-degree filter: iterated pass empties a path (2-core)") {
  const auto filtered = filter_min_degree(path3(), 2, /*iterate=*/true);
  CHECK(filtered.node_count() == 0);
}

TEST_CASE("min-degree filter with k=0 is the identity") {
  const auto g = random_graph(60, 0.1, 4);
  const auto filtered = filter_min_degree(g, 0, false);
  REQUIRE(filtered.node_count() == g.node_count());
  CHECK(filtered.edge_count() == g.edge_count());
}

TEST_CASE("k-core invariant: every surviving node has degree >= k") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = random_graph(120, 0.04, seed);
    const auto core = filter_min_degree(g, 3, true);
    for (NodeId u = 0; u < core.node_count(); ++u) CHECK(core.degree(u) >= 3);
    core.validate();
  }
}

TEST_CASE("neighbor stats on the star") {
  const auto g = star(4);
  const auto hub = g.neighbor_stats(0);
  CHECK(hub.degree == 4);
  CHECK(*hub.mean_neighbor_degree == 1.0);
  const auto leaf = g.neighbor_stats(1);
  CHECK(leaf.degree == 1);
  CHECK(*leaf.mean_neighbor_degree == 4.0);
}

TEST_CASE("neighbor stats averages only attributed neighbors") {
  auto g = path3();
  AttributeTable table;
  table.set("a", 0.1);
  table.set("b", 0.5);
  table.set("c", 0.2);
  g = attach_attributes(g, table);
  const auto b = *g.find_node("b");
  const auto stats = g.neighbor_stats(b);
  CHECK(*stats.mean_neighbor_attribute == doctest::Approx(0.15).epsilon(1e-15));
  CHECK(stats.attributed_neighbors == 2);

  // drop c's attribute: the mean now uses only a
  AttributeTable partial;
  partial.set("a", 0.1);
  partial.set("b", 0.5);
  auto g2 = attach_attributes(path3(), partial);
  const auto b2 = *g2.find_node("b");
  const auto stats2 = g2.neighbor_stats(b2);
  CHECK(*stats2.mean_neighbor_attribute == doctest::Approx(0.1));
  CHECK(stats2.attributed_neighbors == 1);

  // isolated node: means undefined
  GraphBuilder builder;
  builder.declare_node("solo");
  const auto solo_graph = builder.finalize(BuildMode::kSymmetrize);
  const auto solo = solo_graph.neighbor_stats(0);
  CHECK(solo.degree == 0);
  CHECK_FALSE(solo.mean_neighbor_degree.has_value());
  CHECK_FALSE(solo.mean_neighbor_attribute.has_value());
}

TEST_CASE("handshake identity on random graphs") {
  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    const auto g = random_graph(150, 0.05, seed);
    std::size_t degree_sum = 0;
    for (NodeId u = 0; u < g.node_count(); ++u) degree_sum += g.degree(u);
    CHECK(degree_sum == 2 * g.edge_count());
  }
}

TEST_CASE("mean neighbor degree matches brute force and Feld's inequality holds") {
  for (std::uint64_t seed = 20; seed < 25; ++seed) {
    const auto g = random_graph(100, 0.06, seed);
    double mnd_total = 0.0;
    std::size_t counted = 0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
      if (g.degree(u) == 0) continue;
      double sum = 0.0;
      for (const NodeId v : g.neighbors(u)) sum += static_cast<double>(g.degree(v));
      const double brute = sum / static_cast<double>(g.degree(u));
      CHECK(*g.neighbor_stats(u).mean_neighbor_degree == brute);
      mnd_total += brute;
      ++counted;
    }
    if (g.edge_count() >= 1) {
      // mean over nodes of mean neighbor degree >= mean degree
      std::size_t degree_sum = 0;
      for (NodeId u = 0; u < g.node_count(); ++u) degree_sum += g.degree(u);
      const double mean_degree =
          static_cast<double>(degree_sum) / static_cast<double>(g.node_count());
      CHECK(mnd_total / static_cast<double>(counted) >= mean_degree - 1e-12);
    }
  }
}

TEST_CASE("snapshot round trip is the identity") {
  auto g = random_graph(80, 0.08, 3);
  // attach attributes to half the nodes
  AttributeTable table;
  for (NodeId u = 0; u < g.node_count(); u += 2) {
    table.set(std::to_string(u), -1.0 + 0.025 * static_cast<double>(u));
  }
  g = attach_attributes(g, table);

  const auto dir = std::filesystem::temp_directory_path() / "pdx_graph_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "roundtrip.pdxg";
  g.save_snapshot(path);
  const auto loaded = AttributedGraph::load_snapshot(path);

  REQUIRE(loaded.node_count() == g.node_count());
  REQUIRE(loaded.edge_count() == g.edge_count());
  for (NodeId u = 0; u < g.node_count(); ++u) {
    CHECK(loaded.original_id(u) == g.original_id(u));
    CHECK(loaded.has_attribute(u) == g.has_attribute(u));
    if (g.has_attribute(u)) CHECK(loaded.attribute(u) == g.attribute(u));
    const auto a = g.neighbors(u);
    const auto b = loaded.neighbors(u);
    REQUIRE(a.size() == b.size());
    CHECK(std::equal(a.begin(), a.end(), b.begin()));
  }
  loaded.validate();

  // identical graphs produce identical bytes
  const auto path2 = dir / "roundtrip2.pdxg";
  loaded.save_snapshot(path2);
  std::ifstream f1(path, std::ios::binary), f2(path2, std::ios::binary);
  const std::string bytes1((std::istreambuf_iterator<char>(f1)), {});
  const std::string bytes2((std::istreambuf_iterator<char>(f2)), {});
  CHECK(bytes1 == bytes2);
}

TEST_CASE("snapshot loader rejects foreign files") {
  const auto dir = std::filesystem::temp_directory_path() / "pdx_graph_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "not_a_snapshot.bin";
  std::ofstream(path) << "definitely not a snapshot";
  CHECK_THROWS_AS(AttributedGraph::load_snapshot(path), IoError);
  CHECK_THROWS_AS(AttributedGraph::load_snapshot(dir / "missing.pdxg"), IoError);
}
