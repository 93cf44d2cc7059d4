#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace paradoxlab {

/// Dense node index, 0..n-1 after internment. Original edge-list identifiers
/// are kept in a side table on the graph.
using NodeId = std::uint32_t;

struct NeighborStats {
  std::size_t degree = 0;
  std::optional<double> mean_neighbor_degree;     // unset when degree == 0
  std::optional<double> mean_neighbor_attribute;  // unset without attributed neighbors
  std::size_t attributed_neighbors = 0;           // count behind the attribute mean
};

enum class BuildMode {
  kReciprocalOnly,  // keep {u,v} iff both (u,v) and (v,u) occur
  kSymmetrize,      // keep {u,v} if either direction occurs
};

struct BuildStats {
  std::uint64_t directed_edges = 0;    // well-formed non-self input pairs
  std::uint64_t self_edges = 0;        // skipped, not fatal
  std::uint64_t duplicate_edges = 0;   // repeated ordered pairs
  std::uint64_t one_way_dropped = 0;   // pairs discarded by reciprocal mode
  std::uint64_t undirected_edges = 0;  // surviving edges
};

struct AttachStats {
  std::uint64_t matched = 0;          // table rows applied to graph nodes
  std::uint64_t unmatched_rows = 0;   // table ids absent from the graph
  std::uint64_t nodes_without = 0;    // graph nodes left without an attribute
};

class AttributeTable;

/// Immutable undirected graph with an optional real-valued attribute in
/// [-1, +1] per node. Canonical form: adjacency stored as CSR with each
/// neighbor list sorted ascending, no self-loops, no duplicate edges,
/// v in N(u) iff u in N(v).
class AttributedGraph {
 public:
  AttributedGraph() = default;

  std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return adj_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId u) const {
    return {adj_.data() + offsets_[u], adj_.data() + offsets_[u + 1]};
  }
  std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }

  bool has_attribute(NodeId u) const { return attr_present_[u] != 0; }
  double attribute(NodeId u) const { return attr_[u]; }
  std::size_t attributed_count() const noexcept { return attributed_count_; }

  const std::string& original_id(NodeId u) const { return ids_[u]; }
  std::optional<NodeId> find_node(std::string_view original_id) const;

  NeighborStats neighbor_stats(NodeId u) const;
  double mean_degree() const;

  /// Canonical binary snapshot (magic "PDXG"); bit-exact across runs for
  /// identical graphs.
  void save_snapshot(const std::filesystem::path& path) const;
  static AttributedGraph load_snapshot(const std::filesystem::path& path);

  /// Direct constructor for generators and tests: edges are dense-id pairs,
  /// deduplicated and symmetrized here. Default original ids are the decimal
  /// dense indices.
  static AttributedGraph from_undirected_edges(std::size_t n,
                                               std::span<const std::pair<NodeId, NodeId>> edges,
                                               std::vector<std::string> ids = {});

  /// Checks all structural invariants; throws NumericError on violation.
  void validate() const;

  friend class GraphBuilder;
  friend AttributedGraph induce_subgraph(const AttributedGraph&, std::span<const std::uint8_t>);
  friend AttributedGraph attach_attributes(const AttributedGraph&, const AttributeTable&,
                                           AttachStats*);
  friend AttributedGraph replace_attributes(const AttributedGraph&, std::span<const double>,
                                            std::span<const std::uint8_t>);

 private:
  void rebuild_id_index();

  std::vector<std::uint64_t> offsets_;      // n+1 CSR row starts
  std::vector<NodeId> adj_;                 // 2m neighbor entries, sorted per row
  std::vector<double> attr_;                // n, zero where absent
  std::vector<std::uint8_t> attr_present_;  // n, 0/1
  std::size_t attributed_count_ = 0;
  std::vector<std::string> ids_;            // dense id -> original id

  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::unordered_map<std::string, NodeId, StringHash, std::equal_to<>> id_index_;
};

/// Streaming construction from directed edges named by arbitrary string ids.
/// Node internment order is first appearance in the input, which makes the
/// dense ids (and therefore snapshots) deterministic for a given input.
class GraphBuilder {
 public:
  void add_edge(std::string_view from, std::string_view to);

  /// Nodes listed here survive even with no edges.
  void declare_node(std::string_view id);

  AttributedGraph finalize(BuildMode mode, BuildStats* stats = nullptr);

  const BuildStats& stats() const noexcept { return stats_; }

 private:
  NodeId intern(std::string_view id);

  std::vector<std::string> ids_;
  std::unordered_map<std::string, NodeId, AttributedGraph::StringHash, std::equal_to<>> index_;
  // key: (min<<32)|max; value bit0 = low->high seen, bit1 = high->low seen
  std::unordered_map<std::uint64_t, std::uint8_t> pairs_;
  std::vector<std::uint64_t> pair_order_;  // first-seen order, for determinism
  std::vector<std::uint8_t> declared_;
  BuildStats stats_;
};

/// Builds from an in-memory edge sequence (directed ordered pairs).
AttributedGraph build_undirected(std::span<const std::pair<std::string, std::string>> edges,
                                 BuildMode mode, BuildStats* stats = nullptr);

/// Removes nodes with degree < k and returns the induced subgraph among the
/// survivors. iterate=true repeats to the fixed point (the k-core).
AttributedGraph filter_min_degree(const AttributedGraph& g, std::size_t k, bool iterate = false);

/// Induced subgraph over nodes with keep[u] != 0; dense ids are compacted
/// preserving relative order, original ids and attributes carried over.
AttributedGraph induce_subgraph(const AttributedGraph& g, std::span<const std::uint8_t> keep);

}  // namespace paradoxlab
