#include "paradoxlab/graph.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <limits>

#include "paradoxlab/errors.hpp"

namespace paradoxlab {

namespace {

constexpr char kMagic[4] = {'P', 'D', 'X', 'G'};
constexpr std::uint32_t kSnapshotVersion = 1;

std::uint64_t pack_pair(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

template <typename T>
void write_pod(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_pod(std::ifstream& in, T& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
}

}  // namespace

std::optional<NodeId> AttributedGraph::find_node(std::string_view original_id) const {
  const auto it = id_index_.find(original_id);
  if (it == id_index_.end()) return std::nullopt;
  return it->second;
}

NeighborStats AttributedGraph::neighbor_stats(NodeId u) const {
  NeighborStats s;
  const auto nbrs = neighbors(u);
  s.degree = nbrs.size();
  if (nbrs.empty()) return s;

  std::uint64_t degree_sum = 0;
  double attr_sum = 0.0;
  std::size_t attr_count = 0;
  for (const NodeId v : nbrs) {
    degree_sum += degree(v);
    if (attr_present_[v]) {
      attr_sum += attr_[v];
      ++attr_count;
    }
  }
  s.mean_neighbor_degree = static_cast<double>(degree_sum) / static_cast<double>(s.degree);
  s.attributed_neighbors = attr_count;
  if (attr_count > 0) {
    s.mean_neighbor_attribute = attr_sum / static_cast<double>(attr_count);
  }
  return s;
}

double AttributedGraph::mean_degree() const {
  const std::size_t n = node_count();
  if (n == 0) return 0.0;
  return static_cast<double>(adj_.size()) / static_cast<double>(n);
}

void AttributedGraph::rebuild_id_index() {
  id_index_.clear();
  id_index_.reserve(ids_.size());
  for (NodeId u = 0; u < ids_.size(); ++u) id_index_.emplace(ids_[u], u);
}

void AttributedGraph::validate() const {
  const std::size_t n = node_count();
  if (attr_.size() != n || attr_present_.size() != n || ids_.size() != n) {
    throw NumericError("graph: per-node array size mismatch");
  }
  for (NodeId u = 0; u < n; ++u) {
    const auto nbrs = neighbors(u);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      const NodeId v = nbrs[i];
      if (v >= n) throw NumericError("graph: neighbor id out of range");
      if (v == u) throw NumericError("graph: self-loop");
      if (i > 0 && nbrs[i - 1] >= v) throw NumericError("graph: neighbor list not sorted unique");
      const auto back = neighbors(v);
      if (!std::binary_search(back.begin(), back.end(), u)) {
        throw NumericError("graph: adjacency not symmetric");
      }
    }
    if (attr_present_[u] &&
        !(attr_[u] >= -1.0 && attr_[u] <= 1.0)) {
      throw NumericError("graph: attribute outside [-1, +1]");
    }
  }
}

void AttributedGraph::save_snapshot(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open snapshot for writing: " + path.string());

  out.write(kMagic, 4);
  write_pod(out, kSnapshotVersion);
  const std::uint64_t n = node_count();
  const std::uint64_t m = edge_count();
  write_pod(out, n);
  write_pod(out, m);
  if (n > 0) {
    out.write(reinterpret_cast<const char*>(offsets_.data()),
              static_cast<std::streamsize>(offsets_.size() * sizeof(std::uint64_t)));
    out.write(reinterpret_cast<const char*>(adj_.data()),
              static_cast<std::streamsize>(adj_.size() * sizeof(NodeId)));
    std::vector<std::uint8_t> bitmap((n + 7) / 8, 0);
    for (std::uint64_t u = 0; u < n; ++u) {
      if (attr_present_[u]) bitmap[u >> 3] |= static_cast<std::uint8_t>(1u << (u & 7));
    }
    out.write(reinterpret_cast<const char*>(bitmap.data()),
              static_cast<std::streamsize>(bitmap.size()));
    out.write(reinterpret_cast<const char*>(attr_.data()),
              static_cast<std::streamsize>(attr_.size() * sizeof(double)));
    for (const auto& id : ids_) {
      const auto len = static_cast<std::uint32_t>(id.size());
      write_pod(out, len);
      out.write(id.data(), static_cast<std::streamsize>(id.size()));
    }
  }
  if (!out) throw IoError("short write while saving snapshot: " + path.string());
}

AttributedGraph AttributedGraph::load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open snapshot: " + path.string());

  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw IoError("not a PDXG snapshot: " + path.string());
  }
  std::uint32_t version = 0;
  read_pod(in, version);
  if (version != kSnapshotVersion) {
    throw IoError("unsupported snapshot version " + std::to_string(version));
  }
  std::uint64_t n = 0, m = 0;
  read_pod(in, n);
  read_pod(in, m);
  if (!in) throw IoError("truncated snapshot header: " + path.string());

  AttributedGraph g;
  if (n == 0) return g;
  if (n > std::numeric_limits<NodeId>::max()) throw IoError("snapshot too large");

  g.offsets_.resize(n + 1);
  in.read(reinterpret_cast<char*>(g.offsets_.data()),
          static_cast<std::streamsize>(g.offsets_.size() * sizeof(std::uint64_t)));
  g.adj_.resize(2 * m);
  in.read(reinterpret_cast<char*>(g.adj_.data()),
          static_cast<std::streamsize>(g.adj_.size() * sizeof(NodeId)));
  std::vector<std::uint8_t> bitmap((n + 7) / 8);
  in.read(reinterpret_cast<char*>(bitmap.data()), static_cast<std::streamsize>(bitmap.size()));
  g.attr_.resize(n);
  in.read(reinterpret_cast<char*>(g.attr_.data()),
          static_cast<std::streamsize>(g.attr_.size() * sizeof(double)));
  g.attr_present_.resize(n);
  g.attributed_count_ = 0;
  for (std::uint64_t u = 0; u < n; ++u) {
    g.attr_present_[u] = (bitmap[u >> 3] >> (u & 7)) & 1u;
    g.attributed_count_ += g.attr_present_[u];
  }
  g.ids_.resize(n);
  for (std::uint64_t u = 0; u < n; ++u) {
    std::uint32_t len = 0;
    read_pod(in, len);
    g.ids_[u].resize(len);
    in.read(g.ids_[u].data(), len);
  }
  if (!in) throw IoError("truncated snapshot body: " + path.string());

  // structural sanity before accepting the data
  if (g.offsets_[0] != 0 || g.offsets_[n] != 2 * m) throw IoError("snapshot: bad CSR offsets");
  for (std::uint64_t u = 0; u < n; ++u) {
    if (g.offsets_[u] > g.offsets_[u + 1]) throw IoError("snapshot: offsets not monotone");
  }
  g.rebuild_id_index();
  return g;
}

AttributedGraph AttributedGraph::from_undirected_edges(
    std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges,
    std::vector<std::string> ids) {
  std::vector<std::uint64_t> packed;
  packed.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    if (a >= n || b >= n) throw ConfigError("from_undirected_edges: node id out of range");
    if (a == b) continue;
    packed.push_back(pack_pair(a, b));
  }
  std::sort(packed.begin(), packed.end());
  packed.erase(std::unique(packed.begin(), packed.end()), packed.end());

  AttributedGraph g;
  g.offsets_.assign(n + 1, 0);
  for (const std::uint64_t p : packed) {
    ++g.offsets_[(p >> 32) + 1];
    ++g.offsets_[(p & 0xFFFFFFFFu) + 1];
  }
  for (std::size_t u = 0; u < n; ++u) g.offsets_[u + 1] += g.offsets_[u];
  g.adj_.resize(2 * packed.size());
  std::vector<std::uint64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const std::uint64_t p : packed) {
    const auto a = static_cast<NodeId>(p >> 32);
    const auto b = static_cast<NodeId>(p & 0xFFFFFFFFu);
    g.adj_[cursor[a]++] = b;
    g.adj_[cursor[b]++] = a;
  }
  for (std::size_t u = 0; u < n; ++u) {
    std::sort(g.adj_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[u]),
              g.adj_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[u + 1]));
  }

  g.attr_.assign(n, 0.0);
  g.attr_present_.assign(n, 0);
  if (ids.empty()) {
    g.ids_.reserve(n);
    for (std::size_t u = 0; u < n; ++u) g.ids_.push_back(std::to_string(u));
  } else {
    if (ids.size() != n) throw ConfigError("from_undirected_edges: ids size mismatch");
    g.ids_ = std::move(ids);
  }
  g.rebuild_id_index();
  return g;
}

// ---------------------------------------------------------------------------
// GraphBuilder

NodeId GraphBuilder::intern(std::string_view id) {
  const auto it = index_.find(id);
  if (it != index_.end()) return it->second;
  const auto nid = static_cast<NodeId>(ids_.size());
  if (ids_.size() >= std::numeric_limits<NodeId>::max()) {
    throw IoError("graph builder: too many distinct node ids");
  }
  ids_.emplace_back(id);
  declared_.push_back(0);
  index_.emplace(ids_.back(), nid);
  return nid;
}

void GraphBuilder::add_edge(std::string_view from, std::string_view to) {
  if (from == to) {
    ++stats_.self_edges;
    return;
  }
  ++stats_.directed_edges;
  const NodeId a = intern(from);
  const NodeId b = intern(to);
  const std::uint64_t key = pack_pair(a, b);
  const std::uint8_t bit = a < b ? 1 : 2;
  auto [it, inserted] = pairs_.try_emplace(key, std::uint8_t{0});
  if (inserted) pair_order_.push_back(key);
  if (it->second & bit) {
    ++stats_.duplicate_edges;
  } else {
    it->second |= bit;
  }
}

void GraphBuilder::declare_node(std::string_view id) { declared_[intern(id)] = 1; }

AttributedGraph GraphBuilder::finalize(BuildMode mode, BuildStats* stats) {
  // surviving pairs, in first-seen order
  std::vector<std::uint64_t> surviving;
  surviving.reserve(pair_order_.size());
  for (const std::uint64_t key : pair_order_) {
    const std::uint8_t mask = pairs_.at(key);
    const bool keep = mode == BuildMode::kSymmetrize ? mask != 0 : mask == 3;
    if (keep) {
      surviving.push_back(key);
    } else {
      ++stats_.one_way_dropped;
    }
  }
  stats_.undirected_edges = surviving.size();

  // nodes used by surviving edges, plus declared nodes; compact in builder
  // (first-appearance) order
  std::vector<std::uint8_t> used(ids_.size(), 0);
  for (const std::uint64_t key : surviving) {
    used[key >> 32] = 1;
    used[key & 0xFFFFFFFFu] = 1;
  }
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (declared_[i]) used[i] = 1;
  }
  std::vector<NodeId> remap(ids_.size(), 0);
  std::vector<std::string> kept_ids;
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (used[i]) {
      remap[i] = static_cast<NodeId>(kept_ids.size());
      kept_ids.push_back(std::move(ids_[i]));
    }
  }

  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(surviving.size());
  for (const std::uint64_t key : surviving) {
    edges.emplace_back(remap[key >> 32], remap[key & 0xFFFFFFFFu]);
  }
  if (stats) *stats = stats_;
  return AttributedGraph::from_undirected_edges(kept_ids.size(), edges, std::move(kept_ids));
}

AttributedGraph build_undirected(std::span<const std::pair<std::string, std::string>> edges,
                                 BuildMode mode, BuildStats* stats) {
  GraphBuilder builder;
  for (const auto& [from, to] : edges) builder.add_edge(from, to);
  return builder.finalize(mode, stats);
}

// ---------------------------------------------------------------------------
// Derived graphs

AttributedGraph induce_subgraph(const AttributedGraph& g, std::span<const std::uint8_t> keep) {
  const std::size_t n = g.node_count();
  std::vector<NodeId> remap(n, 0);
  std::vector<std::string> ids;
  std::size_t kept = 0;
  for (NodeId u = 0; u < n; ++u) {
    if (keep[u]) {
      remap[u] = static_cast<NodeId>(kept++);
      ids.push_back(g.ids_[u]);
    }
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < n; ++u) {
    if (!keep[u]) continue;
    for (const NodeId v : g.neighbors(u)) {
      if (v > u && keep[v]) edges.emplace_back(remap[u], remap[v]);
    }
  }
  AttributedGraph out = AttributedGraph::from_undirected_edges(kept, edges, std::move(ids));
  for (NodeId u = 0; u < n; ++u) {
    if (keep[u] && g.attr_present_[u]) {
      out.attr_[remap[u]] = g.attr_[u];
      out.attr_present_[remap[u]] = 1;
      ++out.attributed_count_;
    }
  }
  return out;
}

AttributedGraph replace_attributes(const AttributedGraph& g, std::span<const double> values,
                                   std::span<const std::uint8_t> present) {
  const std::size_t n = g.node_count();
  if (values.size() != n || present.size() != n) {
    throw ConfigError("replace_attributes: array size mismatch");
  }
  AttributedGraph out = g;
  out.attributed_count_ = 0;
  for (NodeId u = 0; u < n; ++u) {
    out.attr_present_[u] = present[u] ? 1 : 0;
    out.attr_[u] = present[u] ? values[u] : 0.0;
    if (present[u]) {
      if (!(values[u] >= -1.0 && values[u] <= 1.0)) {
        throw ConfigError("replace_attributes: attribute outside [-1, +1]");
      }
      ++out.attributed_count_;
    }
  }
  return out;
}

AttributedGraph filter_min_degree(const AttributedGraph& g, std::size_t k, bool iterate) {
  if (k == 0) return g;
  const std::size_t n = g.node_count();
  std::vector<std::uint8_t> keep(n, 1);
  for (NodeId u = 0; u < n; ++u) keep[u] = g.degree(u) >= k;

  if (iterate) {
    // peel to the k-core: recompute degrees against surviving nodes only
    bool changed = true;
    while (changed) {
      changed = false;
      for (NodeId u = 0; u < n; ++u) {
        if (!keep[u]) continue;
        std::size_t d = 0;
        for (const NodeId v : g.neighbors(u)) d += keep[v];
        if (d < k) {
          keep[u] = 0;
          changed = true;
        }
      }
    }
  }
  return induce_subgraph(g, keep);
}

}  // namespace paradoxlab
