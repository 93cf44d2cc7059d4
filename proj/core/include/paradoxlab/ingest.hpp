#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "paradoxlab/graph.hpp"

namespace paradoxlab {

struct ParseStats {
  std::uint64_t lines_read = 0;
  std::uint64_t comments = 0;
  std::uint64_t malformed = 0;   // skipped, counted
  std::uint64_t self_edges = 0;  // skipped, counted
  std::uint64_t edges = 0;       // pairs delivered
};

/// Streams "from to" pairs from a whitespace-separated edge-list file into
/// `sink`. Lines starting with '#' are comments; malformed lines and
/// self-edges are skipped and counted. Throws IoError if the file cannot be
/// read.
ParseStats stream_edge_list(const std::filesystem::path& path,
                            const std::function<void(std::string_view, std::string_view)>& sink);

/// Materialized variant of stream_edge_list.
std::vector<std::pair<std::string, std::string>> read_edge_list(const std::filesystem::path& path,
                                                                ParseStats* stats = nullptr);

struct AttributeStats {
  std::uint64_t rows_read = 0;
  std::uint64_t rejected = 0;    // non-finite or outside [-1, +1]
  std::uint64_t duplicates = 0;  // repeated node id, last value wins
};

/// Per-node attribute values keyed by original node id.
class AttributeTable {
 public:
  void set(std::string node, double value) {
    auto [it, inserted] = values_.try_emplace(std::move(node), value);
    if (!inserted) it->second = value;
  }
  const double* find(const std::string& node) const {
    const auto it = values_.find(node);
    return it == values_.end() ? nullptr : &it->second;
  }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  std::unordered_map<std::string, double> values_;
};

/// Reads "node,value" CSV (header required). Values must be finite and in
/// [-1, +1]; offending rows are rejected and counted. Duplicated node ids:
/// last row wins. Zero valid rows is fatal (IoError).
AttributeTable read_attributes_csv(const std::filesystem::path& path,
                                   AttributeStats* stats = nullptr);

/// New graph with attributes set from the table, matched by original id.
AttributedGraph attach_attributes(const AttributedGraph& g, const AttributeTable& table,
                                  AttachStats* stats = nullptr);

/// New graph with the given dense-indexed attribute arrays.
AttributedGraph replace_attributes(const AttributedGraph& g, std::span<const double> values,
                                   std::span<const std::uint8_t> present);

// ---------------------------------------------------------------------------
// Lexicon scoring (deliberately simple attribute stand-in)

struct Lexicon {
  std::unordered_set<std::string> positive;
  std::unordered_set<std::string> negative;
};

/// Loads "term,polarity" CSV with polarity in {pos, neg}. Terms are
/// lowercased and deduplicated; a term in both sets is an error.
Lexicon load_lexicon(const std::filesystem::path& path);

/// Lowercased whitespace tokens.
std::vector<std::string> tokenize_lower(std::string_view text);

/// Per-document score (p - n) / (p + n) over lexicon hits, 0 for documents
/// without hits; returns the unweighted mean over documents. Throws
/// ConfigError on an empty document list. Always in [-1, +1].
double lexicon_swb_score(std::span<const std::vector<std::string>> documents, const Lexicon& lex);

}  // namespace paradoxlab
