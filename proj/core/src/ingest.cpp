#include "paradoxlab/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>

#include "paradoxlab/errors.hpp"

namespace paradoxlab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

ParseStats stream_edge_list(const std::filesystem::path& path,
                            const std::function<void(std::string_view, std::string_view)>& sink) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open edge list: " + path.string());

  ParseStats stats;
  std::string line;
  while (std::getline(in, line)) {
    ++stats.lines_read;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      ++stats.comments;
      continue;
    }
    // two whitespace-separated tokens
    const std::size_t sep = view.find_first_of(" \t");
    if (sep == std::string_view::npos) {
      ++stats.malformed;
      continue;
    }
    const std::string_view from = view.substr(0, sep);
    std::string_view rest = trim(view.substr(sep));
    if (rest.empty() || rest.find_first_of(" \t") != std::string_view::npos) {
      ++stats.malformed;
      continue;
    }
    if (from == rest) {
      ++stats.self_edges;
      continue;
    }
    ++stats.edges;
    sink(from, rest);
  }
  if (in.bad()) throw IoError("read error on edge list: " + path.string());
  return stats;
}

std::vector<std::pair<std::string, std::string>> read_edge_list(const std::filesystem::path& path,
                                                                ParseStats* stats) {
  std::vector<std::pair<std::string, std::string>> edges;
  const ParseStats s = stream_edge_list(
      path, [&](std::string_view a, std::string_view b) { edges.emplace_back(a, b); });
  if (stats) *stats = s;
  return edges;
}

AttributeTable read_attributes_csv(const std::filesystem::path& path, AttributeStats* stats) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open attribute CSV: " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw IoError("empty attribute CSV: " + path.string());
  if (trim(line) != "node,value") {
    throw IoError("attribute CSV must start with header \"node,value\": " + path.string());
  }

  AttributeTable table;
  AttributeStats local;
  while (std::getline(in, line)) {
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    ++local.rows_read;
    const std::size_t comma = view.find(',');
    if (comma == std::string_view::npos) {
      ++local.rejected;
      continue;
    }
    const std::string node{trim(view.substr(0, comma))};
    const std::string_view value_str = trim(view.substr(comma + 1));
    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(value_str.data(), value_str.data() + value_str.size(), value);
    if (ec != std::errc{} || ptr != value_str.data() + value_str.size() || node.empty() ||
        !std::isfinite(value) || value < -1.0 || value > 1.0) {
      ++local.rejected;
      continue;
    }
    if (table.find(node) != nullptr) ++local.duplicates;
    table.set(node, value);
  }
  if (in.bad()) throw IoError("read error on attribute CSV: " + path.string());
  if (stats) *stats = local;
  if (table.size() == 0) throw IoError("attribute CSV has zero valid rows: " + path.string());
  return table;
}

AttributedGraph attach_attributes(const AttributedGraph& g, const AttributeTable& table,
                                  AttachStats* stats) {
  const std::size_t n = g.node_count();
  std::vector<double> values(n, 0.0);
  std::vector<std::uint8_t> present(n, 0);
  AttachStats local;
  for (NodeId u = 0; u < n; ++u) {
    if (const double* v = table.find(g.original_id(u))) {
      values[u] = *v;
      present[u] = 1;
      ++local.matched;
    } else {
      ++local.nodes_without;
    }
  }
  local.unmatched_rows = table.size() - local.matched;
  if (stats) *stats = local;
  return replace_attributes(g, values, present);
}

// ---------------------------------------------------------------------------
// Lexicon

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon: " + path.string());

  Lexicon lex;
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    if (lineno == 1 && view == "term,polarity") continue;  // optional header
    const std::size_t comma = view.find(',');
    if (comma == std::string_view::npos) {
      throw IoError("lexicon line " + std::to_string(lineno) + ": expected \"term,polarity\"");
    }
    const std::string term = to_lower(trim(view.substr(0, comma)));
    const std::string_view polarity = trim(view.substr(comma + 1));
    if (term.empty()) {
      throw IoError("lexicon line " + std::to_string(lineno) + ": empty term");
    }
    if (polarity == "pos") {
      if (lex.negative.contains(term)) {
        throw IoError("lexicon term in both polarities: " + term);
      }
      lex.positive.insert(term);
    } else if (polarity == "neg") {
      if (lex.positive.contains(term)) {
        throw IoError("lexicon term in both polarities: " + term);
      }
      lex.negative.insert(term);
    } else {
      throw IoError("lexicon line " + std::to_string(lineno) + ": polarity must be pos or neg");
    }
  }
  if (in.bad()) throw IoError("read error on lexicon: " + path.string());
  return lex;
}

std::vector<std::string> tokenize_lower(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) tokens.push_back(to_lower(text.substr(i, j - i)));
    i = j;
  }
  return tokens;
}

double lexicon_swb_score(std::span<const std::vector<std::string>> documents,
                         const Lexicon& lex) {
  if (documents.empty()) throw ConfigError("lexicon_swb_score: no documents");
  double total = 0.0;
  for (const auto& doc : documents) {
    std::uint64_t pos = 0, neg = 0;
    for (const auto& token : doc) {
      if (lex.positive.contains(token)) {
        ++pos;
      } else if (lex.negative.contains(token)) {
        ++neg;
      }
    }
    if (pos + neg > 0) {
      total += (static_cast<double>(pos) - static_cast<double>(neg)) /
               static_cast<double>(pos + neg);
    }
  }
  return total / static_cast<double>(documents.size());
}

}  // namespace paradoxlab
