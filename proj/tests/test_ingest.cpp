#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "paradoxlab/errors.hpp"
#include "paradoxlab/ingest.hpp"
#include "paradoxlab/report.hpp"

using namespace paradoxlab;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
  const auto dir = std::filesystem::temp_directory_path() / "pdx_ingest_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_CASE("edge list reading") {
  SUBCASE("plain pairs") {
    const auto path = write_temp("pairs.txt", "1 2\n2 1\n");
    ParseStats stats;
    const auto edges = read_edge_list(path, &stats);
    REQUIRE(edges.size() == 2);
    CHECK(edges[0] == std::pair<std::string, std::string>{"1", "2"});
    CHECK(edges[1] == std::pair<std::string, std::string>{"2", "1"});
    CHECK(stats.edges == 2);
  }
  SUBCASE("comments are skipped") {
    const auto path = write_temp("comments.txt", "# header comment\n1 2\n");
    ParseStats stats;
    const auto edges = read_edge_list(path, &stats);
    CHECK(edges.size() == 1);
    CHECK(stats.comments == 1);
  }
  SUBCASE("self edges skipped and counted") {
    const auto path = write_temp("self.txt", "1 1\n");
    ParseStats stats;
    const auto edges = read_edge_list(path, &stats);
    CHECK(edges.empty());
    CHECK(stats.self_edges == 1);
  }
  SUBCASE("malformed lines counted, tabs accepted") {
    const auto path = write_temp("mixed.txt", "justone\na\tb\n1 2 3\n");
    ParseStats stats;
    const auto edges = read_edge_list(path, &stats);
    REQUIRE(edges.size() == 1);
    CHECK(edges[0] == std::pair<std::string, std::string>{"a", "b"});
    CHECK(stats.malformed == 2);
  }
  SUBCASE("missing file is fatal") {
    CHECK_THROWS_AS(read_edge_list("/nonexistent/edge.list"), IoError);
  }
}

TEST_CASE("attribute csv reading") {
  SUBCASE("basic row") {
    const auto path = write_temp("attrs.csv", "node,value\n7,0.25\n");
    const auto table = read_attributes_csv(path);
    REQUIRE(table.size() == 1);
    CHECK(*table.find("7") == 0.25);
  }
  SUBCASE("out-of-range value rejected; zero valid rows fatal") {
    const auto path = write_temp("bad.csv", "node,value\n7,1.5\n");
    AttributeStats stats;
    CHECK_THROWS_AS(read_attributes_csv(path, &stats), IoError);
  }
  SUBCASE("duplicate node: last wins, counted") {
    const auto path = write_temp("dup.csv", "node,value\n7,0.1\n7,0.3\n");
    AttributeStats stats;
    const auto table = read_attributes_csv(path, &stats);
    CHECK(*table.find("7") == 0.3);
    CHECK(stats.duplicates == 1);
  }
  SUBCASE("missing header is fatal") {
    const auto path = write_temp("noheader.csv", "7,0.25\n");
    CHECK_THROWS_AS(read_attributes_csv(path), IoError);
  }
  SUBCASE("non-finite rejected") {
    const auto path = write_temp("nan.csv", "node,value\n1,nan\n2,0.5\n");
    AttributeStats stats;
    const auto table = read_attributes_csv(path, &stats);
    CHECK(table.size() == 1);
    CHECK(stats.rejected == 1);
  }
}

TEST_CASE("lexicon loading and scoring") {
  const auto lex_path =
      write_temp("lex.csv", "term,polarity\ngood,pos\ngreat,pos\nbad,neg\nawful,neg\n");
  const Lexicon lex = load_lexicon(lex_path);
  CHECK(lex.positive.size() == 2);
  CHECK(lex.negative.size() == 2);

  SUBCASE("all-positive document scores +1") {
    const std::vector<std::vector<std::string>> docs{{"good", "great", "good"}};
    CHECK(lexicon_swb_score(docs, lex) == 1.0);
  }
  SUBCASE("3 positive 1 negative scores 0.5") {
    const std::vector<std::vector<std::string>> docs{{"good", "great", "good", "awful"}};
    CHECK(lexicon_swb_score(docs, lex) == doctest::Approx(0.5));
  }
  SUBCASE("no hits score 0") {
    const std::vector<std::vector<std::string>> docs{{"meh", "whatever"}};
    CHECK(lexicon_swb_score(docs, lex) == 0.0);
  }
  SUBCASE("mean over documents") {
    const std::vector<std::vector<std::string>> docs{{"good"}, {"bad"}, {"nothing"}};
    CHECK(lexicon_swb_score(docs, lex) == doctest::Approx(0.0));
  }
  SUBCASE("empty document list is an error") {
    CHECK_THROWS_AS(lexicon_swb_score({}, lex), ConfigError);
  }
  SUBCASE("term in both polarities is an error") {
    const auto dup = write_temp("duplex.csv", "term,polarity\nodd,pos\nodd,neg\n");
    CHECK_THROWS_AS(load_lexicon(dup), IoError);
  }
}

TEST_CASE("lexicon score stays in [-1,1] and negates under polarity swap") {
  Lexicon lex;
  lex.positive = {"alpha", "beta"};
  lex.negative = {"gamma", "delta"};
  Lexicon swapped;
  swapped.positive = lex.negative;
  swapped.negative = lex.positive;

  const std::vector<std::string> corpus{"alpha", "beta", "gamma", "delta", "noise"};
  std::uint64_t state = 42;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<std::string>> docs;
    const int ndocs = 1 + static_cast<int>(state % 4);
    for (int d = 0; d < ndocs; ++d) {
      std::vector<std::string> doc;
      const int len = 1 + static_cast<int>((state >> 3) % 6);
      for (int t = 0; t < len; ++t) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        doc.push_back(corpus[state % corpus.size()]);
      }
      docs.push_back(doc);
    }
    const double score = lexicon_swb_score(docs, lex);
    CHECK(score >= -1.0);
    CHECK(score <= 1.0);
    CHECK(lexicon_swb_score(docs, swapped) == doctest::Approx(-score).epsilon(1e-15));
  }
}

TEST_CASE("metric rows serialize to csv and json") {
  ParadoxReport report;
  report.value = 0.8;
  report.ci = ConfidenceInterval{0.7, 0.9, 0.95, "percentile"};
  report.replicates = 5000;

  const auto row = to_metric_row("paradox_fraction", report);
  std::vector<MetricRow> rows{row};
  const std::string csv = metrics_to_csv(rows);
  CHECK(csv == "name,value,ci_lo,ci_hi,n\nparadox_fraction,0.8,0.7,0.9,5000\n");

  const auto doc = nlohmann::json::parse(to_json(report));
  CHECK(doc["value"] == 0.8);
  CHECK(doc["ci_lo"] == 0.7);
  CHECK(doc["ci_hi"] == 0.9);
  CHECK(doc["replicates"] == 5000);

  SUBCASE("empty report -> header-only csv") {
    CHECK(metrics_to_csv({}) == "name,value,ci_lo,ci_hi,n\n");
  }
}

TEST_CASE("json round trip preserves full precision") {
  ParadoxReport report;
  report.value = 0.5851234567890123;
  report.ci = ConfidenceInterval{1.0 / 3.0, 2.0 / 3.0, 0.95, "percentile"};
  report.replicates = 20000;
  const auto doc = nlohmann::json::parse(to_json(report));
  CHECK(doc["value"].get<double>() == report.value);
  CHECK(doc["ci_lo"].get<double>() == report.ci->lo);
  CHECK(doc["ci_hi"].get<double>() == report.ci->hi);
}
