#include "commands.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "paradoxlab/errors.hpp"
#include "paradoxlab/gmm.hpp"
#include "paradoxlab/graph.hpp"
#include "paradoxlab/group_analysis.hpp"
#include "paradoxlab/ingest.hpp"
#include "paradoxlab/paradox.hpp"
#include "paradoxlab/parallel.hpp"
#include "paradoxlab/report.hpp"
#include "paradoxlab/resample.hpp"
#include "paradoxlab/stats.hpp"
#include "paradoxlab/synth.hpp"
#include "paradoxlab/version.hpp"

namespace paradoxlab::cli {

namespace {

using nlohmann::ordered_json;

struct IngestOpts {
  std::string edges;
  std::string attributes;
  std::string snapshot;
  std::string mode = "reciprocal";
  std::size_t min_degree = 15;
  bool iterate_core = false;
};

struct OutputOpts {
  std::string out;            // empty = stdout
  std::string format = "json";
};

struct SeedOpts {
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::size_t workers = 0;  // 0 = auto; PARADOXLAB_WORKERS overrides either way
};

void add_ingest_flags(CLI::App* cmd, IngestOpts& opts, bool allow_snapshot = true) {
  cmd->add_option("--edges", opts.edges, "Edge-list file (one directed edge per line)");
  cmd->add_option("--attributes", opts.attributes, "Attribute CSV (node,value)");
  if (allow_snapshot) {
    cmd->add_option("--snapshot", opts.snapshot, "PDXG snapshot produced by `ingest`");
  }
  cmd->add_option("--mode", opts.mode, "Edge interpretation: reciprocal | symmetrize")
      ->check(CLI::IsMember({"reciprocal", "symmetrize"}));
  cmd->add_option("--min-degree", opts.min_degree, "Drop nodes with fewer neighbors (default 15)");
  cmd->add_flag("--iterate-core", opts.iterate_core,
                "Repeat the degree filter to the fixed point (k-core)");
}

void add_output_flags(CLI::App* cmd, OutputOpts& opts) {
  cmd->add_option("--out", opts.out, "Report file (default: stdout)");
  cmd->add_option("--format", opts.format, "Report format: json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
}

void add_seed_flags(CLI::App* cmd, SeedOpts& opts) {
  cmd->add_option_function<std::uint64_t>(
         "--seed",
         [&opts](std::uint64_t v) {
           opts.seed = v;
           opts.seed_given = true;
         },
         "Master seed (generated and printed when omitted)");
  cmd->add_option("--workers", opts.workers, "Worker threads (0 = hardware)");
}

std::uint64_t resolve_seed(SeedOpts& opts) {
  if (!opts.seed_given) {
    std::random_device rd;
    opts.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    std::cerr << "seed: " << opts.seed << "\n";
  }
  return opts.seed;
}

ordered_json ingest_config_json(const IngestOpts& opts) {
  ordered_json j;
  j["edges"] = opts.edges;
  j["attributes"] = opts.attributes;
  j["snapshot"] = opts.snapshot;
  j["mode"] = opts.mode;
  j["min_degree"] = opts.min_degree;
  j["iterate_core"] = opts.iterate_core;
  return j;
}

struct LoadedGraph {
  AttributedGraph graph;
  ordered_json info;
};

LoadedGraph load_graph(const IngestOpts& opts) {
  LoadedGraph out;
  if (!opts.snapshot.empty()) {
    out.graph = AttributedGraph::load_snapshot(opts.snapshot);
    out.info["snapshot"] = opts.snapshot;
  } else {
    if (opts.edges.empty()) {
      throw ConfigError("either --edges or --snapshot is required");
    }
    GraphBuilder builder;
    const ParseStats parse = stream_edge_list(
        opts.edges, [&](std::string_view a, std::string_view b) { builder.add_edge(a, b); });
    BuildStats build;
    out.graph = builder.finalize(
        opts.mode == "symmetrize" ? BuildMode::kSymmetrize : BuildMode::kReciprocalOnly, &build);
    out.info["parse"] = {{"lines_read", parse.lines_read},
                         {"comments", parse.comments},
                         {"malformed", parse.malformed},
                         {"self_edges", parse.self_edges}};
    out.info["build"] = {{"directed_edges", build.directed_edges},
                         {"duplicate_edges", build.duplicate_edges},
                         {"one_way_dropped", build.one_way_dropped},
                         {"undirected_edges", build.undirected_edges}};
  }

  const std::size_t nodes_before = out.graph.node_count();
  out.graph = filter_min_degree(out.graph, opts.min_degree, opts.iterate_core);
  out.info["filter"] = {{"min_degree", opts.min_degree},
                        {"iterate", opts.iterate_core},
                        {"nodes_before", nodes_before},
                        {"nodes_after", out.graph.node_count()}};

  if (!opts.attributes.empty()) {
    AttributeStats astats;
    const AttributeTable table = read_attributes_csv(opts.attributes, &astats);
    AttachStats attach;
    out.graph = attach_attributes(out.graph, table, &attach);
    out.info["attributes"] = {{"rows_read", astats.rows_read},
                              {"rejected", astats.rejected},
                              {"duplicates", astats.duplicates},
                              {"matched", attach.matched},
                              {"unmatched_rows", attach.unmatched_rows},
                              {"nodes_without", attach.nodes_without}};
  }
  out.info["nodes"] = out.graph.node_count();
  out.info["edges"] = out.graph.edge_count();
  out.info["attributed_nodes"] = out.graph.attributed_count();
  return out;
}

ordered_json report_header(const std::string& subcommand, std::uint64_t seed,
                           ordered_json config) {
  ordered_json doc;
  doc["tool"] = kToolName;
  doc["version"] = kVersion;
  doc["subcommand"] = subcommand;
  doc["seed"] = seed;
  doc["config"] = std::move(config);
  return doc;
}

void emit_report(const ordered_json& doc, const std::vector<MetricRow>& rows,
                 const OutputOpts& opts) {
  if (opts.format == "csv") {
    const std::string csv = metrics_to_csv(rows);
    if (opts.out.empty()) {
      std::cout << csv;
    } else {
      write_text_file(opts.out, csv);
    }
    return;
  }
  const std::string text = doc.dump(2) + "\n";
  if (opts.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(opts.out, text);
  }
}

std::optional<std::pair<double, double>> parse_percentiles(const std::string& str) {
  if (str.empty()) return std::nullopt;
  const auto comma = str.find(',');
  if (comma == std::string::npos) {
    throw ConfigError("--percentiles expects LO,HI (e.g. 5,95)");
  }
  try {
    const double lo = std::stod(str.substr(0, comma));
    const double hi = std::stod(str.substr(comma + 1));
    return std::make_pair(lo, hi);
  } catch (const std::exception&) {
    throw ConfigError("--percentiles expects numeric LO,HI");
  }
}

ordered_json ci_json(const ConfidenceInterval& ci) {
  return ordered_json{{"lo", ci.lo}, {"hi", ci.hi}, {"level", ci.level}, {"method", ci.method}};
}

ConfidenceInterval make_interval(const ResampleDistribution& dist, double level,
                                 const std::optional<std::pair<double, double>>& compat) {
  if (compat) return percentile_ci_at(dist, compat->first, compat->second);
  return percentile_ci(dist, level);
}

// ---------------------------------------------------------------------------
// analyze

int cmd_analyze(const IngestOpts& ingest, const OutputOpts& output, SeedOpts& seeds,
                double sample_frac, std::size_t bootstrap_reps, std::size_t null_reps,
                const std::string& null_mode, double ci_level, const std::string& percentiles) {
  const std::uint64_t seed = resolve_seed(seeds);
  const auto compat = parse_percentiles(percentiles);

  ordered_json config = ingest_config_json(ingest);
  config["sample_frac"] = sample_frac;
  config["bootstrap_reps"] = bootstrap_reps;
  config["null_reps"] = null_reps;
  config["null_mode"] = null_mode;
  config["ci_level"] = ci_level;
  config["percentiles"] =
      compat ? ordered_json::array({compat->first, compat->second}) : ordered_json(nullptr);
  config["workers"] = seeds.workers;

  LoadedGraph loaded = load_graph(ingest);
  const AttributedGraph& g = loaded.graph;

  ordered_json doc = report_header("analyze", seed, config);
  doc["ingest"] = loaded.info;
  std::vector<MetricRow> rows;

  BootstrapOptions boot;
  boot.sample_frac = sample_frac;
  boot.replicates = bootstrap_reps;
  boot.seed = seed;
  boot.workers = seeds.workers;

  auto paradox_section = [&](Statistic stat, const FractionResult& fr) {
    ParadoxReport report;
    report.value = fr.value;
    report.eligible = fr.eligible;
    report.excluded = fr.excluded;
    if (bootstrap_reps > 0) {
      const auto dist = bootstrap(g, stat, boot);
      report.ci = make_interval(dist, ci_level, compat);
      report.replicates = dist.replicates;
      report.missing_replicates = dist.missing();
    }
    ordered_json j;
    j["value"] = report.value;
    j["ci_lo"] = report.ci ? ordered_json(report.ci->lo) : nullptr;
    j["ci_hi"] = report.ci ? ordered_json(report.ci->hi) : nullptr;
    j["eligible"] = report.eligible;
    j["excluded"] = report.excluded;
    j["replicates"] = report.replicates;
    j["missing_replicates"] = report.missing_replicates;
    return std::make_pair(j, report);
  };

  ordered_json metrics;

  const FractionResult degree = paradox_fraction_degree(g);
  auto [degree_json, degree_report] = paradox_section(Statistic::kDegreeParadoxFraction, degree);
  metrics["degree_paradox"] = degree_json;
  rows.push_back(to_metric_row("degree_paradox", degree_report));

  const bool has_attrs = g.attributed_count() > 0;
  if (has_attrs) {
    const FractionResult attr = paradox_fraction_attribute(g);
    auto [attr_json, attr_report] = paradox_section(Statistic::kAttributeParadoxFraction, attr);
    metrics["attribute_paradox"] = attr_json;
    rows.push_back(to_metric_row("attribute_paradox", attr_report));

    const CorrelationResult corr = correlate_degree_attribute(g);
    ordered_json pearson_json;
    pearson_json["value"] = corr.pearson_r;
    MetricRow pearson_row{"pearson_log_degree_attribute", corr.pearson_r, {}, {}, corr.n};
    if (bootstrap_reps > 0) {
      const auto dist = bootstrap(g, Statistic::kPearsonLogDegreeAttribute, boot);
      const auto ci = make_interval(dist, ci_level, compat);
      pearson_json["ci_lo"] = ci.lo;
      pearson_json["ci_hi"] = ci.hi;
      pearson_json["missing_replicates"] = dist.missing();
      pearson_row.ci_lo = ci.lo;
      pearson_row.ci_hi = ci.hi;
    } else {
      pearson_json["ci_lo"] = nullptr;
      pearson_json["ci_hi"] = nullptr;
    }
    pearson_json["n"] = corr.n;
    pearson_json["replicates"] = bootstrap_reps;
    metrics["pearson_log_degree_attribute"] = pearson_json;
    rows.push_back(pearson_row);

    metrics["spearman_degree_attribute"] = {{"value", corr.spearman_rho}, {"n", corr.n}};
    rows.push_back(MetricRow{"spearman_degree_attribute", corr.spearman_rho, {}, {}, corr.n});

    if (null_reps > 0) {
      NullModelOptions null_opts;
      null_opts.mode = null_mode == "resample" ? NullMode::kResample : NullMode::kPermute;
      null_opts.replicates = null_reps;
      null_opts.seed = seed;
      null_opts.workers = seeds.workers;
      const auto dist = null_model(g, null_opts);
      const auto ci = make_interval(dist, ci_level, compat);
      const double null_mean = dist.mean_valid();
      metrics["null_model"] = {{"mode", null_mode},
                               {"mean", null_mean},
                               {"ci_lo", ci.lo},
                               {"ci_hi", ci.hi},
                               {"replicates", null_reps},
                               {"missing_replicates", dist.missing()}};
      rows.push_back(MetricRow{"null_model_mean", null_mean, ci.lo, ci.hi, null_reps});
    }
  }

  doc["metrics"] = metrics;
  emit_report(doc, rows, output);
  return 0;
}

// ---------------------------------------------------------------------------
// gmm-groups

ordered_json group_report_json(const GroupReport& report) {
  ordered_json j;
  j["n"] = report.n;
  auto paradox = [](const ParadoxReport& p) {
    ordered_json pj;
    pj["value"] = p.value;
    pj["ci_lo"] = p.ci ? ordered_json(p.ci->lo) : nullptr;
    pj["ci_hi"] = p.ci ? ordered_json(p.ci->hi) : nullptr;
    pj["eligible"] = p.eligible;
    pj["excluded"] = p.excluded;
    pj["replicates"] = p.replicates;
    pj["missing_replicates"] = p.missing_replicates;
    return pj;
  };
  j["degree_paradox"] = paradox(report.degree_paradox);
  j["attribute_paradox"] = paradox(report.attribute_paradox);
  j["correlation"] = {{"pearson_r", report.correlation.pearson_r},
                      {"spearman_rho", report.correlation.spearman_rho},
                      {"n", report.correlation.n}};
  j["regression"] = {{"slope", report.regression.slope},
                     {"intercept", report.regression.intercept},
                     {"f_statistic", report.regression.f_statistic},
                     {"p_value", report.regression.p_value},
                     {"n", report.regression.n}};
  return j;
}

void append_group_rows(std::vector<MetricRow>& rows, const std::string& prefix,
                       const GroupReport& report) {
  rows.push_back(to_metric_row(prefix + "_degree_paradox", report.degree_paradox));
  rows.push_back(to_metric_row(prefix + "_attribute_paradox", report.attribute_paradox));
  rows.push_back(MetricRow{prefix + "_pearson_log_degree_attribute",
                           report.correlation.pearson_r, {}, {}, report.correlation.n});
  rows.push_back(MetricRow{prefix + "_regression_slope", report.regression.slope, {}, {},
                           report.regression.n});
  rows.push_back(MetricRow{prefix + "_regression_f", report.regression.f_statistic, {}, {},
                           report.regression.n});
}

int cmd_gmm_groups(const IngestOpts& ingest, const OutputOpts& output, SeedOpts& seeds,
                   double sample_frac, std::size_t bootstrap_reps, double ci_level,
                   const std::string& percentiles, double tol, std::size_t max_iter,
                   std::size_t restarts, double radius, const std::string& points_out,
                   bool induced) {
  const std::uint64_t seed = resolve_seed(seeds);
  const auto compat = parse_percentiles(percentiles);

  ordered_json config = ingest_config_json(ingest);
  config["sample_frac"] = sample_frac;
  config["bootstrap_reps"] = bootstrap_reps;
  config["ci_level"] = ci_level;
  config["percentiles"] =
      compat ? ordered_json::array({compat->first, compat->second}) : ordered_json(nullptr);
  config["gmm"] = {{"tol", tol}, {"max_iter", max_iter}, {"restarts", restarts},
                   {"radius", radius}};
  config["induced_subgraph"] = induced;
  config["points_out"] = points_out;
  config["workers"] = seeds.workers;

  LoadedGraph loaded = load_graph(ingest);
  const AttributedGraph& g = loaded.graph;

  const PlanePoints plane = build_plane_points(g);
  GmmOptions gmm_opts;
  gmm_opts.tol = tol;
  gmm_opts.max_iter = max_iter;
  gmm_opts.restarts = restarts;
  gmm_opts.seed = seed;
  gmm_opts.workers = seeds.workers;
  const GmmModel model = fit_gmm_em(plane.points, gmm_opts);

  const auto row_labels = demarcate(plane.points, model, radius);
  const auto node_labels = labels_by_node(g, plane, row_labels);

  if (!points_out.empty()) {
    std::string csv = "x,y,label\n";
    for (std::size_t i = 0; i < plane.points.size(); ++i) {
      csv += format_double(plane.points[i].x);
      csv += ',';
      csv += format_double(plane.points[i].y);
      csv += ',';
      csv += group_label_name(row_labels[i]);
      csv += '\n';
    }
    write_text_file(points_out, csv);
  }

  ordered_json doc = report_header("gmm-groups", seed, config);
  doc["ingest"] = loaded.info;
  doc["gmm"] = ordered_json::parse(gmm_to_json(model));

  GroupReportOptions group_opts;
  group_opts.sample_frac = sample_frac;
  group_opts.replicates = bootstrap_reps;
  group_opts.seed = seed;
  group_opts.workers = seeds.workers;
  group_opts.ci_level = ci_level;
  group_opts.compat_percentiles = compat;
  group_opts.induced_subgraph = induced;

  std::vector<MetricRow> rows;
  ordered_json groups;
  for (const GroupLabel group : {GroupLabel::kHappy, GroupLabel::kUnhappy}) {
    const std::string name = group_label_name(group);
    std::size_t count = 0;
    for (const auto label : node_labels) count += label == group;
    if (count < 10) {
      groups[name] = {{"n", count}, {"skipped", "fewer than 10 members"}};
      continue;
    }
    const GroupReport report = group_report(g, node_labels, group, group_opts);
    groups[name] = group_report_json(report);
    append_group_rows(rows, name, report);
  }
  std::size_t unassigned = 0;
  for (const auto label : node_labels) unassigned += label == GroupLabel::kUnassigned;
  groups["unassigned"] = {{"n", unassigned}};
  doc["groups"] = groups;

  emit_report(doc, rows, output);
  return 0;
}

// ---------------------------------------------------------------------------
// nullmodel / bootstrap

int cmd_nullmodel(const IngestOpts& ingest, const OutputOpts& output, SeedOpts& seeds,
                  std::size_t replicates, const std::string& mode, double ci_level,
                  const std::string& percentiles, const std::string& dump) {
  const std::uint64_t seed = resolve_seed(seeds);
  const auto compat = parse_percentiles(percentiles);

  ordered_json config = ingest_config_json(ingest);
  config["null_reps"] = replicates;
  config["null_mode"] = mode;
  config["ci_level"] = ci_level;
  config["percentiles"] =
      compat ? ordered_json::array({compat->first, compat->second}) : ordered_json(nullptr);
  config["dump"] = dump;
  config["workers"] = seeds.workers;

  LoadedGraph loaded = load_graph(ingest);

  NullModelOptions opts;
  opts.mode = mode == "resample" ? NullMode::kResample : NullMode::kPermute;
  opts.replicates = replicates;
  opts.seed = seed;
  opts.workers = seeds.workers;
  const auto dist = null_model(loaded.graph, opts);
  if (!dump.empty()) export_distribution_csv(dist, dump);

  const auto ci = make_interval(dist, ci_level, compat);
  const double null_mean = dist.mean_valid();

  ordered_json doc = report_header("nullmodel", seed, config);
  doc["ingest"] = loaded.info;
  doc["null_model"] = {{"mode", mode},
                       {"mean", null_mean},
                       {"ci_lo", ci.lo},
                       {"ci_hi", ci.hi},
                       {"replicates", replicates},
                       {"missing_replicates", dist.missing()}};

  std::vector<MetricRow> rows{MetricRow{"null_model_mean", null_mean, ci.lo, ci.hi, replicates}};
  emit_report(doc, rows, output);
  return 0;
}

int cmd_bootstrap(const IngestOpts& ingest, const OutputOpts& output, SeedOpts& seeds,
                  const std::string& statistic, double sample_frac, std::size_t replicates,
                  double ci_level, const std::string& percentiles, const std::string& dump) {
  const std::uint64_t seed = resolve_seed(seeds);
  const auto compat = parse_percentiles(percentiles);

  Statistic stat;
  if (statistic == "degree-paradox") {
    stat = Statistic::kDegreeParadoxFraction;
  } else if (statistic == "attribute-paradox") {
    stat = Statistic::kAttributeParadoxFraction;
  } else if (statistic == "pearson") {
    stat = Statistic::kPearsonLogDegreeAttribute;
  } else {
    throw ConfigError("unknown --statistic: " + statistic);
  }

  ordered_json config = ingest_config_json(ingest);
  config["statistic"] = statistic;
  config["sample_frac"] = sample_frac;
  config["bootstrap_reps"] = replicates;
  config["ci_level"] = ci_level;
  config["percentiles"] =
      compat ? ordered_json::array({compat->first, compat->second}) : ordered_json(nullptr);
  config["dump"] = dump;
  config["workers"] = seeds.workers;

  LoadedGraph loaded = load_graph(ingest);

  BootstrapOptions opts;
  opts.sample_frac = sample_frac;
  opts.replicates = replicates;
  opts.seed = seed;
  opts.workers = seeds.workers;
  const auto dist = bootstrap(loaded.graph, stat, opts);
  if (!dump.empty()) export_distribution_csv(dist, dump);

  const auto ci = make_interval(dist, ci_level, compat);
  const double boot_mean = dist.mean_valid();

  ordered_json doc = report_header("bootstrap", seed, config);
  doc["ingest"] = loaded.info;
  doc["bootstrap"] = {{"statistic", statistic},
                      {"mean", boot_mean},
                      {"ci_lo", ci.lo},
                      {"ci_hi", ci.hi},
                      {"replicates", replicates},
                      {"missing_replicates", dist.missing()}};

  std::vector<MetricRow> rows{
      MetricRow{"bootstrap_" + statistic, boot_mean, ci.lo, ci.hi, replicates}};
  emit_report(doc, rows, output);
  return 0;
}

// ---------------------------------------------------------------------------
// synth

int cmd_synth(SeedOpts& seeds, std::string out_prefix, bool paperlike, std::size_t n,
              const std::string& model, std::size_t pa_m, double gamma, std::size_t gen_min_deg,
              const std::string& attr, double mu1, double mu2, double sigma, double mix,
              double degree_corr, std::size_t homophily_rounds) {
  const std::uint64_t seed = resolve_seed(seeds);
  if (out_prefix.empty()) throw ConfigError("synth: --out-prefix is required");

  SynthSpec spec;
  if (paperlike) {
    spec = paperlike_spec(seed);
  } else {
    spec.n = n;
    if (model == "pa") {
      spec.degree_model = PreferentialAttachment{pa_m};
    } else if (model == "config") {
      spec.degree_model = ConfigurationModel{gamma, gen_min_deg};
    } else {
      throw ConfigError("synth: --model must be pa or config");
    }
    if (attr == "bimodal") {
      spec.attr_model = BimodalAttributes{mu1, mu2, sigma, mix};
    } else if (attr == "mono") {
      spec.attr_model = MonoAttributes{mu1, sigma};
    } else {
      throw ConfigError("synth: --attr must be bimodal or mono");
    }
    spec.degree_corr = degree_corr;
    spec.homophily_rounds = homophily_rounds;
    spec.seed = seed;
  }

  const AttributedGraph g = gen_attributed_graph(spec);

  // snapshot
  g.save_snapshot(out_prefix + ".pdxg");

  // directed edge list: both directions per undirected edge, so reciprocal
  // ingestion reproduces the graph
  {
    std::string text;
    for (NodeId u = 0; u < g.node_count(); ++u) {
      for (const NodeId v : g.neighbors(u)) {
        if (v <= u) continue;
        text += g.original_id(u);
        text += ' ';
        text += g.original_id(v);
        text += '\n';
        text += g.original_id(v);
        text += ' ';
        text += g.original_id(u);
        text += '\n';
      }
    }
    write_text_file(out_prefix + ".edges", text);
  }

  // attribute CSV
  {
    std::string csv = "node,value\n";
    for (NodeId u = 0; u < g.node_count(); ++u) {
      if (!g.has_attribute(u)) continue;
      csv += g.original_id(u);
      csv += ',';
      csv += format_double(g.attribute(u));
      csv += '\n';
    }
    write_text_file(out_prefix + ".attrs.csv", csv);
  }

  ordered_json summary;
  summary["tool"] = kToolName;
  summary["version"] = kVersion;
  summary["subcommand"] = "synth";
  summary["seed"] = seed;
  summary["paperlike"] = paperlike;
  summary["nodes"] = g.node_count();
  summary["edges"] = g.edge_count();
  summary["files"] = {out_prefix + ".pdxg", out_prefix + ".edges", out_prefix + ".attrs.csv"};
  std::cout << summary.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// score-text

int cmd_score_text(const std::string& lexicon_path, const std::string& input_path,
                   const std::string& out_path) {
  if (lexicon_path.empty() || input_path.empty() || out_path.empty()) {
    throw ConfigError("score-text: --lexicon, --input and --out are required");
  }
  const Lexicon lex = load_lexicon(lexicon_path);

  std::ifstream in(input_path);
  if (!in) throw IoError("cannot open document file: " + input_path);

  // user<TAB>document per line; users keep first-seen order
  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<std::vector<std::string>>> docs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw IoError("score-text: line without a tab separator: " + line.substr(0, 40));
    }
    std::string user = line.substr(0, tab);
    auto it = docs.find(user);
    if (it == docs.end()) {
      order.push_back(user);
      it = docs.emplace(std::move(user), std::vector<std::vector<std::string>>{}).first;
    }
    it->second.push_back(tokenize_lower(std::string_view(line).substr(tab + 1)));
  }
  if (in.bad()) throw IoError("read error on document file: " + input_path);
  if (order.empty()) throw IoError("score-text: no documents in " + input_path);

  std::string csv = "node,value\n";
  for (const std::string& user : order) {
    csv += user;
    csv += ',';
    csv += format_double(lexicon_swb_score(docs.at(user), lex));
    csv += '\n';
  }
  write_text_file(out_path, csv);
  return 0;
}

// ---------------------------------------------------------------------------
// ingest

int cmd_ingest(const IngestOpts& ingest, const std::string& out_path) {
  if (out_path.empty()) throw ConfigError("ingest: --out is required");
  if (ingest.edges.empty()) throw ConfigError("ingest: --edges is required");

  LoadedGraph loaded = load_graph(ingest);
  loaded.graph.save_snapshot(out_path);

  ordered_json doc;
  doc["tool"] = kToolName;
  doc["version"] = kVersion;
  doc["subcommand"] = "ingest";
  doc["config"] = ingest_config_json(ingest);
  doc["ingest"] = loaded.info;
  doc["snapshot"] = out_path;
  std::cout << doc.dump(2) << "\n";
  return 0;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"Friendship- and attribute-paradox statistics on attributed social graphs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);

  // analyze
  IngestOpts an_ingest;
  OutputOpts an_output;
  SeedOpts an_seeds;
  double an_sample_frac = 0.1, an_ci_level = 0.95;
  std::size_t an_boot = 5000, an_null = 20000;
  std::string an_null_mode = "permute", an_percentiles;
  auto* analyze = app.add_subcommand("analyze", "Paradox fractions, correlations, null model");
  add_ingest_flags(analyze, an_ingest);
  add_output_flags(analyze, an_output);
  add_seed_flags(analyze, an_seeds);
  analyze->add_option("--sample-frac", an_sample_frac, "Bootstrap subject fraction (default 0.1)");
  analyze->add_option("--bootstrap-reps", an_boot, "Bootstrap replicates (default 5000)");
  analyze->add_option("--null-reps", an_null, "Null-model replicates (default 20000, 0 = skip)");
  analyze->add_option("--null-mode", an_null_mode, "permute | resample")
      ->check(CLI::IsMember({"permute", "resample"}));
  analyze->add_option("--ci-level", an_ci_level, "Confidence level (default 0.95)");
  analyze->add_option("--percentiles", an_percentiles,
                      "Compatibility percentile pair, e.g. 5,95");

  // gmm-groups
  IngestOpts gg_ingest;
  OutputOpts gg_output;
  SeedOpts gg_seeds;
  double gg_sample_frac = 0.1, gg_ci_level = 0.95, gg_tol = 1e-7, gg_radius = 2.0;
  std::size_t gg_boot = 5000, gg_max_iter = 500, gg_restarts = 8;
  std::string gg_percentiles, gg_points_out;
  bool gg_induced = false;
  auto* gmm_groups =
      app.add_subcommand("gmm-groups", "Mixture demarcation and per-group paradox reports");
  add_ingest_flags(gmm_groups, gg_ingest);
  add_output_flags(gmm_groups, gg_output);
  add_seed_flags(gmm_groups, gg_seeds);
  gmm_groups->add_option("--sample-frac", gg_sample_frac,
                         "Bootstrap fraction of each group (default 0.1)");
  gmm_groups->add_option("--bootstrap-reps", gg_boot, "Bootstrap replicates (default 5000)");
  gmm_groups->add_option("--ci-level", gg_ci_level, "Confidence level (default 0.95)");
  gmm_groups->add_option("--percentiles", gg_percentiles, "Compatibility percentile pair");
  gmm_groups->add_option("--gmm-tol", gg_tol, "EM log-likelihood tolerance (default 1e-7)");
  gmm_groups->add_option("--gmm-max-iter", gg_max_iter, "EM iteration cap (default 500)");
  gmm_groups->add_option("--gmm-restarts", gg_restarts, "Random restarts (default 8)");
  gmm_groups->add_option("--radius", gg_radius, "Demarcation Mahalanobis radius (default 2)");
  gmm_groups->add_option("--points-out", gg_points_out, "Plane points CSV (x,y,label)");
  gmm_groups->add_flag("--group-induced", gg_induced,
                       "Re-induce each group's subgraph instead of full-graph neighborhoods");

  // nullmodel
  IngestOpts nm_ingest;
  OutputOpts nm_output;
  SeedOpts nm_seeds;
  std::size_t nm_reps = 20000;
  double nm_ci_level = 0.95;
  std::string nm_mode = "permute", nm_percentiles, nm_dump;
  auto* nullmodel = app.add_subcommand("nullmodel", "Attribute-reshuffling null distribution");
  add_ingest_flags(nullmodel, nm_ingest);
  add_output_flags(nullmodel, nm_output);
  add_seed_flags(nullmodel, nm_seeds);
  nullmodel->add_option("--replicates", nm_reps, "Replicates (default 20000)");
  nullmodel->add_option("--null-mode", nm_mode, "permute | resample")
      ->check(CLI::IsMember({"permute", "resample"}));
  nullmodel->add_option("--ci-level", nm_ci_level, "Confidence level (default 0.95)");
  nullmodel->add_option("--percentiles", nm_percentiles, "Compatibility percentile pair");
  nullmodel->add_option("--dump", nm_dump, "Write the replicate values as one-column CSV");

  // bootstrap
  IngestOpts bs_ingest;
  OutputOpts bs_output;
  SeedOpts bs_seeds;
  std::string bs_statistic = "degree-paradox", bs_percentiles, bs_dump;
  double bs_sample_frac = 0.1, bs_ci_level = 0.95;
  std::size_t bs_reps = 5000;
  auto* bootstrap_cmd = app.add_subcommand("bootstrap", "Bootstrap one statistic");
  add_ingest_flags(bootstrap_cmd, bs_ingest);
  add_output_flags(bootstrap_cmd, bs_output);
  add_seed_flags(bootstrap_cmd, bs_seeds);
  bootstrap_cmd
      ->add_option("--statistic", bs_statistic,
                   "degree-paradox | attribute-paradox | pearson")
      ->check(CLI::IsMember({"degree-paradox", "attribute-paradox", "pearson"}));
  bootstrap_cmd->add_option("--sample-frac", bs_sample_frac, "Subject fraction (default 0.1)");
  bootstrap_cmd->add_option("--replicates", bs_reps, "Replicates (default 5000)");
  bootstrap_cmd->add_option("--ci-level", bs_ci_level, "Confidence level (default 0.95)");
  bootstrap_cmd->add_option("--percentiles", bs_percentiles, "Compatibility percentile pair");
  bootstrap_cmd->add_option("--dump", bs_dump, "Write the replicate values as one-column CSV");

  // synth
  SeedOpts sy_seeds;
  std::string sy_prefix, sy_model = "pa", sy_attr = "bimodal";
  bool sy_paperlike = false;
  std::size_t sy_n = 1000, sy_m = 3, sy_min_deg = 1, sy_rounds = 0;
  double sy_gamma = 2.5, sy_mu1 = 0.2, sy_mu2 = 0.0, sy_sigma = 0.05, sy_mix = 0.5, sy_corr = 0.0;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic attributed network");
  add_seed_flags(synth, sy_seeds);
  synth->add_option("--out-prefix", sy_prefix, "Output prefix (.pdxg/.edges/.attrs.csv)")
      ->required();
  synth->add_flag("--paperlike", sy_paperlike, "Cohort-scale calibrated fixture");
  synth->add_option("--n", sy_n, "Node count");
  synth->add_option("--model", sy_model, "pa | config")->check(CLI::IsMember({"pa", "config"}));
  synth->add_option("--m", sy_m, "Attachments per node (pa)");
  synth->add_option("--gamma", sy_gamma, "Power-law exponent (config)");
  synth->add_option("--gen-min-degree", sy_min_deg, "Minimum degree (config)");
  synth->add_option("--attr", sy_attr, "bimodal | mono")
      ->check(CLI::IsMember({"bimodal", "mono"}));
  synth->add_option("--mu1", sy_mu1, "First mode mean (or mono mean)");
  synth->add_option("--mu2", sy_mu2, "Second mode mean");
  synth->add_option("--sigma", sy_sigma, "Mode standard deviation");
  synth->add_option("--mix", sy_mix, "First-mode probability");
  synth->add_option("--degree-corr", sy_corr, "Target Pearson(attribute, ln degree)");
  synth->add_option("--homophily-rounds", sy_rounds, "Attribute-swap passes");

  // score-text
  std::string st_lexicon, st_input, st_out;
  auto* score_text = app.add_subcommand("score-text", "Lexicon attribute scores from documents");
  score_text->add_option("--lexicon", st_lexicon, "term,polarity CSV")->required();
  score_text->add_option("--input", st_input, "user<TAB>document lines")->required();
  score_text->add_option("--out", st_out, "Attribute CSV output")->required();

  // ingest
  IngestOpts in_ingest;
  std::string in_out;
  auto* ingest_cmd = app.add_subcommand("ingest", "Build and snapshot a graph");
  add_ingest_flags(ingest_cmd, in_ingest, /*allow_snapshot=*/false);
  ingest_cmd->add_option("--out", in_out, "Snapshot output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    throw ConfigError(e.what());
  }

  if (analyze->parsed()) {
    return cmd_analyze(an_ingest, an_output, an_seeds, an_sample_frac, an_boot, an_null,
                       an_null_mode, an_ci_level, an_percentiles);
  }
  if (gmm_groups->parsed()) {
    return cmd_gmm_groups(gg_ingest, gg_output, gg_seeds, gg_sample_frac, gg_boot, gg_ci_level,
                          gg_percentiles, gg_tol, gg_max_iter, gg_restarts, gg_radius,
                          gg_points_out, gg_induced);
  }
  if (nullmodel->parsed()) {
    return cmd_nullmodel(nm_ingest, nm_output, nm_seeds, nm_reps, nm_mode, nm_ci_level,
                         nm_percentiles, nm_dump);
  }
  if (bootstrap_cmd->parsed()) {
    return cmd_bootstrap(bs_ingest, bs_output, bs_seeds, bs_statistic, bs_sample_frac, bs_reps,
                         bs_ci_level, bs_percentiles, bs_dump);
  }
  if (synth->parsed()) {
    return cmd_synth(sy_seeds, sy_prefix, sy_paperlike, sy_n, sy_model, sy_m, sy_gamma,
                     sy_min_deg, sy_attr, sy_mu1, sy_mu2, sy_sigma, sy_mix, sy_corr, sy_rounds);
  }
  if (score_text->parsed()) return cmd_score_text(st_lexicon, st_input, st_out);
  if (ingest_cmd->parsed()) return cmd_ingest(in_ingest, in_out);
  throw ConfigError("no subcommand given");
}

void emit_error(int code, const char* type, const std::string& message) {
  ordered_json err;
  err["error"] = {{"exit_code", code}, {"type", type}, {"message", message}};
  std::cerr << err.dump() << "\n";
}

}  // namespace

int run(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const IoError& e) {
    emit_error(1, "io", e.what());
    return 1;
  } catch (const ConfigError& e) {
    emit_error(2, "config", e.what());
    return 2;
  } catch (const NumericError& e) {
    emit_error(3, "numeric", e.what());
    return 3;
  } catch (const std::exception& e) {
    emit_error(1, "internal", e.what());
    return 1;
  }
}

}  // namespace paradoxlab::cli
