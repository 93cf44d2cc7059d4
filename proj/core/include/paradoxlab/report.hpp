#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "paradoxlab/resample.hpp"

namespace paradoxlab {

/// Paradox fraction together with its bootstrap interval.
struct ParadoxReport {
  double value = 0.0;
  std::size_t eligible = 0;
  std::size_t excluded = 0;
  std::optional<ConfidenceInterval> ci;
  std::size_t replicates = 0;
  std::size_t missing_replicates = 0;
};

/// One metric per CSV row: name,value,ci_lo,ci_hi,n.
struct MetricRow {
  std::string name;
  double value = 0.0;
  std::optional<double> ci_lo;
  std::optional<double> ci_hi;
  std::optional<std::uint64_t> n;
};

enum class ReportFormat { kJson, kCsv };

/// Shortest decimal representation that round-trips the exact double.
std::string format_double(double v);

MetricRow to_metric_row(std::string name, const ParadoxReport& report);

/// {"value": ..., "ci_lo": ..., "ci_hi": ..., "replicates": ...}
std::string to_json(const ParadoxReport& report);

/// Header "name,value,ci_lo,ci_hi,n"; absent fields stay empty.
std::string metrics_to_csv(std::span<const MetricRow> rows);

/// JSON: ordered object keyed by metric name; CSV: metrics_to_csv.
void write_report(std::span<const MetricRow> rows, const std::filesystem::path& path,
                  ReportFormat format);

void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace paradoxlab
