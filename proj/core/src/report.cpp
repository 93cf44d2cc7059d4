#include "paradoxlab/report.hpp"

#include <charconv>
#include <fstream>

#include <nlohmann/json.hpp>

#include "paradoxlab/errors.hpp"

namespace paradoxlab {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

MetricRow to_metric_row(std::string name, const ParadoxReport& report) {
  MetricRow row;
  row.name = std::move(name);
  row.value = report.value;
  if (report.ci) {
    row.ci_lo = report.ci->lo;
    row.ci_hi = report.ci->hi;
  }
  row.n = report.replicates;
  return row;
}

std::string to_json(const ParadoxReport& report) {
  nlohmann::ordered_json doc;
  doc["value"] = report.value;
  if (report.ci) {
    doc["ci_lo"] = report.ci->lo;
    doc["ci_hi"] = report.ci->hi;
  } else {
    doc["ci_lo"] = nullptr;
    doc["ci_hi"] = nullptr;
  }
  doc["replicates"] = report.replicates;
  return doc.dump();
}

std::string metrics_to_csv(std::span<const MetricRow> rows) {
  std::string out = "name,value,ci_lo,ci_hi,n\n";
  for (const MetricRow& row : rows) {
    out += row.name;
    out += ',';
    out += format_double(row.value);
    out += ',';
    if (row.ci_lo) out += format_double(*row.ci_lo);
    out += ',';
    if (row.ci_hi) out += format_double(*row.ci_hi);
    out += ',';
    if (row.n) out += std::to_string(*row.n);
    out += '\n';
  }
  return out;
}

void write_report(std::span<const MetricRow> rows, const std::filesystem::path& path,
                  ReportFormat format) {
  if (format == ReportFormat::kCsv) {
    write_text_file(path, metrics_to_csv(rows));
    return;
  }
  nlohmann::ordered_json doc;
  for (const MetricRow& row : rows) {
    nlohmann::ordered_json entry;
    entry["value"] = row.value;
    entry["ci_lo"] = row.ci_lo ? nlohmann::ordered_json(*row.ci_lo) : nullptr;
    entry["ci_hi"] = row.ci_hi ? nlohmann::ordered_json(*row.ci_hi) : nullptr;
    entry["n"] = row.n ? nlohmann::ordered_json(*row.n) : nullptr;
    doc[row.name] = entry;
  }
  write_text_file(path, doc.dump(2) + "\n");
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("short write: " + path.string());
}

}  // namespace paradoxlab
