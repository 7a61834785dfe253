#include "genmetrics/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "genmetrics/error.hpp"

namespace genmetrics {
namespace {

using nlohmann::json;

std::size_t metric_column(Metric metric) { return static_cast<std::size_t>(metric); }

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

std::string render_cell(const MetricReport& report, const MetricRow& row, Metric metric, bool marked) {
  double value = metric_value(row, metric);
  int decimals = 3;
  if (metric == Metric::kKid) decimals = 4;
  if (report.scale_1000 && (metric == Metric::kFid || metric == Metric::kKid)) value *= 1000.0;
  std::string text = format_fixed(value, decimals);
  return marked ? "***" + text + "***" : text;
}

std::string render_markdown(const MetricReport& report) {
  const auto marks = marked_cells(report);
  const char* star = report.scale_1000 ? "*" : "";
  std::ostringstream out;
  if (!report.title.empty()) out << "### " << report.title << "\n\n";
  out << "| Feature Extractor | Source Data | FID" << star << " ↓ | KID" << star
      << " ↓ | P ↑ | R ↑ |\n";
  out << "|---|---|---:|---:|---:|---:|\n";
  for (std::size_t r = 0; r < report.rows.size(); ++r) {
    const MetricRow& row = report.rows[r];
    out << "| " << row.extractor << " | " << row.source;
    for (Metric metric : kAllMetrics) {
      out << " | " << render_cell(report, row, metric, marks[r][metric_column(metric)]);
    }
    out << " |\n";
  }
  out << "\n";
  if (report.normalized) out << "Features were L2-normalized before scoring.\n";
  if (report.scale_1000) out << "\\* FID and KID values are shown x1000.\n";
  if (!report.groups.empty()) {
    out << "***Bold italic***: the second source of a comparison pair scores strictly better.\n";
  }
  out << "↓ lower is better, ↑ higher is better. P is precision, R is recall.\n";
  return out.str();
}

std::string render_json(const MetricReport& report) {
  json rows = json::array();
  for (const MetricRow& row : report.rows) {
    rows.push_back({{"extractor", row.extractor},
                    {"source", row.source},
                    {"fid", row.fid},
                    {"kid_mean", row.kid_mean},
                    {"kid_stddev", row.kid_stddev},
                    {"precision", row.precision},
                    {"recall", row.recall}});
  }
  json groups = json::array();
  for (const auto& [first, second] : report.groups) groups.push_back({first, second});
  json doc = {{"title", report.title},
              {"normalized", report.normalized},
              {"scale_1000", report.scale_1000},
              {"rows", rows},
              {"groups", groups}};
  return doc.dump(2) + "\n";
}

}  // namespace

double metric_value(const MetricRow& row, Metric metric) {
  switch (metric) {
    case Metric::kFid: return row.fid;
    case Metric::kKid: return row.kid_mean;
    case Metric::kPrecision: return row.precision;
    case Metric::kRecall: return row.recall;
  }
  return 0.0;
}

bool second_is_better(Metric metric, double first, double second) {
  if (metric == Metric::kFid || metric == Metric::kKid) return second < first;
  return second > first;
}

void validate_report(const MetricReport& report) {
  for (const auto& [first, second] : report.groups) {
    if (first >= report.rows.size() || second >= report.rows.size()) {
      throw Error(ErrorCode::kInvalidConfig, "comparison group refers to a missing row");
    }
    if (first == second) {
      throw Error(ErrorCode::kInvalidConfig, "comparison group pairs a row with itself");
    }
  }
}

std::vector<std::array<bool, 4>> marked_cells(const MetricReport& report) {
  validate_report(report);
  std::vector<std::array<bool, 4>> marks(report.rows.size(), {false, false, false, false});
  for (const auto& [first, second] : report.groups) {
    for (Metric metric : kAllMetrics) {
      if (second_is_better(metric, metric_value(report.rows[first], metric),
                           metric_value(report.rows[second], metric))) {
        marks[first][metric_column(metric)] = true;
        marks[second][metric_column(metric)] = true;
      }
    }
  }
  return marks;
}

std::string render_report(const MetricReport& report, ReportFormat format) {
  validate_report(report);
  return format == ReportFormat::kJson ? render_json(report) : render_markdown(report);
}

MetricReport parse_report_json(const std::string& text) {
  MetricReport report;
  try {
    const json doc = json::parse(text);
    report.title = doc.value("title", std::string{});
    report.normalized = doc.value("normalized", false);
    report.scale_1000 = doc.value("scale_1000", false);
    for (const json& row : doc.at("rows")) {
      MetricRow r;
      r.extractor = row.at("extractor").get<std::string>();
      r.source = row.at("source").get<std::string>();
      r.fid = row.at("fid").get<double>();
      r.kid_mean = row.at("kid_mean").get<double>();
      r.kid_stddev = row.value("kid_stddev", 0.0);
      r.precision = row.at("precision").get<double>();
      r.recall = row.at("recall").get<double>();
      report.rows.push_back(std::move(r));
    }
    for (const json& group : doc.value("groups", json::array())) {
      report.groups.emplace_back(group.at(0).get<std::size_t>(), group.at(1).get<std::size_t>());
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("malformed report JSON: ") + e.what());
  }
  validate_report(report);
  return report;
}

}  // namespace genmetrics
