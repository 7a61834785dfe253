#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace genmetrics {

struct MetricRow {
  std::string extractor;
  std::string source;
  double fid = 0.0;
  double kid_mean = 0.0;
  double kid_stddev = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

/// A table of metric rows. Each comparison group is a pair (first, second)
/// of row indices evaluated on the same extractor; a metric cell pair is
/// marked when the second row is strictly better on that metric.
struct MetricReport {
  std::string title;
  std::vector<MetricRow> rows;
  bool normalized = false;
  bool scale_1000 = false;
  std::vector<std::pair<std::size_t, std::size_t>> groups;
};

enum class Metric { kFid, kKid, kPrecision, kRecall };
inline constexpr std::array<Metric, 4> kAllMetrics = {Metric::kFid, Metric::kKid, Metric::kPrecision,
                                                      Metric::kRecall};

enum class ReportFormat { kJson, kMarkdown };

double metric_value(const MetricRow& row, Metric metric);

/// Lower is better for FID and KID, higher for precision and recall.
bool second_is_better(Metric metric, double first, double second);

/// marks[row][metric] is true when the cell is rendered bold-italic. Both
/// cells of a group are marked, matching how the comparison tables
/// highlight a pair.
std::vector<std::array<bool, 4>> marked_cells(const MetricReport& report);

/// Throws kInvalidConfig on out-of-range or degenerate groups.
void validate_report(const MetricReport& report);

/// Markdown: FID/P/R to 3 decimals, KID to 4, FID and KID multiplied by
/// 1000 when scale_1000 is set. JSON: raw unscaled values at full precision.
std::string render_report(const MetricReport& report, ReportFormat format);

MetricReport parse_report_json(const std::string& text);

}  // namespace genmetrics
