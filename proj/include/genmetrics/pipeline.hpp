#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "genmetrics/feature_set.hpp"
#include "genmetrics/kid.hpp"
#include "genmetrics/moments.hpp"
#include "genmetrics/parallel.hpp"
#include "genmetrics/pnr.hpp"
#include "genmetrics/report.hpp"

namespace genmetrics {

struct PairOptions {
  bool normalize = false;
  FidMode fid_mode = FidMode::kMatrixProduct;
  KidConfig kid;
  PrConfig pr;
};

/// Scores one source against one target. With `normalize` set, both sets are
/// L2-normalized first.
MetricRow run_pair(const FeatureSet& source, const FeatureSet& target, const PairOptions& options,
                   std::size_t threads = default_thread_count());

MetricRow run_pair(const std::filesystem::path& source, const std::filesystem::path& target,
                   const PairOptions& options, std::size_t threads = default_thread_count());

/// One row of a report config: either two feature files to score or
/// precomputed values to lay out as-is.
struct ReportEntry {
  std::string extractor;
  std::string source;
  std::filesystem::path source_path;
  std::filesystem::path target_path;
  std::optional<MetricRow> values;
};

struct ReportConfig {
  std::string title;
  bool scale_1000 = false;
  PairOptions options;
  std::vector<ReportEntry> entries;
  std::vector<std::pair<std::size_t, std::size_t>> groups;
};

/// Parses a report config. Relative feature paths resolve against
/// `base_dir`; a top-level "target" applies to entries without their own.
ReportConfig parse_report_config(const std::string& text, const std::filesystem::path& base_dir);

ReportConfig load_report_config(const std::filesystem::path& path);

/// Evaluates every entry (distinct feature files are loaded once) and
/// assembles the report.
MetricReport run_report(const ReportConfig& config, std::size_t threads = default_thread_count());

FidMode parse_fid_mode(const std::string& name);

}  // namespace genmetrics
