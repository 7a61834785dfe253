#include "genmetrics/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "genmetrics/error.hpp"

namespace genmetrics {
namespace {

using nlohmann::json;

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

FidMode parse_fid_mode(const std::string& name) {
  if (name == "product") return FidMode::kMatrixProduct;
  if (name == "elementwise") return FidMode::kElementwise;
  throw Error(ErrorCode::kInvalidConfig, "unknown FID mode '" + name + "' (product|elementwise)");
}

MetricRow run_pair(const FeatureSet& source, const FeatureSet& target, const PairOptions& options,
                   std::size_t threads) {
  if (source.dim() != target.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "feature dimensions differ: " +
                                                   std::to_string(source.dim()) + " vs " +
                                                   std::to_string(target.dim()));
  }
  if (options.normalize) {
    return run_pair(normalize(source), normalize(target), PairOptions{false, options.fid_mode,
                                                                      options.kid, options.pr},
                    threads);
  }
  MetricRow row;
  row.source = source.label();
  row.fid = fid(source, target, options.fid_mode, threads);
  const KidResult k = kid(source, target, options.kid, threads);
  row.kid_mean = k.mean;
  row.kid_stddev = k.stddev;
  const PrResult pr = precision_recall(source, target, options.pr, threads);
  row.precision = pr.precision;
  row.recall = pr.recall;
  return row;
}

MetricRow run_pair(const std::filesystem::path& source, const std::filesystem::path& target,
                   const PairOptions& options, std::size_t threads) {
  return run_pair(read_features(source), read_features(target), options, threads);
}

ReportConfig parse_report_config(const std::string& text, const std::filesystem::path& base_dir) {
  ReportConfig config;
  try {
    const json doc = json::parse(text);
    config.title = doc.value("title", std::string{});
    config.scale_1000 = doc.value("scale_1000", false);
    config.options.normalize = doc.value("normalize", false);
    config.options.fid_mode = parse_fid_mode(doc.value("fid_mode", std::string("product")));
    if (doc.contains("kid")) {
      const json& k = doc.at("kid");
      if (k.contains("subset_size")) config.options.kid.subset_size = k.at("subset_size").get<std::size_t>();
      config.options.kid.num_subsets = k.value("num_subsets", config.options.kid.num_subsets);
      config.options.kid.seed = k.value("seed", config.options.kid.seed);
    }
    if (doc.contains("pr")) {
      config.options.pr.k = doc.at("pr").value("k", config.options.pr.k);
      config.options.pr.q = doc.at("pr").value("q", config.options.pr.q);
    }
    const std::string default_target = doc.value("target", std::string{});

    for (const json& row : doc.at("rows")) {
      ReportEntry entry;
      entry.extractor = row.value("extractor", std::string{});
      entry.source = row.value("source", std::string{});
      if (row.contains("values")) {
        const json& v = row.at("values");
        MetricRow values;
        values.extractor = entry.extractor;
        values.source = entry.source;
        values.fid = v.at("fid").get<double>();
        values.kid_mean = v.at("kid").get<double>();
        values.kid_stddev = v.value("kid_stddev", 0.0);
        values.precision = v.at("precision").get<double>();
        values.recall = v.at("recall").get<double>();
        entry.values = values;
      } else {
        entry.source_path = resolve(base_dir, row.at("source_path").get<std::string>());
        const std::string target = row.value("target_path", default_target);
        if (target.empty()) {
          throw Error(ErrorCode::kInvalidConfig,
                      "row '" + entry.source + "' has no target_path and no top-level target");
        }
        entry.target_path = resolve(base_dir, target);
        if (entry.source.empty()) entry.source = entry.source_path.stem().string();
      }
      config.entries.push_back(std::move(entry));
    }
    for (const json& group : doc.value("groups", json::array())) {
      config.groups.emplace_back(group.at(0).get<std::size_t>(), group.at(1).get<std::size_t>());
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("malformed report config: ") + e.what());
  }
  return config;
}

ReportConfig load_report_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_report_config(buffer.str(), path.parent_path());
}

MetricReport run_report(const ReportConfig& config, std::size_t threads) {
  MetricReport report;
  report.title = config.title;
  report.normalized = config.options.normalize;
  report.scale_1000 = config.scale_1000;
  report.groups = config.groups;
  report.rows.resize(config.entries.size());
  validate_report(report);

  // Load each distinct file once, normalizing up front when requested.
  std::map<std::filesystem::path, std::size_t> slot;
  std::vector<std::filesystem::path> paths;
  for (const ReportEntry& e : config.entries) {
    if (e.values) continue;
    for (const auto& p : {e.source_path, e.target_path}) {
      if (slot.emplace(p, paths.size()).second) paths.push_back(p);
    }
  }
  std::vector<std::optional<FeatureSet>> sets(paths.size());
  parallel_for(paths.size(), threads, [&](std::size_t i) {
    FeatureSet set = read_features(paths[i]);
    sets[i] = config.options.normalize ? normalize(set) : std::move(set);
  });
  PairOptions options = config.options;
  options.normalize = false;

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < config.entries.size(); ++i) {
    if (config.entries[i].values) {
      report.rows[i] = *config.entries[i].values;
    } else {
      pending.push_back(i);
    }
  }
  const std::size_t outer = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(pending.size(), 1));
  const std::size_t inner = std::max<std::size_t>(threads / outer, 1);
  parallel_for(pending.size(), outer, [&](std::size_t p) {
    const ReportEntry& e = config.entries[pending[p]];
    MetricRow row = run_pair(*sets[slot.at(e.source_path)], *sets[slot.at(e.target_path)], options, inner);
    row.extractor = e.extractor;
    row.source = e.source;
    report.rows[pending[p]] = std::move(row);
  });
  return report;
}

}  // namespace genmetrics
