#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "genmetrics/error.hpp"
#include "genmetrics/feature_set.hpp"
#include "genmetrics/kid.hpp"
#include "genmetrics/moments.hpp"
#include "genmetrics/pipeline.hpp"
#include "genmetrics/pnr.hpp"
#include "genmetrics/report.hpp"
#include "genmetrics/synth.hpp"

namespace genmetrics::cli {
namespace {

using nlohmann::json;

struct Flags {
  std::string source;
  std::string target;
  std::string out_path;
  std::string config;
  std::string inspect_path;
  bool normalize = false;
  bool scale_1000 = false;
  std::string fid_mode = "product";
  std::string format = "markdown";
  std::optional<std::size_t> kid_subset_size;
  std::size_t kid_subsets = KidConfig{}.num_subsets;
  std::optional<std::uint64_t> seed;
  std::size_t k = PrConfig{}.k;
  double q = PrConfig{}.q;
};

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

PairOptions pair_options(const Flags& f) {
  PairOptions options;
  options.normalize = f.normalize;
  options.fid_mode = parse_fid_mode(f.fid_mode);
  options.kid.subset_size = f.kid_subset_size;
  options.kid.num_subsets = f.kid_subsets;
  options.kid.seed = f.seed.value_or(0);
  options.pr.k = f.k;
  options.pr.q = f.q;
  return options;
}

ReportFormat parse_format(const std::string& name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "markdown") return ReportFormat::kMarkdown;
  throw Error(ErrorCode::kInvalidConfig, "unknown format '" + name + "' (json|markdown)");
}

// Loads a pair and applies normalization to both when requested.
std::pair<FeatureSet, FeatureSet> load_pair(const Flags& f) {
  FeatureSet source = read_features(f.source);
  FeatureSet target = read_features(f.target);
  if (f.normalize) return {normalize(source), normalize(target)};
  return {std::move(source), std::move(target)};
}

GaussianSpec parse_gaussian_spec(const std::string& text) {
  GaussianSpec spec;
  try {
    const json doc = json::parse(text);
    const auto mean = doc.at("mean").get<std::vector<double>>();
    const auto d = static_cast<Eigen::Index>(mean.size());
    spec.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), d);
    if (doc.contains("cov")) {
      const auto rows = doc.at("cov").get<std::vector<std::vector<double>>>();
      if (static_cast<Eigen::Index>(rows.size()) != d) {
        throw Error(ErrorCode::kDimensionMismatch, "cov must be a d x d array");
      }
      spec.cov.resize(d, d);
      for (Eigen::Index i = 0; i < d; ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != d) {
          throw Error(ErrorCode::kDimensionMismatch, "cov must be a d x d array");
        }
        for (Eigen::Index j = 0; j < d; ++j) spec.cov(i, j) = rows[i][j];
      }
    } else {
      spec.cov = Eigen::MatrixXd::Identity(d, d);
    }
    spec.seed = doc.value("seed", std::uint64_t{0});
    spec.count = doc.at("count").get<std::size_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("malformed Gaussian spec: ") + e.what());
  }
  return spec;
}

int cmd_inspect(const Flags& f, std::ostream& out) {
  const FeatureSet set = read_features(f.inspect_path);
  double min = set.data()[0], max = set.data()[0];
  for (float v : set.data()) {
    min = std::min<double>(min, v);
    max = std::max<double>(max, v);
  }
  const json doc = {{"path", f.inspect_path},
                    {"magic", std::string(kFeatureMagic, sizeof(kFeatureMagic))},
                    {"dtype_code", kDtypeFloat32},
                    {"count", set.count()},
                    {"dim", set.dim()},
                    {"bytes", kFeatureHeaderSize + set.count() * set.dim() * 4},
                    {"min", min},
                    {"max", max},
                    {"valid", true}};
  out << doc.dump(2) << "\n";
  return kExitOk;
}

int cmd_normalize(const Flags& f, std::ostream& out) {
  const FeatureSet normalized = normalize(read_features(f.source));
  write_features(normalized, f.out_path);
  out << json{{"out", f.out_path}, {"count", normalized.count()}, {"dim", normalized.dim()}}.dump()
      << "\n";
  return kExitOk;
}

int cmd_fid(const Flags& f, std::ostream& out) {
  const auto [source, target] = load_pair(f);
  const double value = fid(source, target, parse_fid_mode(f.fid_mode));
  out << json{{"fid", value}, {"fid_mode", f.fid_mode}, {"normalized", f.normalize}}.dump() << "\n";
  return kExitOk;
}

int cmd_kid(const Flags& f, std::ostream& out) {
  const auto [source, target] = load_pair(f);
  const PairOptions options = pair_options(f);
  const KidResult result = kid(source, target, options.kid);
  out << json{{"kid_mean", result.mean},
              {"kid_stddev", result.stddev},
              {"subset_size", resolve_subset_size(options.kid, source.count(), target.count())},
              {"num_subsets", options.kid.num_subsets},
              {"seed", options.kid.seed},
              {"normalized", f.normalize}}
             .dump()
      << "\n";
  return kExitOk;
}

int cmd_pr(const Flags& f, std::ostream& out) {
  const auto [source, target] = load_pair(f);
  const PrResult result = precision_recall(source, target, pair_options(f).pr);
  out << json{{"precision", result.precision},
              {"recall", result.recall},
              {"k", f.k},
              {"q", f.q},
              {"normalized", f.normalize}}
             .dump()
      << "\n";
  return kExitOk;
}

int cmd_report(const Flags& f, std::ostream& out) {
  const ReportFormat format = parse_format(f.format);
  MetricReport report;
  if (!f.config.empty()) {
    ReportConfig config = load_report_config(f.config);
    if (f.scale_1000) config.scale_1000 = true;
    report = run_report(config);
  } else {
    if (f.source.empty() || f.target.empty()) {
      throw Error(ErrorCode::kInvalidConfig, "report needs --config or both --source and --target");
    }
    MetricRow row = run_pair(std::filesystem::path(f.source), std::filesystem::path(f.target),
                             pair_options(f));
    row.source = std::filesystem::path(f.source).stem().string();
    report.rows.push_back(std::move(row));
    report.normalized = f.normalize;
    report.scale_1000 = f.scale_1000;
  }
  out << render_report(report, format);
  return kExitOk;
}

int cmd_synth(const Flags& f, std::ostream& out) {
  GaussianSpec spec = parse_gaussian_spec(read_text(f.config));
  if (f.seed) spec.seed = *f.seed;
  const FeatureSet set = sample_gaussian(spec);
  write_features(set, f.out_path);
  out << json{{"out", f.out_path}, {"count", set.count()}, {"dim", set.dim()}, {"label", set.label()}}
             .dump()
      << "\n";
  return kExitOk;
}

void add_pair_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--source", f.source, "Source feature file (GMFEAT01)")->required();
  cmd->add_option("--target", f.target, "Target feature file (GMFEAT01)")->required();
  cmd->add_flag("--normalize", f.normalize, "L2-normalize both sets first");
}

void add_kid_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--kid-subset-size", f.kid_subset_size, "KID subset size (default min(1000, n))");
  cmd->add_option("--kid-subsets", f.kid_subsets, "Number of KID subsets");
  cmd->add_option("--seed", f.seed, "Seed for KID subset sampling");
}

void add_pr_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--k", f.k, "Neighbour rank for the k-NN radius");
  cmd->add_option("--q", f.q, "Radius multiplier");
}

void add_fid_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--fid-mode", f.fid_mode, "Trace term: product|elementwise");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Feature-distribution metrics: FID, KID, precision/recall"};
  app.require_subcommand(1);
  Flags f;

  auto* inspect = app.add_subcommand("inspect", "Validate a feature file and dump its header");
  inspect->add_option("path", f.inspect_path, "Feature file")->required();

  auto* norm = app.add_subcommand("normalize", "Write an L2-normalized copy of a feature file");
  norm->add_option("--source", f.source, "Input feature file")->required();
  norm->add_option("--out", f.out_path, "Output feature file")->required();

  auto* fid_cmd = app.add_subcommand("fid", "Frechet distance between two feature files");
  add_pair_flags(fid_cmd, f);
  add_fid_flags(fid_cmd, f);

  auto* kid_cmd = app.add_subcommand("kid", "Kernel distance (polynomial kernel MMD)");
  add_pair_flags(kid_cmd, f);
  add_kid_flags(kid_cmd, f);

  auto* pr_cmd = app.add_subcommand("pr", "k-NN manifold precision and recall");
  add_pair_flags(pr_cmd, f);
  add_pr_flags(pr_cmd, f);

  auto* report = app.add_subcommand("report", "Score pairs and render a results table");
  report->add_option("--config", f.config, "Report config (JSON)");
  report->add_option("--source", f.source, "Source feature file (single-pair mode)");
  report->add_option("--target", f.target, "Target feature file (single-pair mode)");
  report->add_flag("--normalize", f.normalize, "L2-normalize both sets first");
  report->add_flag("--scale-1000", f.scale_1000, "Render FID and KID multiplied by 1000");
  report->add_option("--format", f.format, "json|markdown");
  add_fid_flags(report, f);
  add_kid_flags(report, f);
  add_pr_flags(report, f);

  auto* synth = app.add_subcommand("synth", "Sample a Gaussian feature file from a JSON spec");
  synth->add_option("--config", f.config, "Gaussian spec (JSON: mean, cov, seed, count)")->required();
  synth->add_option("--out", f.out_path, "Output feature file")->required();
  synth->add_option("--seed", f.seed, "Override the spec seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    if (inspect->parsed()) return cmd_inspect(f, out);
    if (norm->parsed()) return cmd_normalize(f, out);
    if (fid_cmd->parsed()) return cmd_fid(f, out);
    if (kid_cmd->parsed()) return cmd_kid(f, out);
    if (pr_cmd->parsed()) return cmd_pr(f, out);
    if (report->parsed()) return cmd_report(f, out);
    if (synth->parsed()) return cmd_synth(f, out);
  } catch (const Error& e) {
    err << json{{"error", std::string(error_code_name(e.code()))}, {"message", e.what()}}.dump() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    err << json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace genmetrics::cli
