#include "genmetrics/kid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "genmetrics/error.hpp"
#include "genmetrics/random.hpp"

namespace genmetrics {
namespace {

double cube_kernel(double dot, double inv_dim) {
  const double base = dot * inv_dim + 1.0;
  return base * base * base;
}

// Sum of kernel values strictly below the diagonal of a Gram matrix whose
// lower triangle holds the dot products.
double strict_lower_kernel_sum(const Eigen::MatrixXd& gram, double inv_dim) {
  double sum = 0.0;
  for (Eigen::Index i = 1; i < gram.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) sum += cube_kernel(gram(i, j), inv_dim);
  }
  return sum;
}

}  // namespace

double poly_kernel(std::span<const double> x, std::span<const double> y, std::size_t dim) {
  if (x.size() != y.size() || x.size() != dim || dim == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "poly_kernel needs two vectors of length d");
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < dim; ++i) dot += x[i] * y[i];
  return cube_kernel(dot, 1.0 / static_cast<double>(dim));
}

double kid_single_estimate(const RowMatrixXd& sub_source, const RowMatrixXd& sub_target) {
  const Eigen::Index s = sub_source.rows();
  if (sub_target.rows() != s) {
    throw Error(ErrorCode::kDimensionMismatch, "KID subsets must have the same number of rows");
  }
  if (sub_source.cols() != sub_target.cols() || sub_source.cols() == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "KID subsets must have equal, non-zero dimension");
  }
  if (s < 2) {
    throw Error(ErrorCode::kInvalidConfig, "KID subset size must be at least 2");
  }
  const double inv_dim = 1.0 / static_cast<double>(sub_source.cols());

  Eigen::MatrixXd gram_ss = Eigen::MatrixXd::Zero(s, s);
  gram_ss.selfadjointView<Eigen::Lower>().rankUpdate(sub_source);
  Eigen::MatrixXd gram_tt = Eigen::MatrixXd::Zero(s, s);
  gram_tt.selfadjointView<Eigen::Lower>().rankUpdate(sub_target);
  const Eigen::MatrixXd gram_st = sub_source * sub_target.transpose();

  // Off-diagonal sums are symmetric, so twice the strict lower triangle.
  const double within = 2.0 * strict_lower_kernel_sum(gram_ss, inv_dim) +
                        2.0 * strict_lower_kernel_sum(gram_tt, inv_dim);
  double cross = 0.0;
  for (Eigen::Index i = 0; i < s; ++i) {
    for (Eigen::Index j = 0; j < s; ++j) cross += cube_kernel(gram_st(i, j), inv_dim);
  }
  const double sd = static_cast<double>(s);
  return within / (sd * (sd - 1.0)) - 2.0 * cross / (sd * sd);
}

SubsetDraw draw_subsets(std::size_t source_count, std::size_t target_count, std::size_t subset_size,
                        std::uint64_t seed, std::size_t index) {
  const std::uint64_t key = mix_seed(seed, index);
  PhiloxStream source_stream(key, 0);
  PhiloxStream target_stream(key, 1);
  return {sample_without_replacement(source_stream, source_count, subset_size),
          sample_without_replacement(target_stream, target_count, subset_size)};
}

RowMatrixXd gather_rows(const FeatureSet& set, std::span<const std::size_t> rows) {
  RowMatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(set.dim()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto src = set.row(rows[r]);
    for (std::size_t c = 0; c < src.size(); ++c) out(r, c) = src[c];
  }
  return out;
}

std::size_t resolve_subset_size(const KidConfig& cfg, std::size_t source_count,
                                std::size_t target_count) {
  const std::size_t available = std::min(source_count, target_count);
  const std::size_t s = cfg.subset_size.value_or(std::min(kDefaultKidSubsetSize, available));
  if (s < 2) {
    throw Error(ErrorCode::kInvalidConfig, "KID subset size must be at least 2, got " + std::to_string(s));
  }
  if (s > available) {
    throw Error(ErrorCode::kInvalidConfig, "KID subset size " + std::to_string(s) +
                                               " exceeds the smaller set size " +
                                               std::to_string(available));
  }
  return s;
}

KidResult kid(const FeatureSet& source, const FeatureSet& target, const KidConfig& cfg,
              std::size_t threads) {
  if (source.dim() != target.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "feature dimensions differ: " +
                                                   std::to_string(source.dim()) + " vs " +
                                                   std::to_string(target.dim()));
  }
  if (cfg.num_subsets == 0) {
    throw Error(ErrorCode::kInvalidConfig, "KID needs at least one subset");
  }
  const std::size_t s = resolve_subset_size(cfg, source.count(), target.count());

  KidResult result;
  result.estimates.resize(cfg.num_subsets);
  parallel_for(cfg.num_subsets, threads, [&](std::size_t i) {
    const SubsetDraw draw = draw_subsets(source.count(), target.count(), s, cfg.seed, i);
    result.estimates[i] =
        kid_single_estimate(gather_rows(source, draw.source), gather_rows(target, draw.target));
  });

  double sum = 0.0;
  for (double e : result.estimates) sum += e;
  result.mean = sum / static_cast<double>(cfg.num_subsets);
  if (cfg.num_subsets > 1) {
    double sq = 0.0;
    for (double e : result.estimates) sq += (e - result.mean) * (e - result.mean);
    result.stddev = std::sqrt(sq / static_cast<double>(cfg.num_subsets - 1));
  }
  return result;
}

}  // namespace genmetrics
