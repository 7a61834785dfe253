#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "genmetrics/feature_set.hpp"
#include "genmetrics/parallel.hpp"

namespace genmetrics {

using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct KidConfig {
  // Unset means min(1000, source.count, target.count).
  std::optional<std::size_t> subset_size;
  std::size_t num_subsets = 100;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kDefaultKidSubsetSize = 1000;

struct KidResult {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for a single subset
  std::vector<double> estimates;
};

/// (x . y / d + 1)^3.
double poly_kernel(std::span<const double> x, std::span<const double> y, std::size_t dim);

/// Unbiased MMD^2 estimate between two equal-sized subsets with the cubic
/// polynomial kernel: mean off-diagonal within-set kernel value (both sets)
/// minus twice the mean cross-set kernel value. May be negative.
double kid_single_estimate(const RowMatrixXd& sub_source, const RowMatrixXd& sub_target);

/// Row indices used for subset `index`. Source and target draws come from
/// two Philox streams keyed by mix_seed(seed, index).
struct SubsetDraw {
  std::vector<std::size_t> source;
  std::vector<std::size_t> target;
};
SubsetDraw draw_subsets(std::size_t source_count, std::size_t target_count, std::size_t subset_size,
                        std::uint64_t seed, std::size_t index);

/// Gathers the given rows (ascending order) into a double matrix.
RowMatrixXd gather_rows(const FeatureSet& set, std::span<const std::size_t> rows);

std::size_t resolve_subset_size(const KidConfig& cfg, std::size_t source_count,
                                std::size_t target_count);

KidResult kid(const FeatureSet& source, const FeatureSet& target, const KidConfig& cfg = {},
              std::size_t threads = default_thread_count());

}  // namespace genmetrics
