#pragma once

#include <span>
#include <vector>

#include "genmetrics/feature_set.hpp"
#include "genmetrics/parallel.hpp"

namespace genmetrics {

struct PrConfig {
  std::size_t k = 3;
  double q = 1.0;
};

struct PrResult {
  double precision = 0.0;
  double recall = 0.0;
};

/// Query rows per work item in the blocked distance engine.
inline constexpr std::size_t kPrBlockRows = 256;

/// Squared Euclidean distance accumulated in double, one coordinate at a
/// time in index order. This is the reference value every membership
/// decision is made on.
double exact_sq_distance(std::span<const float> x, std::span<const float> y);

/// Squared distance from each row to its k-th nearest neighbour in the same
/// set, the row itself excluded (duplicates count as neighbours at 0).
///
/// Candidates are screened with a float32 Gram-matrix pass whose rounding
/// error is bounded; only rows within the bound of the cut-off are re-measured
/// with exact_sq_distance, so the returned radii equal the brute-force ones.
std::vector<double> knn_radii(const FeatureSet& set, std::size_t k,
                              std::size_t threads = default_thread_count());

/// 1 if ||x - y||^2 < q * radius(y) for at least one row y of `manifold`.
bool region(std::span<const float> x, const FeatureSet& manifold, std::span<const double> radii,
            double q);

/// Precision: fraction of source rows inside the target k-NN manifold.
/// Recall: fraction of target rows inside the source k-NN manifold.
PrResult precision_recall(const FeatureSet& source, const FeatureSet& target,
                          const PrConfig& cfg = {}, std::size_t threads = default_thread_count());

}  // namespace genmetrics
