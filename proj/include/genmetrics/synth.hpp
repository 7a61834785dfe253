#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "genmetrics/feature_set.hpp"

namespace genmetrics {

struct GaussianSpec {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  std::uint64_t seed = 0;
  std::size_t count = 0;
};

/// Lower-triangular L with L L^T = cov for a symmetric PSD matrix. Zero
/// pivots (within a relative tolerance) yield zero columns instead of
/// failing, so singular covariances are accepted; indefinite ones throw
/// kNotPsd.
Eigen::MatrixXd psd_cholesky(const Eigen::MatrixXd& cov);

/// Draws `count` rows of mean + L z. Row r takes its normals from the Philox
/// stream keyed by `seed` with stream id r, converted by Box-Muller, so the
/// output depends only on the spec. Values are computed in double and
/// stored as float32.
FeatureSet sample_gaussian(const GaussianSpec& spec);

/// Generator tag recorded in the label of sampled sets.
std::string synth_label(const GaussianSpec& spec);

/// Frechet distance between the two Gaussians themselves (product mode).
double analytic_fid(const GaussianSpec& a, const GaussianSpec& b);

}  // namespace genmetrics
