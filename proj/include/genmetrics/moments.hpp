#pragma once

#include <Eigen/Dense>

#include "genmetrics/feature_set.hpp"
#include "genmetrics/parallel.hpp"

namespace genmetrics {

/// Mean vector and sample covariance (divisor count - 1) of a feature set.
struct Moments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  std::size_t count = 0;

  Eigen::Index dim() const { return mean.size(); }
};

/// How the trace term pairs the two covariances.
///  - kMatrixProduct: Tr((A B)^{1/2}), the usual Frechet distance.
///  - kElementwise:   Tr((A o B)^{1/2}) with o the Hadamard product.
enum class FidMode { kMatrixProduct, kElementwise };

// Tolerances applied by sqrtm_trace and fid_from_moments.
inline constexpr double kSymmetryTolerance = 1e-9;     // relative to max |entry|
inline constexpr double kEigenClampTolerance = 1e-10;  // relative to largest eigenvalue
inline constexpr double kFidClampTolerance = 1e-6;     // absolute

/// Rows are processed in fixed blocks of this many rows; partial sums are
/// combined in ascending block order so the result does not depend on the
/// worker count.
inline constexpr std::size_t kMomentsBlockRows = 2048;

Moments compute_moments(const FeatureSet& set, std::size_t threads = default_thread_count());

/// Trace of the PSD square root of A B (product mode) or A o B (elementwise).
///
/// Product mode diagonalizes A, forms S = A^{1/2} B A^{1/2} (similar to A B)
/// and sums the square roots of the eigenvalues of the symmetrized S. Inputs
/// must be symmetric to kSymmetryTolerance; eigenvalues below zero but above
/// -kEigenClampTolerance * max eigenvalue are clamped to zero, anything more
/// negative throws kNotPsd.
double sqrtm_trace(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                   FidMode mode = FidMode::kMatrixProduct);

/// ||mu_s - mu_t||^2 + Tr(C_s) + Tr(C_t) - 2 sqrtm_trace(C_s, C_t).
/// Results in [-kFidClampTolerance, 0) are returned as 0.
double fid_from_moments(const Moments& source, const Moments& target,
                        FidMode mode = FidMode::kMatrixProduct);

double fid(const FeatureSet& source, const FeatureSet& target,
           FidMode mode = FidMode::kMatrixProduct, std::size_t threads = default_thread_count());

}  // namespace genmetrics
