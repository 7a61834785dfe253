#include "genmetrics/synth.hpp"

#include <cmath>
#include <vector>

#include "genmetrics/error.hpp"
#include "genmetrics/moments.hpp"
#include "genmetrics/random.hpp"

namespace genmetrics {
namespace {

constexpr double kPivotTolerance = 1e-12;

void check_spec(const GaussianSpec& spec) {
  const Eigen::Index d = spec.mean.size();
  if (d == 0) throw Error(ErrorCode::kEmptySet, "Gaussian spec has zero dimension");
  if (spec.cov.rows() != d || spec.cov.cols() != d) {
    throw Error(ErrorCode::kDimensionMismatch, "covariance shape does not match mean length");
  }
  if (!spec.mean.allFinite() || !spec.cov.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "Gaussian spec contains non-finite values");
  }
  if (spec.count < 2) throw Error(ErrorCode::kTooFewSamples, "Gaussian spec needs count >= 2");
}

}  // namespace

Eigen::MatrixXd psd_cholesky(const Eigen::MatrixXd& cov) {
  const Eigen::Index d = cov.rows();
  const double scale = cov.cwiseAbs().maxCoeff();
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
    throw Error(ErrorCode::kAsymmetric, "covariance is not symmetric");
  }
  const double tol = kPivotTolerance * scale;
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    double pivot = cov(j, j);
    for (Eigen::Index p = 0; p < j; ++p) pivot -= l(j, p) * l(j, p);
    if (pivot < -tol) {
      throw Error(ErrorCode::kNotPsd, "covariance is not positive semidefinite (pivot " +
                                          std::to_string(pivot) + " at column " + std::to_string(j) + ")");
    }
    if (pivot <= tol) {
      // Singular direction: the rest of the column must vanish as well.
      for (Eigen::Index i = j + 1; i < d; ++i) {
        double v = cov(i, j);
        for (Eigen::Index p = 0; p < j; ++p) v -= l(i, p) * l(j, p);
        if (std::abs(v) > std::sqrt(tol) * std::sqrt(scale) + tol) {
          throw Error(ErrorCode::kNotPsd, "covariance is not positive semidefinite (column " +
                                              std::to_string(j) + ")");
        }
      }
      continue;
    }
    const double root = std::sqrt(pivot);
    l(j, j) = root;
    for (Eigen::Index i = j + 1; i < d; ++i) {
      double v = cov(i, j);
      for (Eigen::Index p = 0; p < j; ++p) v -= l(i, p) * l(j, p);
      l(i, j) = v / root;
    }
  }
  return l;
}

std::string synth_label(const GaussianSpec& spec) {
  return "synth:philox4x32-10:box-muller:seed=" + std::to_string(spec.seed);
}

FeatureSet sample_gaussian(const GaussianSpec& spec) {
  check_spec(spec);
  const Eigen::MatrixXd factor = psd_cholesky(spec.cov);
  const auto d = static_cast<std::size_t>(spec.mean.size());

  std::vector<float> data(spec.count * d);
  std::vector<double> z(d);
  for (std::size_t r = 0; r < spec.count; ++r) {
    PhiloxStream stream(spec.seed, r);
    fill_standard_normal(stream, z);
    for (std::size_t i = 0; i < d; ++i) {
      double v = spec.mean[static_cast<Eigen::Index>(i)];
      for (std::size_t p = 0; p <= i; ++p) {
        v += factor(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p)) * z[p];
      }
      data[r * d + i] = static_cast<float>(v);
    }
  }
  return FeatureSet(std::move(data), spec.count, d, synth_label(spec));
}

double analytic_fid(const GaussianSpec& a, const GaussianSpec& b) {
  if (a.mean.size() != b.mean.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "Gaussian specs have different dimensions");
  }
  Moments ma{a.mean, a.cov, a.count};
  Moments mb{b.mean, b.cov, b.count};
  return fid_from_moments(ma, mb, FidMode::kMatrixProduct);
}

}  // namespace genmetrics
