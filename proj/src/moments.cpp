#include "genmetrics/moments.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "genmetrics/error.hpp"

namespace genmetrics {
namespace {

using RowBlock = Eigen::Map<const Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

RowBlock block_view(const FeatureSet& set, std::size_t block) {
  const std::size_t begin = block * kMomentsBlockRows;
  const std::size_t rows = std::min(kMomentsBlockRows, set.count() - begin);
  return RowBlock(set.data().data() + begin * set.dim(), static_cast<Eigen::Index>(rows),
                  static_cast<Eigen::Index>(set.dim()));
}

void check_symmetric(const Eigen::MatrixXd& m, const char* name) {
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolerance * scale) {
    throw Error(ErrorCode::kAsymmetric, std::string(name) + " is not symmetric (max |m - m^T| = " +
                                            std::to_string(asym) + ")");
  }
}

// Clamps small negative eigenvalues to zero; rejects clearly indefinite input.
Eigen::VectorXd clamp_eigenvalues(const Eigen::VectorXd& values, const char* what) {
  const double largest = std::max(values.maxCoeff(), 0.0);
  const double floor = -kEigenClampTolerance * largest;
  Eigen::VectorXd out = values;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (out[i] < 0.0) {
      if (out[i] < floor) {
        throw Error(ErrorCode::kNotPsd, std::string(what) + " has eigenvalue " +
                                            std::to_string(out[i]) + " below clamp tolerance");
      }
      out[i] = 0.0;
    }
  }
  return out;
}

double sum_sqrt_eigenvalues(const Eigen::MatrixXd& symmetric, const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNotPsd, std::string("eigendecomposition of ") + what + " did not converge");
  }
  return clamp_eigenvalues(solver.eigenvalues(), what).cwiseSqrt().sum();
}

}  // namespace

Moments compute_moments(const FeatureSet& set, std::size_t threads) {
  const std::size_t n = set.count();
  if (n < 2) {
    throw Error(ErrorCode::kTooFewSamples, "moments need at least 2 samples, got " + std::to_string(n));
  }
  const auto d = static_cast<Eigen::Index>(set.dim());
  const std::size_t blocks = (n + kMomentsBlockRows - 1) / kMomentsBlockRows;

  std::vector<Eigen::VectorXd> partial_sums(blocks);
  parallel_for(blocks, threads, [&](std::size_t b) {
    partial_sums[b] = block_view(set, b).cast<double>().colwise().sum().transpose();
  });
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  for (const auto& s : partial_sums) mean += s;
  mean /= static_cast<double>(n);

  // Centered scatter, lower triangle only. Blocks run in waves of `threads`
  // to bound memory; each wave is merged in ascending block order.
  Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(d, d);
  const std::size_t wave = std::max<std::size_t>(threads, 1);
  std::vector<Eigen::MatrixXd> partial(std::min(wave, blocks));
  for (std::size_t first = 0; first < blocks; first += wave) {
    const std::size_t in_wave = std::min(wave, blocks - first);
    parallel_for(in_wave, threads, [&](std::size_t w) {
      const Eigen::MatrixXd centered =
          block_view(set, first + w).cast<double>().rowwise() - mean.transpose();
      partial[w].setZero(d, d);
      partial[w].selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose());
    });
    for (std::size_t w = 0; w < in_wave; ++w) {
      scatter.triangularView<Eigen::Lower>() += partial[w];
    }
  }

  Moments out;
  out.mean = std::move(mean);
  out.cov = scatter.selfadjointView<Eigen::Lower>();
  out.cov /= static_cast<double>(n - 1);
  out.count = n;
  return out;
}

double sqrtm_trace(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, FidMode mode) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "sqrtm_trace needs two square matrices of equal size");
  }
  if (a.size() == 0) return 0.0;
  check_symmetric(a, "first matrix");
  check_symmetric(b, "second matrix");
  const Eigen::MatrixXd sym_a = 0.5 * (a + a.transpose());
  const Eigen::MatrixXd sym_b = 0.5 * (b + b.transpose());

  if (mode == FidMode::kElementwise) {
    return sum_sqrt_eigenvalues(sym_a.cwiseProduct(sym_b), "elementwise product");
  }

  // Positive definite A = L L^T: L^T B L is similar to A^1/2 B A^1/2.
  const Eigen::LLT<Eigen::MatrixXd> llt(sym_a);
  if (llt.info() == Eigen::Success) {
    const Eigen::MatrixXd l = llt.matrixL();
    Eigen::MatrixXd inner = l.transpose() * sym_b * l;
    inner = 0.5 * (inner + inner.transpose()).eval();
    return sum_sqrt_eigenvalues(inner, "A^1/2 B A^1/2");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym_a);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNotPsd, "eigendecomposition of first matrix did not converge");
  }
  const Eigen::VectorXd root = clamp_eigenvalues(solver.eigenvalues(), "first matrix").cwiseSqrt();
  const Eigen::MatrixXd& basis = solver.eigenvectors();
  const Eigen::MatrixXd a_half = basis * root.asDiagonal() * basis.transpose();
  Eigen::MatrixXd inner = a_half * sym_b * a_half;
  inner = 0.5 * (inner + inner.transpose()).eval();
  return sum_sqrt_eigenvalues(inner, "A^1/2 B A^1/2");
}

double fid_from_moments(const Moments& source, const Moments& target, FidMode mode) {
  if (source.dim() != target.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "moment dimensions differ: " +
                                                   std::to_string(source.dim()) + " vs " +
                                                   std::to_string(target.dim()));
  }
  const double mean_term = (source.mean - target.mean).squaredNorm();
  const double trace_term =
      source.cov.trace() + target.cov.trace() - 2.0 * sqrtm_trace(source.cov, target.cov, mode);
  const double value = mean_term + trace_term;
  if (value < 0.0) {
    if (value < -kFidClampTolerance) {
      throw Error(ErrorCode::kNegativeFid, "FID evaluated to " + std::to_string(value));
    }
    return 0.0;
  }
  return value;
}

double fid(const FeatureSet& source, const FeatureSet& target, FidMode mode, std::size_t threads) {
  if (source.dim() != target.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "feature dimensions differ: " +
                                                   std::to_string(source.dim()) + " vs " +
                                                   std::to_string(target.dim()));
  }
  return fid_from_moments(compute_moments(source, threads), compute_moments(target, threads), mode);
}

}  // namespace genmetrics
