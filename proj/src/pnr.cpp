#include "genmetrics/pnr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "genmetrics/error.hpp"

namespace genmetrics {
namespace {

using FloatRows = Eigen::Map<const Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

FloatRows rows_view(const FeatureSet& set, std::size_t begin, std::size_t rows) {
  return FloatRows(set.data().data() + begin * set.dim(), static_cast<Eigen::Index>(rows),
                   static_cast<Eigen::Index>(set.dim()));
}

std::vector<double> squared_norms(const FeatureSet& set) {
  std::vector<double> out(set.count());
  for (std::size_t i = 0; i < set.count(); ++i) {
    double sum = 0.0;
    for (float v : set.row(i)) sum += static_cast<double>(v) * static_cast<double>(v);
    out[i] = sum;
  }
  return out;
}

double gamma(double n, double unit_roundoff) { return n * unit_roundoff / (1.0 - n * unit_roundoff); }

// Bound on |screened - exact| per unit of (||x||^2 + ||y||^2), doubled for
// slack. Covers the float32 dot product, the double norms and combination,
// and the rounding inside exact_sq_distance itself.
double screening_coefficient(std::size_t dim) {
  const double d = static_cast<double>(dim);
  const double u_float = std::ldexp(1.0, -24);
  const double u_double = std::ldexp(1.0, -53);
  return 2.0 * (gamma(d, u_float) + gamma(d, u_double) + 6.0 * u_double +
                2.0 * gamma(d + 2.0, u_double));
}

// Screened squared distances for one block of query rows against every
// reference row: entry (i, j) is max(0, |q_i|^2 + |r_j|^2 - 2 q_i.r_j) with the
// dot product taken from a float32 GEMM.
class ScreenedBlock {
 public:
  ScreenedBlock(const FeatureSet& queries, std::size_t begin, std::size_t rows,
                const FeatureSet& refs)
      : gram_(rows_view(queries, begin, rows) * rows_view(refs, 0, refs.count()).transpose()) {}

  double approx(std::size_t i, std::size_t j, double query_norm, double ref_norm) const {
    const double value =
        query_norm + ref_norm - 2.0 * static_cast<double>(gram_(static_cast<Eigen::Index>(i),
                                                                static_cast<Eigen::Index>(j)));
    return std::max(value, 0.0);
  }

 private:
  Eigen::MatrixXf gram_;
};

// Outcome of comparing the exact distance against a threshold, given the
// screened value and its error bound.
enum class Screen { kInside, kOutside, kUnsure };

Screen screen(double approx, double bound, double threshold) {
  if (approx + bound < threshold) return Screen::kInside;
  if (approx - bound >= threshold) return Screen::kOutside;
  return Screen::kUnsure;
}

void check_pr_config(const PrConfig& cfg) {
  if (cfg.k < 1) throw Error(ErrorCode::kInvalidConfig, "k must be at least 1");
  if (!(cfg.q > 0.0) || !std::isfinite(cfg.q)) {
    throw Error(ErrorCode::kInvalidConfig, "q must be a positive finite number");
  }
}

}  // namespace

double exact_sq_distance(std::span<const float> x, std::span<const float> y) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double diff = static_cast<double>(x[i]) - static_cast<double>(y[i]);
    sum += diff * diff;
  }
  return sum;
}

std::vector<double> knn_radii(const FeatureSet& set, std::size_t k, std::size_t threads) {
  if (k < 1) throw Error(ErrorCode::kInvalidConfig, "k must be at least 1");
  const std::size_t n = set.count();
  if (n <= k) {
    throw Error(ErrorCode::kTooFewSamples, "k-NN radii with k=" + std::to_string(k) + " need more than " +
                                               std::to_string(k) + " rows, got " + std::to_string(n));
  }
  const std::vector<double> norms = squared_norms(set);
  const double coef = screening_coefficient(set.dim());
  std::vector<double> radii(n);

  const std::size_t blocks = (n + kPrBlockRows - 1) / kPrBlockRows;
  parallel_for(blocks, threads, [&](std::size_t b) {
    const std::size_t begin = b * kPrBlockRows;
    const std::size_t rows = std::min(kPrBlockRows, n - begin);
    const ScreenedBlock block(set, begin, rows, set);

    std::vector<double> approx(n), upper;
    std::vector<double> exact;
    upper.reserve(n);
    for (std::size_t i = 0; i < rows; ++i) {
      const std::size_t self = begin + i;
      upper.clear();
      for (std::size_t j = 0; j < n; ++j) {
        approx[j] = block.approx(i, j, norms[self], norms[j]);
        if (j != self) upper.push_back(approx[j] + coef * (norms[self] + norms[j]));
      }
      // The k-th exact distance cannot exceed the k-th largest upper bound.
      std::nth_element(upper.begin(), upper.begin() + static_cast<std::ptrdiff_t>(k - 1), upper.end());
      const double cutoff = upper[k - 1];

      exact.clear();
      for (std::size_t j = 0; j < n; ++j) {
        if (j == self) continue;
        if (approx[j] - coef * (norms[self] + norms[j]) <= cutoff) {
          exact.push_back(exact_sq_distance(set.row(self), set.row(j)));
        }
      }
      std::nth_element(exact.begin(), exact.begin() + static_cast<std::ptrdiff_t>(k - 1), exact.end());
      radii[self] = exact[k - 1];
    }
  });
  return radii;
}

bool region(std::span<const float> x, const FeatureSet& manifold, std::span<const double> radii,
            double q) {
  if (x.size() != manifold.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "query dimension " + std::to_string(x.size()) +
                                                   " does not match manifold dimension " +
                                                   std::to_string(manifold.dim()));
  }
  if (radii.size() != manifold.count()) {
    throw Error(ErrorCode::kDimensionMismatch, "radii length does not match manifold row count");
  }
  for (std::size_t j = 0; j < manifold.count(); ++j) {
    if (exact_sq_distance(x, manifold.row(j)) < q * radii[j]) return true;
  }
  return false;
}

PrResult precision_recall(const FeatureSet& source, const FeatureSet& target, const PrConfig& cfg,
                          std::size_t threads) {
  check_pr_config(cfg);
  if (source.dim() != target.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "feature dimensions differ: " +
                                                   std::to_string(source.dim()) + " vs " +
                                                   std::to_string(target.dim()));
  }
  const std::vector<double> source_radii = knn_radii(source, cfg.k, threads);
  const std::vector<double> target_radii = knn_radii(target, cfg.k, threads);
  const std::vector<double> source_norms = squared_norms(source);
  const std::vector<double> target_norms = squared_norms(target);
  const double coef = screening_coefficient(source.dim());

  const std::size_t m = source.count();
  const std::size_t n = target.count();
  const std::size_t blocks = (m + kPrBlockRows - 1) / kPrBlockRows;
  std::vector<std::uint8_t> source_inside(m, 0);
  std::vector<std::vector<std::uint8_t>> target_covered(blocks);

  // One pass over the source x target distances answers both directions:
  // source row i is inside the target manifold through some target j, and
  // target j is inside the source manifold through some source i.
  parallel_for(blocks, threads, [&](std::size_t b) {
    const std::size_t begin = b * kPrBlockRows;
    const std::size_t rows = std::min(kPrBlockRows, m - begin);
    const ScreenedBlock block(source, begin, rows, target);
    auto& covered = target_covered[b];
    covered.assign(n, 0);

    for (std::size_t i = 0; i < rows; ++i) {
      const std::size_t si = begin + i;
      const double source_threshold = cfg.q * source_radii[si];
      bool inside = false;
      for (std::size_t j = 0; j < n; ++j) {
        if (inside && covered[j]) continue;
        const double approx = block.approx(i, j, source_norms[si], target_norms[j]);
        const double bound = coef * (source_norms[si] + target_norms[j]);
        double exact = -1.0;
        auto decide = [&](double threshold) {
          switch (screen(approx, bound, threshold)) {
            case Screen::kInside: return true;
            case Screen::kOutside: return false;
            case Screen::kUnsure: break;
          }
          if (exact < 0.0) exact = exact_sq_distance(source.row(si), target.row(j));
          return exact < threshold;
        };
        if (!inside && decide(cfg.q * target_radii[j])) inside = true;
        if (!covered[j] && decide(source_threshold)) covered[j] = 1;
      }
      source_inside[si] = inside ? 1 : 0;
    }
  });

  std::vector<std::uint8_t> target_inside(n, 0);
  for (const auto& covered : target_covered) {
    for (std::size_t j = 0; j < n; ++j) target_inside[j] |= covered[j];
  }
  PrResult out;
  out.precision = static_cast<double>(std::count(source_inside.begin(), source_inside.end(), 1)) /
                  static_cast<double>(m);
  out.recall = static_cast<double>(std::count(target_inside.begin(), target_inside.end(), 1)) /
               static_cast<double>(n);
  return out;
}

}  // namespace genmetrics
