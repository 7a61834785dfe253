#pragma once

// Brute-force reference implementations used only by the tests. None of
// these share code with the library paths they check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "genmetrics/feature_set.hpp"

namespace oracle {

inline genmetrics::FeatureSet random_set(std::size_t n, std::size_t d, std::uint64_t seed,
                                         double shift = 0.0, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<float> data(n * d);
  for (float& v : data) v = static_cast<float>(shift + scale * normal(rng));
  return genmetrics::FeatureSet(std::move(data), n, d, "random");
}

inline genmetrics::FeatureSet from_rows(const std::vector<std::vector<float>>& rows) {
  std::vector<float> data;
  for (const auto& r : rows) data.insert(data.end(), r.begin(), r.end());
  return genmetrics::FeatureSet(std::move(data), rows.size(), rows.front().size(), "rows");
}

/// Random symmetric positive definite matrix G G^T / d + ridge I.
inline Eigen::MatrixXd random_spd(Eigen::Index d, std::mt19937_64& rng, double ridge = 0.1) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(d, d);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = normal(rng);
  Eigen::MatrixXd out = g * g.transpose() / static_cast<double>(d);
  out += ridge * Eigen::MatrixXd::Identity(d, d);
  return 0.5 * (out + out.transpose());
}

/// Tr((a b)^{1/2}) from the eigenvalues of the full, non-symmetric product
/// using the general (Hessenberg QR) eigensolver.
inline double product_sqrt_trace_general(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a * b, false);
  double sum = 0.0;
  for (const std::complex<double>& ev : solver.eigenvalues()) sum += std::sqrt(std::max(ev.real(), 0.0));
  return sum;
}

/// Tr(m^{1/2}) by the Denman-Beavers iteration: Y -> m^{1/2}, Z -> m^{-1/2}.
inline double denman_beavers_sqrt_trace(const Eigen::MatrixXd& m, int iterations = 60) {
  Eigen::MatrixXd y = m;
  Eigen::MatrixXd z = Eigen::MatrixXd::Identity(m.rows(), m.cols());
  for (int i = 0; i < iterations; ++i) {
    const Eigen::MatrixXd y_next = 0.5 * (y + z.inverse());
    const Eigen::MatrixXd z_next = 0.5 * (z + y.inverse());
    y = y_next;
    z = z_next;
  }
  return y.trace();
}

inline double dot(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double kernel(const std::vector<double>& x, const std::vector<double>& y) {
  return std::pow(dot(x, y) / static_cast<double>(x.size()) + 1.0, 3);
}

/// Literal double loop over the unbiased MMD^2 expression.
inline double naive_kid(const std::vector<std::vector<double>>& s,
                        const std::vector<std::vector<double>>& t) {
  const double m = static_cast<double>(s.size());
  double within = 0.0, cross = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (i == j) continue;
      within += kernel(s[i], s[j]) + kernel(t[i], t[j]);
    }
  }
  for (const auto& x : s) {
    for (const auto& y : t) cross += kernel(x, y);
  }
  return within / (m * (m - 1.0)) - 2.0 * cross / (m * m);
}

/// Same coordinate order and precision as the library's exact distance, so
/// membership decisions can be compared bit for bit.
inline double sq_dist(const genmetrics::FeatureSet& a, std::size_t i, const genmetrics::FeatureSet& b,
                      std::size_t j) {
  const auto x = a.row(i);
  const auto y = b.row(j);
  double sum = 0.0;
  for (std::size_t c = 0; c < x.size(); ++c) {
    const double diff = static_cast<double>(x[c]) - static_cast<double>(y[c]);
    sum += diff * diff;
  }
  return sum;
}

/// k-th nearest neighbour distance by a full sort of (distance, index).
inline std::vector<double> knn_radii(const genmetrics::FeatureSet& set, std::size_t k) {
  std::vector<double> out(set.count());
  for (std::size_t i = 0; i < set.count(); ++i) {
    std::vector<std::pair<double, std::size_t>> dists;
    for (std::size_t j = 0; j < set.count(); ++j) {
      if (j != i) dists.emplace_back(sq_dist(set, i, set, j), j);
    }
    std::sort(dists.begin(), dists.end());
    out[i] = dists[k - 1].first;
  }
  return out;
}

inline std::pair<double, double> precision_recall(const genmetrics::FeatureSet& s,
                                                  const genmetrics::FeatureSet& t, std::size_t k,
                                                  double q) {
  const auto rs = oracle::knn_radii(s, k);
  const auto rt = oracle::knn_radii(t, k);
  auto inside = [&](const genmetrics::FeatureSet& a, std::size_t i, const genmetrics::FeatureSet& f,
                    const std::vector<double>& r) {
    for (std::size_t j = 0; j < f.count(); ++j) {
      if (sq_dist(a, i, f, j) < q * r[j]) return true;
    }
    return false;
  };
  std::size_t p = 0, rec = 0;
  for (std::size_t i = 0; i < s.count(); ++i) p += inside(s, i, t, rt);
  for (std::size_t j = 0; j < t.count(); ++j) rec += inside(t, j, s, rs);
  return {static_cast<double>(p) / static_cast<double>(s.count()),
          static_cast<double>(rec) / static_cast<double>(t.count())};
}

}  // namespace oracle
