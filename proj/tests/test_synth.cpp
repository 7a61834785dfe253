#include <gtest/gtest.h>

#include <cstring>
#include <random>

#include "genmetrics/error.hpp"
#include "genmetrics/moments.hpp"
#include "genmetrics/random.hpp"
#include "genmetrics/synth.hpp"
#include "oracles.hpp"

namespace gm = genmetrics;

TEST(SampleGaussian, ZeroCovarianceRepeatsTheMean) {
  const gm::GaussianSpec spec{Eigen::Vector3d(1.25, -3.0, 0.5), Eigen::MatrixXd::Zero(3, 3), 4, 10};
  const auto set = gm::sample_gaussian(spec);
  for (std::size_t i = 0; i < set.count(); ++i) {
    EXPECT_EQ(set.row(i)[0], 1.25f);
    EXPECT_EQ(set.row(i)[1], -3.0f);
    EXPECT_EQ(set.row(i)[2], 0.5f);
  }
}

TEST(SampleGaussian, Deterministic) {
  std::mt19937_64 rng(1);
  const gm::GaussianSpec spec{Eigen::VectorXd::Ones(5), oracle::random_spd(5, rng), 77, 300};
  const auto a = gm::sample_gaussian(spec);
  const auto b = gm::sample_gaussian(spec);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.label(), "synth:philox4x32-10:box-muller:seed=77");
  auto other = spec;
  other.seed = 78;
  EXPECT_NE(gm::sample_gaussian(other).data()[0], a.data()[0]);
}

TEST(SampleGaussian, FirstValuesArePinned) {
  // Guards the documented generator: Philox4x32-10 keyed by the seed, one
  // stream per row, Box-Muller on 53-bit uniforms.
  const gm::GaussianSpec spec{Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2), 0, 2};
  const auto set = gm::sample_gaussian(spec);
  gm::PhiloxStream stream(0, 1);
  std::vector<double> z(2);
  gm::fill_standard_normal(stream, z);
  EXPECT_EQ(set.row(1)[0], static_cast<float>(z[0]));
  EXPECT_EQ(set.row(1)[1], static_cast<float>(z[1]));
}

TEST(SampleGaussian, UnivariateMomentsAt50k) {
  const gm::GaussianSpec spec{Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1), 123, 50000};
  const auto m = gm::compute_moments(gm::sample_gaussian(spec));
  EXPECT_NEAR(m.mean[0], 0.0, 0.02);
  EXPECT_NEAR(m.cov(0, 0), 1.0, 0.03);
}

TEST(SampleGaussian, CorrelatedCovarianceRecovered) {
  Eigen::Matrix3d cov;
  cov << 2.0, 0.8, -0.3, 0.8, 1.0, 0.1, -0.3, 0.1, 0.5;
  const gm::GaussianSpec spec{Eigen::Vector3d(1, 2, 3), cov, 9, 40000};
  const auto m = gm::compute_moments(gm::sample_gaussian(spec));
  EXPECT_LT((m.cov - cov).cwiseAbs().maxCoeff(), 0.05);
  EXPECT_LT((m.mean - spec.mean).cwiseAbs().maxCoeff(), 0.03);
}

TEST(PsdCholesky, FactorsSingularAndRejectsIndefinite) {
  Eigen::Vector3d v(1, 2, 2);
  const Eigen::MatrixXd rank_one = v * v.transpose();
  const Eigen::MatrixXd l = gm::psd_cholesky(rank_one);
  EXPECT_LT((l * l.transpose() - rank_one).cwiseAbs().maxCoeff(), 1e-12);

  Eigen::Matrix2d indefinite;
  indefinite << 1, 2, 2, 1;
  EXPECT_THROW(gm::psd_cholesky(indefinite), gm::Error);
  EXPECT_THROW(gm::sample_gaussian({Eigen::Vector2d(0, 0), indefinite, 0, 5}), gm::Error);
}

TEST(SampleGaussian, RejectsBadSpecs) {
  EXPECT_THROW(gm::sample_gaussian({Eigen::Vector2d(0, 0), Eigen::Matrix3d::Identity(), 0, 5}), gm::Error);
  EXPECT_THROW(gm::sample_gaussian({Eigen::Vector2d(0, 0), Eigen::Matrix2d::Identity(), 0, 1}), gm::Error);
}

TEST(AnalyticFid, ClosedForms) {
  const gm::GaussianSpec a{Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1), 0, 2};
  gm::GaussianSpec b = a;
  EXPECT_NEAR(gm::analytic_fid(a, b), 0.0, 1e-14);
  b.mean[0] = 1.0;
  EXPECT_NEAR(gm::analytic_fid(a, b), 1.0, 1e-14);

  const gm::GaussianSpec c{Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 4).asDiagonal().toDenseMatrix(), 0, 2};
  const gm::GaussianSpec d{Eigen::Vector2d(1, 2), Eigen::Vector2d(9, 1).asDiagonal().toDenseMatrix(), 0, 2};
  EXPECT_NEAR(gm::analytic_fid(c, d), 10.0, 1e-13);
  EXPECT_THROW(gm::analytic_fid(a, c), gm::Error);
}

TEST(AnalyticFid, SampleFidConverges) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 2; ++trial) {
    gm::GaussianSpec a{Eigen::VectorXd(8), oracle::random_spd(8, rng), rng(), 20000};
    gm::GaussianSpec b{Eigen::VectorXd(8), oracle::random_spd(8, rng), rng(), 20000};
    for (int i = 0; i < 8; ++i) {
      a.mean[i] = normal(rng);
      b.mean[i] = normal(rng);
    }
    const double expected = gm::analytic_fid(a, b);
    EXPECT_NEAR(gm::fid(gm::sample_gaussian(a), gm::sample_gaussian(b)), expected, 0.05 * expected);
  }
}
