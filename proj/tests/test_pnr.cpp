#include <gtest/gtest.h>

#include <random>

#include "genmetrics/error.hpp"
#include "genmetrics/pnr.hpp"
#include "oracles.hpp"

namespace gm = genmetrics;

namespace {

gm::FeatureSet permuted(const gm::FeatureSet& set, std::mt19937_64& rng) {
  std::vector<std::size_t> order(set.count());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<float> data;
  for (std::size_t i : order) data.insert(data.end(), set.row(i).begin(), set.row(i).end());
  return gm::FeatureSet(std::move(data), set.count(), set.dim());
}

// Copies a few rows onto others so radii of zero and exact ties occur.
gm::FeatureSet with_duplicates(const gm::FeatureSet& set, std::mt19937_64& rng) {
  std::vector<float> data(set.data().begin(), set.data().end());
  const std::size_t d = set.dim();
  for (int k = 0; k < 3; ++k) {
    const std::size_t from = rng() % set.count(), to = rng() % set.count();
    std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(from * d), d,
                data.begin() + static_cast<std::ptrdiff_t>(to * d));
  }
  return gm::FeatureSet(std::move(data), set.count(), d);
}

}  // namespace

TEST(KnnRadii, ThreePointsOnALine) {
  const auto radii = gm::knn_radii(oracle::from_rows({{0}, {1}, {3}}), 1);
  EXPECT_EQ(radii, (std::vector<double>{1, 1, 4}));
}

TEST(KnnRadii, DuplicatePointsHaveZeroRadius) {
  const auto radii = gm::knn_radii(oracle::from_rows({{0.3f, 1}, {5, 5}, {0.3f, 1}, {-2, 7}}), 1);
  EXPECT_EQ(radii[0], 0.0);
  EXPECT_EQ(radii[2], 0.0);
  EXPECT_GT(radii[1], 0.0);
}

TEST(KnnRadii, UnitSquareCorners) {
  const auto square = oracle::from_rows({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
  EXPECT_EQ(gm::knn_radii(square, 1), (std::vector<double>{1, 1, 1, 1}));
  EXPECT_EQ(gm::knn_radii(square, 2), (std::vector<double>{1, 1, 1, 1}));
  EXPECT_EQ(gm::knn_radii(square, 3), (std::vector<double>{2, 2, 2, 2}));
}

TEST(KnnRadii, NeedsMoreThanKRows) {
  const auto set = oracle::from_rows({{0}, {1}, {3}});
  EXPECT_THROW(gm::knn_radii(set, 3), gm::Error);
  EXPECT_THROW(gm::knn_radii(set, 0), gm::Error);
  EXPECT_NO_THROW(gm::knn_radii(set, 2));
}

TEST(KnnRadii, MatchesBruteForceAcrossBlocks) {
  std::mt19937_64 rng(41);
  const auto set = with_duplicates(oracle::random_set(700, 20, 5), rng);
  for (std::size_t k : {1, 3, 10}) {
    EXPECT_EQ(gm::knn_radii(set, k, 3), oracle::knn_radii(set, k)) << "k=" << k;
  }
}

TEST(KnnRadii, ScreeningSurvivesLargeOffsets) {
  // Norms dwarf pairwise distances, so the Gram expansion cancels heavily
  // and most decisions fall back to exact distances.
  std::mt19937_64 rng(2);
  const auto set = with_duplicates(oracle::random_set(200, 300, 9, 500.0, 0.01), rng);
  EXPECT_EQ(gm::knn_radii(set, 3), oracle::knn_radii(set, 3));
}

TEST(Region, LineExamples) {
  const auto f = oracle::from_rows({{0, 0}, {1, 0}, {2, 0}});
  const auto radii = gm::knn_radii(f, 1);
  const std::vector<float> near{0.5f, 0}, far{50, 0}, on{1, 0};
  EXPECT_TRUE(gm::region(near, f, radii, 1.0));
  EXPECT_FALSE(gm::region(far, f, radii, 1.0));
  EXPECT_TRUE(gm::region(on, f, radii, 1.0));
  EXPECT_THROW(gm::region(std::vector<float>{1, 2, 3}, f, radii, 1.0), gm::Error);
}

TEST(Region, AnyNeighbourNotJustTheClosest) {
  // Radii {1, 1, 81}. For x = 5 the closest point is 1 (distance 16, outside
  // its ball) but 10 (distance 25) accepts it.
  const auto f = oracle::from_rows({{0}, {1}, {10}});
  const auto radii = gm::knn_radii(f, 1);
  ASSERT_EQ(radii, (std::vector<double>{1, 1, 81}));
  const std::vector<float> x{5};

  std::size_t closest = 0;
  for (std::size_t j = 1; j < f.count(); ++j) {
    if (gm::exact_sq_distance(x, f.row(j)) < gm::exact_sq_distance(x, f.row(closest))) closest = j;
  }
  ASSERT_EQ(closest, 1u);
  EXPECT_FALSE(gm::exact_sq_distance(x, f.row(closest)) < radii[closest]);
  EXPECT_TRUE(gm::region(x, f, radii, 1.0));

  const auto source = oracle::from_rows({{5}, {5.5f}});
  EXPECT_EQ(gm::precision_recall(source, f, {1, 1.0}).precision, 1.0);
}

TEST(PrecisionRecall, IdenticalSmallSet) {
  const auto set = oracle::from_rows({{0, 0}, {2, 0}, {0, 2}});
  const auto pr = gm::precision_recall(set, set, {1, 1.0});
  EXPECT_EQ(pr.precision, 1.0);
  EXPECT_EQ(pr.recall, 1.0);
}

TEST(PrecisionRecall, DisjointManifolds) {
  const auto t = oracle::random_set(50, 4, 1);
  std::vector<float> shifted(t.data().begin(), t.data().end());
  for (float& v : shifted) v += 1000.0f;
  const auto pr = gm::precision_recall(gm::FeatureSet(shifted, 50, 4), t);
  EXPECT_EQ(pr.precision, 0.0);
  EXPECT_EQ(pr.recall, 0.0);
}

TEST(PrecisionRecall, DuplicatesAcceptNothingAtQOne) {
  // Both points of the target are the same, so both radii are 0 and the
  // strict inequality rejects even an exact match.
  const auto t = oracle::from_rows({{1, 1}, {1, 1}});
  const auto s = oracle::from_rows({{1, 1}, {3, 3}});
  EXPECT_EQ(gm::precision_recall(s, t, {1, 1.0}).precision, 0.0);
}

TEST(PrecisionRecall, MatchesBruteForce) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> shift(-0.5, 0.5);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t m = 4 + rng() % 61, n = 4 + rng() % 61, d = 1 + rng() % 24;
    auto s = oracle::random_set(m, d, rng(), shift(rng));
    auto t = oracle::random_set(n, d, rng());
    if (trial % 3 == 0) {
      s = with_duplicates(s, rng);
      t = with_duplicates(t, rng);
    }
    for (std::size_t k : {1, 3}) {
      for (double q : {0.5, 1.0, 2.0}) {
        const auto got = gm::precision_recall(s, t, {k, q}, 2);
        const auto [p, r] = oracle::precision_recall(s, t, k, q);
        ASSERT_EQ(got.precision, p) << "trial " << trial << " k=" << k << " q=" << q;
        ASSERT_EQ(got.recall, r) << "trial " << trial << " k=" << k << " q=" << q;
      }
    }
  }
}

TEST(PrecisionRecall, SwapExchangesPrecisionAndRecall) {
  const auto s = oracle::random_set(300, 10, 3, 0.2);
  const auto t = oracle::random_set(280, 10, 4);
  const auto st = gm::precision_recall(s, t);
  const auto ts = gm::precision_recall(t, s);
  EXPECT_EQ(st.precision, ts.recall);
  EXPECT_EQ(st.recall, ts.precision);
}

TEST(PrecisionRecall, MonotoneInQ) {
  const auto s = oracle::random_set(200, 6, 5, 0.4);
  const auto t = oracle::random_set(220, 6, 6);
  gm::PrResult previous{0.0, 0.0};
  for (double q : {0.25, 0.5, 0.9, 1.0, 1.5, 2.0, 4.0}) {
    const auto pr = gm::precision_recall(s, t, {3, q});
    EXPECT_GE(pr.precision, previous.precision);
    EXPECT_GE(pr.recall, previous.recall);
    previous = pr;
  }
}

TEST(PrecisionRecall, InvariantUnderRowPermutation) {
  std::mt19937_64 rng(9);
  const auto s = oracle::random_set(300, 8, 7, 0.3);
  const auto t = oracle::random_set(300, 8, 8);
  const auto ref = gm::precision_recall(s, t);
  const auto got = gm::precision_recall(permuted(s, rng), permuted(t, rng));
  EXPECT_EQ(got.precision, ref.precision);
  EXPECT_EQ(got.recall, ref.recall);
}

TEST(PrecisionRecall, BitIdenticalAcrossThreadCounts) {
  const auto s = oracle::random_set(900, 16, 11, 0.2);
  const auto t = oracle::random_set(800, 16, 12);
  const auto ref = gm::precision_recall(s, t, {3, 1.0}, 1);
  for (std::size_t threads : {2, 4, 8}) {
    const auto pr = gm::precision_recall(s, t, {3, 1.0}, threads);
    EXPECT_EQ(pr.precision, ref.precision);
    EXPECT_EQ(pr.recall, ref.recall);
  }
}

TEST(PrecisionRecall, ConfigValidation) {
  const auto s = oracle::random_set(10, 3, 1);
  EXPECT_THROW(gm::precision_recall(s, s, {0, 1.0}), gm::Error);
  EXPECT_THROW(gm::precision_recall(s, s, {3, 0.0}), gm::Error);
  EXPECT_THROW(gm::precision_recall(s, s, {3, -1.0}), gm::Error);
  EXPECT_THROW(gm::precision_recall(s, s, {10, 1.0}), gm::Error);
  EXPECT_THROW(gm::precision_recall(s, oracle::random_set(10, 4, 2)), gm::Error);
}
