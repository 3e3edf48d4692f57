#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "svmpool/error.hpp"
#include "svmpool/joint.hpp"

using namespace svmpool;

TEST(ActionClassifiers, SingleClassAlwaysPredicted) {
  const std::vector<std::vector<double>> d = {{1.0, 2.0}, {-3.0, 0.5}};
  const std::vector<int> y = {0, 0};
  const auto z = train_action_classifiers(d, y, 1, 10.0);
  EXPECT_EQ(predict(z, std::vector<double>{100.0, -100.0}), 0);
  EXPECT_EQ(predict(z, std::vector<double>{0.0, 0.0}), 0);
}

TEST(ActionClassifiers, TwoClustersFullySeparated) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 0.1);
  std::vector<std::vector<double>> d;
  std::vector<int> y;
  for (int i = 0; i < 20; ++i) {
    const double s = i < 10 ? 1.0 : -1.0;
    d.push_back({s + g(rng), g(rng), g(rng)});
    y.push_back(i < 10 ? 0 : 1);
  }
  const auto z = train_action_classifiers(d, y, 2, 10.0);
  int correct = 0;
  for (std::size_t i = 0; i < d.size(); ++i) correct += predict(z, d[i]) == y[i];
  EXPECT_EQ(correct, 20);
}

TEST(ActionClassifiers, ContradictoryDuplicateForcesAnError) {
  const std::vector<std::vector<double>> d = {{1.0, 0.0}, {1.0, 0.0}, {-1.0, 0.5}};
  const std::vector<int> y = {0, 1, 1};
  const auto z = train_action_classifiers(d, y, 2, 10.0);
  int correct = 0;
  for (std::size_t i = 0; i < d.size(); ++i) correct += predict(z, d[i]) == y[i];
  EXPECT_LE(correct, 2);
}

TEST(ActionClassifiers, MissingClass) {
  const std::vector<std::vector<double>> d = {{1.0}, {2.0}};
  const std::vector<int> y = {0, 2};
  try {
    train_action_classifiers(d, y, 3, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingClass);
  }
}

TEST(Predict, TieGoesToLowerClassId) {
  ActionClassifierSet z;
  z.classes = {Hyperplane{{1.0, 0.0}, 0.0}, Hyperplane{{-1.0, 0.0}, 0.0}};
  z.class_ids = {0, 1};
  EXPECT_EQ(predict(z, std::vector<double>{0.0, 7.0}), 0);
  EXPECT_THROW(predict(z, std::vector<double>{0.0}), Error);
}

TEST(Predict, DeepInsideClassTwo) {
  std::vector<std::vector<double>> d;
  std::vector<int> y;
  const std::vector<std::vector<double>> centers = {{3, 0}, {0, 3}, {-3, -3}};
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 0.3);
  for (int c = 0; c < 3; ++c) {
    for (int k = 0; k < 8; ++k) {
      d.push_back({centers[c][0] + g(rng), centers[c][1] + g(rng)});
      y.push_back(c);
    }
  }
  const auto z = train_action_classifiers(d, y, 3, 10.0);
  EXPECT_EQ(predict(z, std::vector<double>{-10.0, -10.0}), 2);
}

TEST(VirtualPoint, ScaledToBagMeanNorm) {
  FeatureBag bag;
  bag.frames = {{3.0, 0.0}, {0.0, 0.0}};  // augmented norms sqrt(10) and 1
  const Hyperplane z{{1.0, 2.0, 2.0}, 0.7};
  const auto v = make_virtual_point(z, bag, VirtualPointScale::kBagMeanNorm);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_NEAR(norm(v), (std::sqrt(10.0) + 1.0) / 2.0, 1e-12);
  const auto u = make_virtual_point(z, bag, VirtualPointScale::kUnitNorm);
  EXPECT_NEAR(norm(u), 1.0, 1e-12);
  // direction of Z's weights; Z's own bias is not part of it
  EXPECT_NEAR(u[0] * 3.0, 1.0, 1e-12);
}

TEST(BcdFit, SingleIterationEqualsIndependentPooling) {
  const auto ds = centralize(fixtures::small_planted(3, 4, 10, 5)).dataset;
  JointConfig cfg;
  cfg.max_bcd_iters = 1;
  const auto fit = bcd_fit(ds, cfg);
  ASSERT_EQ(fit.descriptors.size(), ds.sequences.size());
  for (std::size_t i = 0; i < ds.sequences.size(); ++i) {
    const auto solo = svmp_pool(ds.sequences[i], ds.negative, cfg.pool);
    EXPECT_EQ(fit.descriptors[i].vector, solo.vector) << i;
  }
  EXPECT_EQ(fit.history.size(), 1u);
}

TEST(BcdFit, HistoryBoundedAndVirtualPointsAugmented) {
  const auto ds = centralize(fixtures::small_planted(3, 4, 10, 6)).dataset;
  JointConfig cfg;
  cfg.max_bcd_iters = 4;
  const auto fit = bcd_fit(ds, cfg);
  EXPECT_LE(fit.history.size(), 4u);
  EXPECT_EQ(fit.virtual_points.size(), ds.sequences.size());
  for (const auto& v : fit.virtual_points) {
    if (!v.empty()) EXPECT_EQ(v.size(), ds.dimension + 1);
  }
  EXPECT_TRUE(std::isinf(fit.history.front().z_relative_change));
}

TEST(BcdFit, Deterministic) {
  const auto ds = centralize(fixtures::small_planted(2, 4, 8, 7)).dataset;
  JointConfig cfg;
  cfg.max_bcd_iters = 3;
  const auto a = bcd_fit(ds, cfg);
  const auto b = bcd_fit(ds, cfg);
  EXPECT_EQ(a.classifiers, b.classifiers);
  for (std::size_t i = 0; i < a.descriptors.size(); ++i) EXPECT_EQ(a.descriptors[i].vector, b.descriptors[i].vector);
}

TEST(BcdFit, ConfigValidation) {
  JointConfig cfg;
  cfg.max_bcd_iters = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = JointConfig{};
  cfg.pool.kernel = KernelSpec::rbf(1.0);
  EXPECT_THROW(cfg.validate(), Error);
  EXPECT_EQ(parse_virtual_point_scale("unit_norm"), VirtualPointScale::kUnitNorm);
  EXPECT_THROW(parse_virtual_point_scale("huge"), Error);
}
