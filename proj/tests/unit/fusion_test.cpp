#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "svmpool/error.hpp"
#include "svmpool/fusion.hpp"
#include "svmpool/joint.hpp"

using namespace svmpool;

namespace {

std::vector<FeatureVector> rows(std::size_t n, std::size_t p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return fixtures::gaussian_points(n, p, 0.0, rng);
}

}  // namespace

TEST(FusedGram, Beta2ZeroIsSvmpKernel) {
  const auto s = rows(6, 4, 1), n = rows(6, 9, 2);
  FusedKernelConfig cfg;
  cfg.beta2 = 0.0;
  const auto k = fused_gram(s, n, cfg);
  const auto ref = gram(KernelSpec::linear(), s);
  EXPECT_EQ(k.entries, ref.entries);
}

TEST(FusedGram, UnitBetasPsdAndLinearInBetas) {
  const auto s = rows(8, 4, 3), n = rows(8, 5, 4);
  FusedKernelConfig one;
  one.nsvmp_kernel = KernelSpec::rbf(0.5);
  const auto k1 = fused_gram(s, n, one);
  EXPECT_TRUE(is_psd(k1, 1e-8));
  FusedKernelConfig two = one;
  two.beta1 = 2.0;
  two.beta2 = 2.0;
  const auto k2 = fused_gram(s, n, two);
  for (std::size_t i = 0; i < k1.entries.size(); ++i) EXPECT_NEAR(k2.entries[i], 2.0 * k1.entries[i], 1e-12);
}

TEST(FusedGram, CountMismatch) {
  const auto s = rows(3, 2, 5), n = rows(4, 2, 6);
  try {
    fused_gram(s, n, FusedKernelConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCountMismatch);
  }
}

TEST(FusedGram, ConfigValidation) {
  FusedKernelConfig c;
  c.beta1 = 0.0;
  c.beta2 = 0.0;
  EXPECT_THROW(c.validate(), Error);
  c.beta1 = -1.0;
  c.beta2 = 2.0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Precomputed, IdentityGramTwoClasses) {
  GramMatrix k;
  k.rows = k.cols = 6;
  k.entries.assign(36, 0.0);
  for (std::size_t i = 0; i < 6; ++i) k(i, i) = 1.0;
  const std::vector<int> y = {0, 1, 0, 1, 0, 1};
  const auto model = train_precomputed(k, y, 2, 10.0, {});
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(predict_precomputed(model, k.row(i)), y[i]);
}

TEST(Precomputed, RejectsIndefiniteGram) {
  GramMatrix k;
  k.rows = k.cols = 2;
  k.entries = {0.0, 1.0, 1.0, 0.0};
  try {
    train_precomputed(k, std::vector<int>{0, 1}, 2, 1.0, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotPsd);
  }
}

TEST(Precomputed, RowLengthChecked) {
  GramMatrix k;
  k.rows = k.cols = 2;
  k.entries = {1.0, 0.0, 0.0, 1.0};
  const auto m = train_precomputed(k, std::vector<int>{0, 1}, 2, 1.0, {});
  EXPECT_THROW(predict_precomputed(m, std::vector<double>{1.0}), Error);
}

TEST(Precomputed, Beta2ZeroMatchesLinearClassifier) {
  std::mt19937_64 rng(9);
  std::vector<FeatureVector> s;
  std::vector<int> y;
  for (int i = 0; i < 30; ++i) {
    auto x = fixtures::gaussian_points(1, 5, 0.0, rng)[0];
    x[static_cast<std::size_t>(i % 3)] += 2.0;
    s.push_back(x);
    y.push_back(i % 3);
  }
  const auto n = rows(30, 7, 10);
  FusedKernelConfig cfg;
  cfg.beta2 = 0.0;
  const std::vector<FeatureVector> s_train(s.begin(), s.begin() + 21), s_test(s.begin() + 21, s.end());
  const std::vector<FeatureVector> n_train(n.begin(), n.begin() + 21), n_test(n.begin() + 21, n.end());
  const std::vector<int> y_train(y.begin(), y.begin() + 21);
  const auto model = train_precomputed(fused_gram(s_train, n_train, cfg), y_train, 3, 10.0, {});
  const auto cross = fused_gram(s_test, n_test, s_train, n_train, cfg);
  const auto z = train_action_classifiers(s_train, y_train, 3, 10.0);
  for (std::size_t r = 0; r < s_test.size(); ++r) EXPECT_EQ(predict_precomputed(model, cross.row(r)), predict(z, s_test[r]));
}

TEST(NsvmpFeatureMap, ShiftThenMap) {
  const std::vector<FeatureVector> train = {{-1.0, 0.0}, {1.0, 2.0}};
  const auto m = NsvmpFeatureMap::fit(train, HomogeneousMapConfig{});
  const auto v = m.apply(std::vector<double>{0.0, 1.0});
  EXPECT_EQ(v.size(), 2u * 7u);
  const auto raw = NsvmpFeatureMap::fit(train, std::nullopt);
  EXPECT_EQ(raw.apply(std::vector<double>{0.0, 1.0}), (FeatureVector{0.5, 0.5}));
}
