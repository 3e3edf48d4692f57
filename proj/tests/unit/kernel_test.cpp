#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "svmpool/error.hpp"
#include "svmpool/kernel.hpp"

using namespace svmpool;

TEST(Kernel, EvalExamples) {
  const std::vector<double> a = {1.0, 2.0}, b = {3.0, 4.0};
  EXPECT_DOUBLE_EQ(kernel_eval(KernelSpec::linear(), a, b), 11.0);
  EXPECT_DOUBLE_EQ(kernel_eval(KernelSpec::rbf(3.7), a, a), 1.0);
  const std::vector<double> o = {0.0, 0.0}, e = {2.0, 0.0};
  EXPECT_NEAR(kernel_eval(KernelSpec::rbf(0.5), o, e), std::exp(-2.0), 1e-15);
  EXPECT_NEAR(kernel_eval(KernelSpec::rbf(0.5), o, e), 0.135335, 1e-6);
  EXPECT_THROW(kernel_eval(KernelSpec::linear(), a, std::vector<double>{1.0}), Error);
}

TEST(Kernel, SpecValidation) {
  EXPECT_THROW(KernelSpec::rbf(0.0).validate(), Error);
  EXPECT_THROW(KernelSpec::rbf(-1.0).validate(), Error);
  EXPECT_NO_THROW(KernelSpec::rbf(1e-3).validate());
  EXPECT_EQ(parse_kernel_kind("rbf"), KernelKind::kRbf);
  EXPECT_EQ(kernel_kind_name(KernelKind::kLinear), "linear");
  EXPECT_THROW(parse_kernel_kind("poly"), Error);
}

TEST(Gram, BasisIsIdentity) {
  const std::vector<FeatureVector> e = {{1.0, 0.0}, {0.0, 1.0}};
  const auto k = gram(KernelSpec::linear(), e);
  EXPECT_EQ(k.rows, 2u);
  EXPECT_EQ(k(0, 0), 1.0);
  EXPECT_EQ(k(0, 1), 0.0);
  EXPECT_EQ(k(1, 0), 0.0);
  EXPECT_EQ(k(1, 1), 1.0);
}

TEST(Gram, RbfDiagonalIsOne) {
  std::mt19937_64 rng(3);
  const auto x = fixtures::gaussian_points(7, 4, 0.0, rng);
  const auto k = gram(KernelSpec::rbf(0.8), x);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(k(i, i), 1.0);
}

TEST(Gram, RandomRbfIsPsd) {
  std::mt19937_64 rng(11);
  const auto x = fixtures::gaussian_points(10, 3, 0.0, rng);
  const auto k = gram(KernelSpec::rbf(1.0), x);
  EXPECT_GE(eigenvalue_range(k).min, -1e-8);
  EXPECT_TRUE(is_psd(k, 1e-8));
}

TEST(Gram, CrossEntriesMatchKernelEval) {
  std::mt19937_64 rng(5);
  const auto x = fixtures::gaussian_points(4, 3, 0.0, rng);
  const auto y = fixtures::gaussian_points(6, 3, 1.0, rng);
  const KernelSpec spec = KernelSpec::rbf(0.3);
  const auto k = gram(spec, x, y);
  ASSERT_EQ(k.rows, 4u);
  ASSERT_EQ(k.cols, 6u);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(k(i, j), kernel_eval(spec, x[i], y[j]));
  }
}

TEST(Gram, NotPsdDetected) {
  GramMatrix k;
  k.rows = k.cols = 2;
  k.entries = {0.0, 1.0, 1.0, 0.0};  // eigenvalues +1, -1
  EXPECT_FALSE(is_psd(k, 1e-6));
}

TEST(MedianHeuristic, KnownConfiguration) {
  // all pairwise squared distances equal 2 -> gamma = 1 / (p * 2)
  const std::vector<FeatureVector> e = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  EXPECT_NEAR(median_heuristic_gamma(e, 0), 1.0 / 6.0, 1e-15);
}

TEST(HomogeneousMap, OutputLength) {
  HomogeneousMapConfig cfg;
  cfg.order = 1;
  EXPECT_EQ(homogeneous_map(cfg, std::vector<double>(5, 0.3)).size(), 15u);
  cfg.order = 3;
  EXPECT_EQ(homogeneous_map(cfg, std::vector<double>(4, 0.3)).size(), 28u);
}

TEST(HomogeneousMap, ZeroCoordinateGivesZeroBlock) {
  HomogeneousMapConfig cfg;
  const auto m = homogeneous_map(cfg, std::vector<double>{0.4, 0.0, 0.7});
  const std::size_t block = 2 * static_cast<std::size_t>(cfg.order) + 1;
  for (std::size_t k = block; k < 2 * block; ++k) EXPECT_EQ(m[k], 0.0);
}

TEST(HomogeneousMap, NegativeInputRejected) {
  try {
    homogeneous_map(HomogeneousMapConfig{}, std::vector<double>{0.1, -0.2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNegativeInput);
  }
}

TEST(HomogeneousMap, Chi2SelfProductWithPeriodPointSix) {
  // x == y with the step 0.6 stays inside 2% (exact chi2 of x with itself is sum x)
  HomogeneousMapConfig cfg;
  cfg.period = 0.6;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> x(6);
    for (auto& v : x) v = u(rng);
    const auto m = homogeneous_map(cfg, x);
    const double exact = homogeneous_kernel(HomogeneousKernel::kChi2, x, x);
    EXPECT_LE(std::abs(dot(m, m) - exact) / exact, 0.02);
  }
}

TEST(HomogeneousMap, DefaultPeriodApproximatesAllFamilies) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::pair<std::vector<double>, std::vector<double>>> pairs;
  for (int t = 0; t < 50; ++t) {
    std::vector<double> x(8), y(8);
    for (auto& v : x) v = u(rng);
    for (auto& v : y) v = u(rng);
    pairs.emplace_back(x, y);
  }
  auto worst = [&](HomogeneousKernel fam, int order) {
    HomogeneousMapConfig cfg;
    cfg.family = fam;
    cfg.order = order;
    double w = 0.0;
    for (const auto& [x, y] : pairs) {
      const double exact = homogeneous_kernel(fam, x, y);
      w = std::max(w, std::abs(dot(homogeneous_map(cfg, x), homogeneous_map(cfg, y)) - exact) / exact);
    }
    return w;
  };
  EXPECT_LE(worst(HomogeneousKernel::kChi2, 3), 0.02);
  EXPECT_LE(worst(HomogeneousKernel::kJensenShannon, 3), 0.05);
  EXPECT_LE(worst(HomogeneousKernel::kJensenShannon, 10), 2e-3);
  // intersection has a heavy-tailed spectrum and converges slowly
  EXPECT_LE(worst(HomogeneousKernel::kIntersection, 3), 0.2);
  EXPECT_LT(worst(HomogeneousKernel::kIntersection, 30), worst(HomogeneousKernel::kIntersection, 3) / 2.0);
}

TEST(HomogeneousMap, ExactKernelValues) {
  const std::vector<double> x = {1.0, 0.5}, y = {1.0, 0.25};
  // chi2: 2xy/(x+y)
  EXPECT_NEAR(homogeneous_kernel(HomogeneousKernel::kChi2, x, y), 1.0 + 2 * 0.125 / 0.75, 1e-15);
  EXPECT_NEAR(homogeneous_kernel(HomogeneousKernel::kIntersection, x, y), 1.25, 1e-15);
  EXPECT_NEAR(homogeneous_kernel(HomogeneousKernel::kJensenShannon, x, x), 1.5, 1e-12);
}

TEST(HomogeneousMap, ConfigValidation) {
  HomogeneousMapConfig cfg;
  cfg.order = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg.order = 2;
  cfg.period = -1.0;
  EXPECT_THROW(cfg.validate(), Error);
  EXPECT_EQ(parse_homogeneous_kernel("js"), HomogeneousKernel::kJensenShannon);
}

TEST(MinMaxShift, FitsTrainingRangeAndClamps) {
  const std::vector<FeatureVector> rows = {{-1.0, 5.0, 2.0}, {1.0, 7.0, 2.0}};
  const auto s = MinMaxShift::fit(rows);
  EXPECT_EQ(s.apply(std::vector<double>{0.0, 6.0, 2.0}), (std::vector<double>{0.5, 0.5, 0.0}));
  EXPECT_EQ(s.apply(std::vector<double>{-3.0, 9.0, 4.0}), (std::vector<double>{0.0, 1.0, 0.0}));
}
