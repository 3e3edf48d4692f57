#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "svmpool/error.hpp"
#include "svmpool/types.hpp"

using namespace svmpool;

TEST(Error, CarriesCodeAndMessage) {
  try {
    fail(ErrorCode::kCorruptFile, "bad crc");
    FAIL() << "fail() returned";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCorruptFile);
    EXPECT_STREQ(e.what(), "bad crc");
  }
}

TEST(Error, CategoriesMapToExitGroups) {
  EXPECT_EQ(error_category(ErrorCode::kInvalidConfig), ErrorCategory::kUsage);
  EXPECT_EQ(error_category(ErrorCode::kInvalidSpec), ErrorCategory::kUsage);
  EXPECT_EQ(error_category(ErrorCode::kNotPsd), ErrorCategory::kNumerical);
  EXPECT_EQ(error_category(ErrorCode::kCorruptFile), ErrorCategory::kData);
  EXPECT_EQ(error_category(ErrorCode::kDimensionMismatch), ErrorCategory::kData);
  EXPECT_EQ(error_code_name(ErrorCode::kNotPsd), "NotPSD");
}

TEST(SolverConfig, RejectsBadValues) {
  SolverConfig c;
  EXPECT_NO_THROW(c.validate());
  c.c = 0.0;
  EXPECT_THROW(c.validate(), Error);
  c = SolverConfig{};
  c.tolerance = -1.0;
  EXPECT_THROW(c.validate(), Error);
  c = SolverConfig{};
  c.max_passes = 0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Types, CheckUniform) {
  std::vector<FeatureVector> ok = {{1, 2}, {3, 4}};
  EXPECT_EQ(check_uniform(ok, "x"), 2u);
  std::vector<FeatureVector> mixed = {{1, 2}, {3}};
  try {
    check_uniform(mixed, "x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
  std::vector<FeatureVector> empty;
  try {
    check_uniform(empty, "x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyBag);
  }
  std::vector<FeatureVector> nan = {{1, std::numeric_limits<double>::quiet_NaN()}};
  try {
    check_uniform(nan, "x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonFiniteInput);
  }
}

TEST(Types, SeededPermutationIsAPermutationAndRepeatable) {
  std::mt19937_64 a(5), b(5);
  auto p = seeded_permutation(20, a);
  auto q = seeded_permutation(20, b);
  EXPECT_EQ(p, q);
  std::sort(p.begin(), p.end());
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p[i], i);
}

TEST(Types, Uniform01InRange) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = uniform01(rng);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Types, HyperplaneDescriptorAppendsBias) {
  Hyperplane h{{1.0, 2.0}, 3.0};
  EXPECT_EQ(h.as_descriptor(), (std::vector<double>{1.0, 2.0, 3.0}));
  EXPECT_EQ(h.dimension(), 2u);
}
