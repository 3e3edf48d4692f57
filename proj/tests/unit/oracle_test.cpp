#include <gtest/gtest.h>

#include "dual_qp_oracle.hpp"

// The oracle itself, on problems with closed-form answers.

TEST(Oracle, TwoPointBoxDual) {
  // points +1 / -1 in 1-D with augmentation: K = x x' + 1 = [[2, 0], [0, 2]]
  oracle::Matrix k = {{2.0, 0.0}, {0.0, 2.0}};
  auto q = oracle::signed_gram(k, {1, -1});
  auto r = oracle::solve_box(q, 10.0);
  EXPECT_NEAR(r.alpha[0], 0.5, 1e-9);
  EXPECT_NEAR(r.alpha[1], 0.5, 1e-9);
  EXPECT_NEAR(r.objective, -0.5, 1e-9);
}

TEST(Oracle, BoxBindsAtC) {
  // identical points with opposite labels: Q singular, optimum hits the box
  oracle::Matrix k = {{1.0, 1.0}, {1.0, 1.0}};
  auto q = oracle::signed_gram(k, {1, -1});
  auto r = oracle::solve_box(q, 0.3);
  EXPECT_NEAR(r.alpha[0], 0.3, 1e-9);
  EXPECT_NEAR(r.alpha[1], 0.3, 1e-9);
}

TEST(Oracle, EqualityConstraintHolds) {
  oracle::Matrix k = {{1.0, 0.2, 0.1}, {0.2, 1.0, 0.3}, {0.1, 0.3, 1.0}};
  std::vector<int> y = {1, 1, -1};
  auto r = oracle::solve_box_equality(oracle::signed_gram(k, y), y, 1.0);
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * r.alpha[i];
  EXPECT_NEAR(s, 0.0, 1e-9);
  EXPECT_LE(r.residual, 1e-9);
}
