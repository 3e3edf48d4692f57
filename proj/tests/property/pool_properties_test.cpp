#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "svmpool/mil_pool.hpp"

using namespace svmpool;

namespace {

struct Case {
  FeatureBag bag;
  NegativeBag negative;
};

Case random_case(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> off(-1.0, 3.0), spread(0.3, 2.0);
  std::uniform_int_distribution<int> n(3, 20), p(1, 6);
  const auto dim = static_cast<std::size_t>(p(rng));
  Case c;
  c.bag = fixtures::cluster_bag(static_cast<std::size_t>(n(rng)), dim, off(rng), spread(rng), rng);
  c.negative = fixtures::cluster_negative(static_cast<std::size_t>(n(rng)), dim, off(rng), spread(rng), rng);
  return c;
}

}  // namespace

// satisfied => fraction >= eta; unsatisfied => the loop ran past the cap.
TEST(PoolProperty, EtaContract) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 120; ++trial) {
    const auto c = random_case(rng);
    PoolConfig cfg;
    cfg.eta = (trial % 3 == 0) ? 0.5 : (trial % 3 == 1 ? 0.7 : 0.9);
    const auto d = svmp_pool(c.bag, c.negative, cfg);
    const double frac = positive_fraction(d.hyperplane(), c.bag);
    EXPECT_DOUBLE_EQ(frac, d.achieved_fraction);
    if (d.satisfied) {
      EXPECT_GE(d.achieved_fraction, cfg.eta);
    } else {
      EXPECT_GE(d.final_c, cfg.c_cap);
    }
    EXPECT_GE(d.solver_calls, 1);
    EXPECT_LE(d.solver_calls, max_solver_calls(cfg));
  }
}

TEST(PoolProperty, KernelEtaContract) {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 40; ++trial) {
    const auto c = random_case(rng);
    PoolConfig cfg;
    cfg.eta = 0.7;
    cfg.kernel = KernelSpec::rbf(0.5);
    const auto d = nsvmp_pool(c.bag, c.negative, cfg);
    if (d.satisfied) {
      EXPECT_GE(d.achieved_fraction, cfg.eta);
    } else {
      EXPECT_GE(d.final_c, cfg.c_cap);
    }
    EXPECT_LE(d.solver_calls, max_solver_calls(cfg));
    EXPECT_EQ(d.vector.size(), c.bag.frames.size() + c.negative.frames.size() + 1);
  }
}

TEST(PoolProperty, SelectionMatchesFraction) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 30; ++trial) {
    const auto c = random_case(rng);
    const auto d = svmp_pool(c.bag, c.negative, PoolConfig{});
    ASSERT_EQ(d.selected.size(), c.bag.frames.size());
    const auto on = static_cast<double>(std::count(d.selected.begin(), d.selected.end(), true));
    EXPECT_DOUBLE_EQ(on / static_cast<double>(c.bag.frames.size()), d.achieved_fraction);
  }
}

// Pooling never mutates the shared negative bag, and batches equal singles.
TEST(PoolProperty, NegativeBagUntouchedAndBatchConsistent) {
  std::mt19937_64 rng(20);
  auto c = random_case(rng);
  std::vector<FeatureBag> bags;
  for (int k = 0; k < 6; ++k) {
    auto b = fixtures::cluster_bag(8, c.bag.frames[0].size(), 1.0 + k * 0.1, 1.0, rng, k % 2);
    bags.push_back(b);
  }
  const NegativeBag before = c.negative;
  const auto all = svmp_pool_all(bags, c.negative, PoolConfig{}, 3);
  EXPECT_EQ(c.negative, before);
  for (std::size_t i = 0; i < bags.size(); ++i) {
    EXPECT_EQ(all[i].vector, svmp_pool(bags[i], c.negative, PoolConfig{}).vector);
  }
}

TEST(PoolProperty, LoopBoundFormula) {
  PoolConfig cfg;
  cfg.c_init = 1.0;
  cfg.growth = 2.0;
  cfg.c_cap = 8.0;  // trains at 2, 4, 8, 16
  EXPECT_EQ(max_solver_calls(cfg), 4);
  cfg.fixed_c = 1.0;
  EXPECT_EQ(max_solver_calls(cfg), 1);
}
