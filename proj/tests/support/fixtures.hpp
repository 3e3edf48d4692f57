#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "svmpool/dataio.hpp"
#include "svmpool/types.hpp"

namespace fixtures {

using svmpool::FeatureVector;

inline std::vector<FeatureVector> gaussian_points(std::size_t n, std::size_t p, double shift, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<FeatureVector> out(n, FeatureVector(p));
  for (auto& x : out) {
    for (auto& v : x) v = g(rng) + shift;
  }
  return out;
}

// Small dataset for pipeline tests: d classes, few sequences, low dimension.
inline svmpool::BagDataset small_planted(int classes, int per_class, int dim, std::uint64_t seed) {
  svmpool::SyntheticSpec s;
  s.class_count = classes;
  s.sequences_per_class = per_class;
  s.dimension = dim;
  s.seed = seed;
  return svmpool::synthesize(s);
}

// Frames tightly clustered around +offset on the first axis; negatives around -offset.
inline svmpool::FeatureBag cluster_bag(std::size_t n, std::size_t p, double offset, double spread,
                                       std::mt19937_64& rng, int label = 0) {
  std::normal_distribution<double> g(0.0, spread);
  svmpool::FeatureBag bag;
  bag.sequence_id = "bag";
  bag.label = label;
  for (std::size_t i = 0; i < n; ++i) {
    FeatureVector x(p);
    for (auto& v : x) v = g(rng);
    x[0] += offset;
    bag.frames.push_back(std::move(x));
  }
  return bag;
}

inline svmpool::NegativeBag cluster_negative(std::size_t n, std::size_t p, double offset, double spread,
                                             std::mt19937_64& rng) {
  svmpool::NegativeBag neg;
  neg.source_tag = "test";
  neg.frames = cluster_bag(n, p, -offset, spread, rng).frames;
  return neg;
}

}  // namespace fixtures
