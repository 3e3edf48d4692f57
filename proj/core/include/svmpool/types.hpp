#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace svmpool {

// A frame-level (or descriptor-level) feature vector in R^p.
using FeatureVector = std::vector<double>;

/// Linear decision boundary w.x + b. The (p+1)-vector [w; b] is the SVMP
/// descriptor of the bag the hyperplane was fitted to.
struct Hyperplane {
  std::vector<double> weights;
  double bias = 0.0;

  std::size_t dimension() const { return weights.size(); }
  std::vector<double> as_descriptor() const;

  friend bool operator==(const Hyperplane&, const Hyperplane&) = default;
};

struct SolverConfig {
  double c = 1.0;
  double tolerance = 1e-4;
  int max_passes = 1000;
  std::uint64_t shuffle_seed = 0;
  // Folds the bias into the weight vector via a constant 1.0 coordinate.
  // When false the linear solver fits a hyperplane through the origin.
  bool augment_bias = true;

  void validate() const;
};

struct TrainStats {
  int passes_used = 0;
  double primal_objective = 0.0;
  double total_slack = 0.0;
  bool converged = false;
};

double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

// Throws DimensionMismatch / NonFiniteInput / EmptyBag as appropriate and
// returns the shared dimension.
std::size_t check_uniform(std::span<const FeatureVector> rows, const char* what);
void check_finite(std::span<const double> values, const char* what);

// Fisher-Yates with raw mt19937_64 draws so the order does not depend on the
// standard library's distribution implementations.
void seeded_shuffle(std::span<std::size_t> indices, std::mt19937_64& rng);
std::vector<std::size_t> seeded_permutation(std::size_t n, std::mt19937_64& rng);
double uniform01(std::mt19937_64& rng);
double standard_normal(std::mt19937_64& rng);

}  // namespace svmpool
