#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "svmpool/types.hpp"

namespace svmpool {

/// Dual variables of a soft-margin linear SVM, ordered positives first, then
/// negatives, exactly as passed to train_linear_svm.
struct LinearDualState {
  std::vector<double> alphas;
  std::size_t positive_count = 0;
  std::size_t negative_count = 0;
};

struct LinearSvmResult {
  Hyperplane hyperplane;
  TrainStats stats;
  LinearDualState dual;
};

/// Soft-margin linear SVM via dual coordinate descent.
///
/// With `config.augment_bias` (the default) every point is extended with a
/// constant 1.0 so the bias is the last weight and is regularized with the
/// rest: the objective is 1/2 (|w|^2 + b^2) + C sum(slack). Coordinates are
/// visited in a seeded random permutation each pass, so results are
/// bit-identical for equal inputs and seed.
LinearSvmResult train_linear_svm(std::span<const FeatureVector> positives,
                                 std::span<const FeatureVector> negatives,
                                 const SolverConfig& config);

double decision_value(const Hyperplane& h, std::span<const double> x);

/// Largest projected-gradient violation of the box-constrained dual at
/// `dual`, with gradients evaluated through `h`.
double kkt_residual(const Hyperplane& h, const LinearDualState& dual,
                    std::span<const FeatureVector> positives,
                    std::span<const FeatureVector> negatives, double c);

// Primal objective 1/2 |[w;b]|^2 + C sum max(0, 1 - y f(x)) of an arbitrary
// hyperplane (bias regularized, matching the augmented solver).
double augmented_primal_objective(const Hyperplane& h, std::span<const FeatureVector> positives,
                                  std::span<const FeatureVector> negatives, double c);

/// Box-constrained SVM dual over a cached Gram matrix. Labels are supplied per
/// solve so one problem can serve several one-vs-rest fits or a growing-C loop.
///
/// Rows added with an augmentation constant `a` act as the point [x; a] in
/// the bias-augmented space; ordinary frames use a = 1, a virtual point that
/// already lives in augmented space carries its own last coordinate.
class LinearSvmProblem {
 public:
  struct Solution {
    std::vector<double> alphas;
    TrainStats stats;
  };

  LinearSvmProblem() = default;

  // Point-backed problem. `augment_bias` adds the constant coordinate 1.0.
  LinearSvmProblem(std::span<const FeatureVector> points, bool augment_bias);

  // Point-backed problem with explicit per-row augmentation constants.
  LinearSvmProblem(std::span<const FeatureVector> points, std::span<const double> augmentation);

  // Kernel-backed problem from a square row-major Gram matrix.
  static LinearSvmProblem from_gram(std::span<const double> gram, std::size_t n);

  std::size_t size() const { return n_; }
  bool has_points() const { return !points_.empty(); }
  double gram(std::size_t i, std::size_t j) const { return gram_[i * n_ + j]; }

  /// labels[i] in {+1, -1}.
  Solution solve(std::span<const int> labels, const SolverConfig& config) const;

  // Requires a point-backed problem.
  Hyperplane hyperplane(const Solution& solution, std::span<const int> labels) const;

  // Decision values at the training rows, computed through the Gram matrix.
  std::vector<double> training_decisions(const Solution& solution, std::span<const int> labels) const;

 private:
  double residual(std::span<const double> alphas, std::span<const double> margins,
                  std::span<const int> labels, double c) const;
  std::vector<double> margins(std::span<const double> alphas, std::span<const int> labels) const;

  std::size_t n_ = 0;
  std::size_t p_ = 0;
  bool augmented_ = false;
  std::vector<FeatureVector> points_;
  std::vector<double> augmentation_;
  std::vector<double> gram_;
};

}  // namespace svmpool
