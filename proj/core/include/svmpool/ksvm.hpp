#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "svmpool/kernel.hpp"
#include "svmpool/types.hpp"

namespace svmpool {

/// Kernel SVM dual. `alphas[k]` is the signed coefficient alpha_k * y_k over
/// the fit ordering (positive frames in bag order, then negative frames).
struct DualSolution {
  std::vector<double> alphas;
  double bias = 0.0;
  std::size_t support_count = 0;
  double dual_objective = 0.0;  // 1/2 a'Qa - e'a with unsigned a
  double kkt_violation = 0.0;   // max_{up} -yG - min_{low} -yG at termination
  int iterations = 0;
  bool converged = false;
};

/// SMO with second-order working-set selection. The bias is free (not
/// regularized) and enforced through sum(alphas) == 0. Deterministic: the
/// working-set rule has no random component.
DualSolution train_kernel_svm(std::span<const FeatureVector> positives,
                              std::span<const FeatureVector> negatives, const KernelSpec& spec,
                              const SolverConfig& config);

// Same solver over a precomputed square kernel; labels in {+1, -1}.
DualSolution train_kernel_svm_precomputed(const GramMatrix& k, std::span<const int> labels,
                                          const SolverConfig& config);

double kernel_decision(const DualSolution& solution, std::span<const FeatureVector> training_points,
                       const KernelSpec& spec, std::span<const double> x);

// Primal value 1/2 sum_ij a_i a_j K_ij + C sum max(0, 1 - y_i f(x_i)) of a
// solution, with f including the bias.
double kernel_primal_objective(const DualSolution& solution, const GramMatrix& k,
                               std::span<const int> labels, double c);

}  // namespace svmpool
