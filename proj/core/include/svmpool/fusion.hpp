#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "svmpool/kernel.hpp"
#include "svmpool/types.hpp"

namespace svmpool {

/// Fixed-weight kernel sum K = beta1 * K_svmp + beta2 * K_nsvmp.
struct FusedKernelConfig {
  double beta1 = 1.0;
  double beta2 = 1.0;
  KernelSpec svmp_kernel = KernelSpec::linear();
  // Applied to NSVMP vectors after NsvmpFeatureMap preprocessing.
  KernelSpec nsvmp_kernel = KernelSpec::linear();

  void validate() const;
};

/// Min-max shift onto [0, 1] followed by the homogeneous kernel map. Both are
/// fitted or configured on the training split and reused for test vectors.
struct NsvmpFeatureMap {
  MinMaxShift shift;
  std::optional<HomogeneousMapConfig> homogeneous;

  static NsvmpFeatureMap fit(std::span<const FeatureVector> training,
                             std::optional<HomogeneousMapConfig> homogeneous);
  FeatureVector apply(std::span<const double> nsvmp) const;
  std::vector<FeatureVector> apply_all(std::span<const FeatureVector> rows) const;
};

/// Entrywise beta1 * K_svmp(a_i, b_j) + beta2 * K_nsvmp(a'_i, b'_j). Row and
/// column sets must pair SVMP and NSVMP vectors in the same order.
GramMatrix fused_gram(std::span<const FeatureVector> svmp_rows, std::span<const FeatureVector> nsvmp_rows,
                      std::span<const FeatureVector> svmp_cols, std::span<const FeatureVector> nsvmp_cols,
                      const FusedKernelConfig& config);
GramMatrix fused_gram(std::span<const FeatureVector> svmp, std::span<const FeatureVector> nsvmp,
                      const FusedKernelConfig& config);

/// One-vs-rest classifiers over a precomputed kernel. Each binary problem is
/// the box-constrained dual of the bias-augmented SVM on K + 1, the kernel
/// counterpart of the linear action classifiers.
struct PrecomputedModel {
  int class_count = 0;
  std::size_t training_size = 0;
  std::vector<std::vector<double>> coefficients;  // per class, alpha_i * y_i
  std::vector<double> biases;                     // per class, sum of coefficients

  std::vector<double> scores(std::span<const double> kernel_row) const;
};

PrecomputedModel train_precomputed(const GramMatrix& k, std::span<const int> labels, int class_count, double c,
                                   const SolverConfig& solver = {});

/// `kernel_row[i]` = K(test, training_i) in fit order. Ties go to the lowest id.
int predict_precomputed(const PrecomputedModel& model, std::span<const double> kernel_row);

}  // namespace svmpool
