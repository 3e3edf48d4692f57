#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "svmpool/dataio.hpp"
#include "svmpool/kernel.hpp"
#include "svmpool/types.hpp"

namespace svmpool {

struct PoolConfig {
  double eta = 0.9;
  double c_init = 1e-4;
  double growth = 10.0;
  double c_cap = 1e4;
  // Single solve at this C instead of the growth loop.
  std::optional<double> fixed_c;
  SolverConfig solver;  // solver.c is overwritten by the loop
  // Set for the non-linear (NSVMP) path.
  std::optional<KernelSpec> kernel;

  void validate() const;
};

struct PoolDiagnostics {
  bool satisfied = false;
  double final_c = 0.0;
  double achieved_fraction = 0.0;
  std::vector<bool> selected;  // frames with decision value >= 0
  int solver_calls = 0;
  bool solver_converged = false;
};

/// SVMP descriptor [w; b] of a bag plus the growth-loop diagnostics.
struct SVMPDescriptor : PoolDiagnostics {
  std::vector<double> vector;

  Hyperplane hyperplane() const;
};

/// Signed kernel-SVM coefficients over (bag frames, negative frames) followed
/// by the bias.
struct NSVMPDescriptor : PoolDiagnostics {
  std::vector<double> vector;
};

using DecisionFunction = std::function<double(std::span<const double>)>;

/// Share of frames whose decision value is >= 0 (boundary counts as positive).
double positive_fraction(const DecisionFunction& decision, std::span<const FeatureVector> frames);
double positive_fraction(const Hyperplane& h, const FeatureBag& bag);

/// Growing-C MIL pooling with the linear solver: C <- growth * C, train,
/// measure the positive fraction, until it reaches eta or C exceeds c_cap.
///
/// `virtual_point`, when non-empty, is an extra positive point already in the
/// bias-augmented space R^{p+1}; it takes part in training but not in the
/// fraction.
SVMPDescriptor svmp_pool(const FeatureBag& bag, const NegativeBag& negative, const PoolConfig& config,
                         std::span<const double> virtual_point = {});

/// Same loop with the SMO kernel solver; needs config.kernel.
NSVMPDescriptor nsvmp_pool(const FeatureBag& bag, const NegativeBag& negative, const PoolConfig& config);

// Upper bound on solver calls made by the growth loop.
int max_solver_calls(const PoolConfig& config);

std::vector<SVMPDescriptor> svmp_pool_all(std::span<const FeatureBag> bags, const NegativeBag& negative,
                                          const PoolConfig& config, int jobs);
std::vector<NSVMPDescriptor> nsvmp_pool_all(std::span<const FeatureBag> bags, const NegativeBag& negative,
                                            const PoolConfig& config, int jobs);

/// Global mean over the frames of the given training sequences and of the
/// negative bag. Empty `training` means every sequence.
FeatureVector training_mean(const BagDataset& dataset, std::span<const std::size_t> training = {});

/// Subtracts `mean` from every frame, negatives included.
BagDataset centralize(const BagDataset& dataset, std::span<const double> mean);

struct CentralizedDataset {
  BagDataset dataset;
  FeatureVector mean;
};

CentralizedDataset centralize(const BagDataset& dataset);

}  // namespace svmpool
