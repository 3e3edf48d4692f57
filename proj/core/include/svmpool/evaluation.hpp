#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "svmpool/dataio.hpp"
#include "svmpool/fusion.hpp"
#include "svmpool/joint.hpp"
#include "svmpool/kernel.hpp"
#include "svmpool/mil_pool.hpp"

namespace svmpool {

enum class DescriptorNorm { kNone, kL2 };

std::string_view descriptor_norm_name(DescriptorNorm norm);
DescriptorNorm parse_descriptor_norm(std::string_view name);

/// Scales v to unit Euclidean length; zero vectors are returned unchanged.
FeatureVector l2_normalized(FeatureVector v);

enum class Method { kAveragePool, kMaxPool, kSvmp, kNsvmp, kFused, kJoint };

std::string_view method_name(Method method);
Method parse_method(std::string_view name);
std::vector<Method> all_methods();

struct EvalConfig {
  // Linear pooling settings, shared by SVMP, NSVMP (plus nsvmp_pool_kernel)
  // and joint training.
  PoolConfig pool;
  KernelKind nsvmp_pool_kernel = KernelKind::kRbf;
  // rbf gamma for NSVMP pooling; unset uses the median heuristic on the
  // training frames of each fold.
  std::optional<double> nsvmp_gamma;
  double c2 = 10.0;
  FusedKernelConfig fusion;
  std::optional<HomogeneousMapConfig> homogeneous = HomogeneousMapConfig{};
  // Applied to every descriptor before the classifier stage, so the two
  // fused kernels live on a common scale.
  DescriptorNorm descriptor_norm = DescriptorNorm::kL2;
  int max_bcd_iters = 3;
  double z_tolerance = 1e-3;
  VirtualPointScale virtual_point_scale = VirtualPointScale::kBagMeanNorm;
  int folds = 3;
  std::uint64_t seed = 0;
  int jobs = 1;

  void validate() const;
  JointConfig joint() const;
};

struct MethodReport {
  Method method = Method::kSvmp;
  std::vector<double> fold_accuracies;
  double mean_accuracy = 0.0;
  std::vector<std::vector<int>> confusion;  // [truth][predicted], summed over folds
  std::vector<double> per_class_accuracy;
  std::vector<int> predictions;  // per sequence, from the fold where it was held out
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct EvalResult {
  std::vector<MethodReport> methods;
  std::vector<int> fold_of;  // fold id per sequence
  std::vector<StageTiming> timings;

  const MethodReport& report(Method m) const;
};

/// Stratified fold ids: within each class, a seeded shuffle of its sequences
/// is dealt round-robin over the folds. Existing dataset folds are kept.
std::vector<int> assign_folds(const BagDataset& dataset, int folds, std::uint64_t seed);

/// k-fold cross-validation of the requested pipelines. Per fold the frames are
/// centralized with the training mean, bags are pooled once and shared by all
/// pipelines that need the same descriptors.
EvalResult cross_validate(const BagDataset& dataset, std::span<const Method> methods, const EvalConfig& config);

FeatureVector average_pool(const FeatureBag& bag);
FeatureVector max_pool(const FeatureBag& bag);

}  // namespace svmpool
