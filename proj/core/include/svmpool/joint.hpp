#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "svmpool/dataio.hpp"
#include "svmpool/mil_pool.hpp"
#include "svmpool/types.hpp"

namespace svmpool {

/// One-vs-rest action classifiers over descriptor space.
struct ActionClassifierSet {
  std::vector<Hyperplane> classes;
  std::vector<int> class_ids;

  std::size_t descriptor_dimension() const { return classes.empty() ? 0 : classes.front().dimension(); }
  std::vector<double> scores(std::span<const double> descriptor) const;

  friend bool operator==(const ActionClassifierSet&, const ActionClassifierSet&) = default;
};

/// Trains one binary linear SVM per class id in [0, class_count) with C = c2.
/// Throws MissingClass if some class has no descriptor.
ActionClassifierSet train_action_classifiers(std::span<const std::vector<double>> descriptors,
                                             std::span<const int> labels, int class_count, double c2,
                                             const SolverConfig& solver = {});

/// Argmax of the per-class decision values; ties go to the lowest class id.
int predict(const ActionClassifierSet& classifiers, std::span<const double> descriptor);

enum class VirtualPointScale { kUnitNorm, kBagMeanNorm };

std::string_view virtual_point_scale_name(VirtualPointScale scale);
VirtualPointScale parse_virtual_point_scale(std::string_view name);

struct JointConfig {
  double c2 = 10.0;
  int max_bcd_iters = 3;
  double z_tolerance = 1e-3;
  PoolConfig pool;
  VirtualPointScale virtual_point_scale = VirtualPointScale::kBagMeanNorm;
  int jobs = 1;

  void validate() const;
};

struct BcdIteration {
  double mean_achieved_fraction = 0.0;
  // +inf on the first iteration.
  double z_relative_change = std::numeric_limits<double>::infinity();
  double training_accuracy = 0.0;
};

struct BcdResult {
  std::vector<SVMPDescriptor> descriptors;
  ActionClassifierSet classifiers;
  std::vector<BcdIteration> history;
  bool converged = false;
  // Virtual positive point of each bag at the last pooling step (empty when
  // none had been inserted yet).
  std::vector<FeatureVector> virtual_points;
};

/// Block-coordinate descent: pool every bag, fit the classifiers on the
/// descriptors, then replace each bag's single virtual positive point with its
/// class's rescaled classifier weights and repeat until the classifiers stop
/// moving. Test-time pooling never uses virtual points.
BcdResult bcd_fit(std::span<const FeatureBag> bags, const NegativeBag& negative, int class_count,
                  const JointConfig& config);
BcdResult bcd_fit(const BagDataset& dataset, const JointConfig& config);

// Virtual point for `bag` built from the classifier weights [w; b] of its
// class, scaled per `scale`. Empty if the weights vanish.
FeatureVector make_virtual_point(const Hyperplane& classifier, const FeatureBag& bag, VirtualPointScale scale);

}  // namespace svmpool
