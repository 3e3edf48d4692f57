#include "svmpool/joint.hpp"

#include <cmath>
#include <string>

#include "svmpool/error.hpp"
#include "svmpool/parallel.hpp"
#include "svmpool/svm_core.hpp"

namespace svmpool {

std::vector<double> ActionClassifierSet::scores(std::span<const double> descriptor) const {
  std::vector<double> s;
  s.reserve(classes.size());
  for (const auto& h : classes) s.push_back(decision_value(h, descriptor));
  return s;
}

ActionClassifierSet train_action_classifiers(std::span<const std::vector<double>> descriptors,
                                             std::span<const int> labels, int class_count, double c2,
                                             const SolverConfig& solver) {
  if (class_count < 1) fail(ErrorCode::kInvalidConfig, "class_count must be >= 1");
  if (descriptors.size() != labels.size()) fail(ErrorCode::kCountMismatch, "descriptor and label counts differ");
  const std::size_t dim = check_uniform(descriptors, "descriptors");
  std::vector<std::size_t> counts(static_cast<std::size_t>(class_count), 0);
  for (int y : labels) {
    if (y < 0 || y >= class_count) fail(ErrorCode::kInvalidConfig, "label out of range");
    ++counts[static_cast<std::size_t>(y)];
  }
  for (int j = 0; j < class_count; ++j) {
    if (counts[static_cast<std::size_t>(j)] == 0) {
      fail(ErrorCode::kMissingClass, "class " + std::to_string(j) + " has no descriptors");
    }
  }

  ActionClassifierSet out;
  for (int j = 0; j < class_count; ++j) out.class_ids.push_back(j);
  if (class_count == 1) {
    out.classes.push_back(Hyperplane{std::vector<double>(dim, 0.0), 1.0});
    return out;
  }
  SolverConfig cfg = solver;
  cfg.c = c2;
  cfg.augment_bias = true;
  const LinearSvmProblem problem(descriptors, true);
  std::vector<int> y(labels.size());
  for (int j = 0; j < class_count; ++j) {
    for (std::size_t i = 0; i < labels.size(); ++i) y[i] = labels[i] == j ? 1 : -1;
    const auto sol = problem.solve(y, cfg);
    out.classes.push_back(problem.hyperplane(sol, y));
  }
  return out;
}

int predict(const ActionClassifierSet& classifiers, std::span<const double> descriptor) {
  if (classifiers.classes.empty()) fail(ErrorCode::kInvalidConfig, "empty classifier set");
  if (descriptor.size() != classifiers.descriptor_dimension()) {
    fail(ErrorCode::kDimensionMismatch, "descriptor dimension " + std::to_string(descriptor.size()) +
                                            " does not match classifiers (" +
                                            std::to_string(classifiers.descriptor_dimension()) + ")");
  }
  std::size_t best = 0;
  double best_score = decision_value(classifiers.classes[0], descriptor);
  for (std::size_t j = 1; j < classifiers.classes.size(); ++j) {
    const double s = decision_value(classifiers.classes[j], descriptor);
    if (s > best_score) {
      best_score = s;
      best = j;
    }
  }
  return classifiers.class_ids[best];
}

std::string_view virtual_point_scale_name(VirtualPointScale scale) {
  return scale == VirtualPointScale::kUnitNorm ? "unit_norm" : "bag_mean_norm";
}

VirtualPointScale parse_virtual_point_scale(std::string_view name) {
  if (name == "unit_norm") return VirtualPointScale::kUnitNorm;
  if (name == "bag_mean_norm") return VirtualPointScale::kBagMeanNorm;
  fail(ErrorCode::kInvalidConfig, "unknown virtual point scale '" + std::string(name) + "'");
}

void JointConfig::validate() const {
  if (!(c2 > 0.0)) fail(ErrorCode::kInvalidConfig, "c2 must be positive");
  if (max_bcd_iters < 1) fail(ErrorCode::kInvalidConfig, "max_bcd_iters must be >= 1");
  if (!(z_tolerance > 0.0)) fail(ErrorCode::kInvalidConfig, "z_tolerance must be positive");
  if (jobs < 1) fail(ErrorCode::kInvalidConfig, "jobs must be >= 1");
  pool.validate();
  if (pool.kernel) fail(ErrorCode::kInvalidConfig, "joint training pools with the linear solver only");
  if (!pool.solver.augment_bias) fail(ErrorCode::kInvalidConfig, "joint training needs bias augmentation");
}

FeatureVector make_virtual_point(const Hyperplane& classifier, const FeatureBag& bag, VirtualPointScale scale) {
  const double znorm = norm(classifier.weights);
  if (!(znorm > 0.0)) return {};
  double target = 1.0;
  if (scale == VirtualPointScale::kBagMeanNorm) {
    double total = 0.0;
    for (const auto& f : bag.frames) total += std::sqrt(dot(f, f) + 1.0);
    target = total / static_cast<double>(bag.frames.size());
  }
  FeatureVector v(classifier.weights);
  const double s = target / znorm;
  for (auto& x : v) x *= s;
  return v;
}

namespace {

std::vector<double> stacked(const ActionClassifierSet& z) {
  std::vector<double> out;
  for (const auto& h : z.classes) {
    out.insert(out.end(), h.weights.begin(), h.weights.end());
    out.push_back(h.bias);
  }
  return out;
}

}  // namespace

BcdResult bcd_fit(std::span<const FeatureBag> bags, const NegativeBag& negative, int class_count,
                  const JointConfig& config) {
  config.validate();
  if (bags.empty()) fail(ErrorCode::kEmptyDataset, "bcd_fit needs at least one bag");
  std::vector<int> labels;
  labels.reserve(bags.size());
  for (const auto& b : bags) labels.push_back(b.label);

  BcdResult out;
  out.virtual_points.assign(bags.size(), {});
  std::vector<double> previous;
  for (int iter = 1; iter <= config.max_bcd_iters; ++iter) {
    out.descriptors.assign(bags.size(), {});
    parallel_for(bags.size(), config.jobs, [&](std::size_t i) {
      out.descriptors[i] = svmp_pool(bags[i], negative, config.pool, out.virtual_points[i]);
    });

    std::vector<std::vector<double>> vecs;
    vecs.reserve(bags.size());
    double frac = 0.0;
    for (const auto& d : out.descriptors) {
      vecs.push_back(d.vector);
      frac += d.achieved_fraction;
    }
    out.classifiers = train_action_classifiers(vecs, labels, class_count, config.c2, config.pool.solver);

    BcdIteration record;
    record.mean_achieved_fraction = frac / static_cast<double>(bags.size());
    std::size_t correct = 0;
    for (std::size_t i = 0; i < vecs.size(); ++i) {
      if (predict(out.classifiers, vecs[i]) == labels[i]) ++correct;
    }
    record.training_accuracy = static_cast<double>(correct) / static_cast<double>(vecs.size());
    auto current = stacked(out.classifiers);
    if (!previous.empty()) {
      double diff = 0.0;
      for (std::size_t k = 0; k < current.size(); ++k) {
        const double d = current[k] - previous[k];
        diff += d * d;
      }
      const double base = norm(previous);
      record.z_relative_change = std::sqrt(diff) / (base > 0.0 ? base : 1.0);
    }
    out.history.push_back(record);
    previous = std::move(current);

    if (record.z_relative_change <= config.z_tolerance) {
      out.converged = true;
      break;
    }
    if (iter == config.max_bcd_iters) break;

    // In-place update: each bag holds exactly one virtual point.
    for (std::size_t i = 0; i < bags.size(); ++i) {
      const auto& z = out.classifiers.classes[static_cast<std::size_t>(labels[i])];
      out.virtual_points[i] = make_virtual_point(z, bags[i], config.virtual_point_scale);
    }
  }
  return out;
}

BcdResult bcd_fit(const BagDataset& dataset, const JointConfig& config) {
  dataset.validate();
  return bcd_fit(dataset.sequences, dataset.negative, dataset.class_count, config);
}

}  // namespace svmpool
