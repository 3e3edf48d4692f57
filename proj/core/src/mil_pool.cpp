#include "svmpool/mil_pool.hpp"

#include <cmath>
#include <string>

#include "svmpool/error.hpp"
#include "svmpool/ksvm.hpp"
#include "svmpool/parallel.hpp"
#include "svmpool/svm_core.hpp"

namespace svmpool {

void PoolConfig::validate() const {
  if (!(eta > 0.0 && eta <= 1.0)) fail(ErrorCode::kInvalidConfig, "eta must be in (0, 1]");
  if (!(c_init > 0.0)) fail(ErrorCode::kInvalidConfig, "c_init must be positive");
  if (!(c_cap > 0.0)) fail(ErrorCode::kInvalidConfig, "c_cap must be positive");
  if (!(growth > 1.0)) fail(ErrorCode::kInvalidConfig, "growth must be > 1");
  if (c_init > c_cap) fail(ErrorCode::kInvalidConfig, "c_init must not exceed c_cap");
  if (fixed_c && !(*fixed_c > 0.0)) fail(ErrorCode::kInvalidConfig, "fixed C must be positive");
  SolverConfig probe = solver;
  probe.c = 1.0;
  probe.validate();
  if (kernel) kernel->validate();
}

Hyperplane SVMPDescriptor::hyperplane() const {
  Hyperplane h;
  if (vector.empty()) return h;
  h.weights.assign(vector.begin(), vector.end() - 1);
  h.bias = vector.back();
  return h;
}

double positive_fraction(const DecisionFunction& decision, std::span<const FeatureVector> frames) {
  if (frames.empty()) fail(ErrorCode::kEmptyBag, "positive_fraction of an empty bag");
  std::size_t count = 0;
  for (const auto& f : frames) {
    if (decision(f) >= 0.0) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(frames.size());
}

double positive_fraction(const Hyperplane& h, const FeatureBag& bag) {
  return positive_fraction([&h](std::span<const double> x) { return decision_value(h, x); }, bag.frames);
}

int max_solver_calls(const PoolConfig& config) {
  if (config.fixed_c) return 1;
  int calls = 0;
  double c = config.c_init;
  do {
    c *= config.growth;
    ++calls;
  } while (!(c > config.c_cap));
  return calls;
}

namespace {

void check_bag_pair(const FeatureBag& bag, const NegativeBag& negative) {
  const std::size_t p = check_uniform(bag.frames, "positive bag");
  if (check_uniform(negative.frames, "negative bag") != p) {
    fail(ErrorCode::kDimensionMismatch, "bag '" + bag.sequence_id + "' and the negative bag differ in dimension");
  }
}

// Drives the growth loop; `solve_at(C)` trains and returns the positive
// fraction, leaving its model in the caller's state.
template <typename SolveAt>
void growth_loop(const PoolConfig& config, PoolDiagnostics& diag, SolveAt&& solve_at) {
  if (config.fixed_c) {
    diag.final_c = *config.fixed_c;
    diag.achieved_fraction = solve_at(diag.final_c);
    diag.solver_calls = 1;
  } else {
    double c = config.c_init;
    do {
      c *= config.growth;
      diag.final_c = c;
      diag.achieved_fraction = solve_at(c);
      ++diag.solver_calls;
    } while (diag.achieved_fraction < config.eta && !(c > config.c_cap));
  }
  diag.satisfied = diag.achieved_fraction >= config.eta;
}

std::vector<bool> selection(const DecisionFunction& decision, std::span<const FeatureVector> frames) {
  std::vector<bool> mask(frames.size());
  for (std::size_t k = 0; k < frames.size(); ++k) mask[k] = decision(frames[k]) >= 0.0;
  return mask;
}

}  // namespace

SVMPDescriptor svmp_pool(const FeatureBag& bag, const NegativeBag& negative, const PoolConfig& config,
                         std::span<const double> virtual_point) {
  config.validate();
  check_bag_pair(bag, negative);
  const std::size_t p = bag.frames.front().size();
  const bool augment = config.solver.augment_bias;

  std::vector<FeatureVector> points;
  std::vector<double> constants;
  std::vector<int> labels;
  points.reserve(bag.frames.size() + negative.frames.size() + 1);
  for (const auto& f : bag.frames) {
    points.push_back(f);
    labels.push_back(1);
  }
  if (!virtual_point.empty()) {
    if (!augment) fail(ErrorCode::kInvalidConfig, "a virtual point requires bias augmentation");
    if (virtual_point.size() != p + 1) {
      fail(ErrorCode::kDimensionMismatch, "virtual point must live in R^(p+1): expected " + std::to_string(p + 1) +
                                              ", got " + std::to_string(virtual_point.size()));
    }
    check_finite(virtual_point, "virtual point");
    points.emplace_back(virtual_point.begin(), virtual_point.end() - 1);
    labels.push_back(1);
  }
  for (const auto& f : negative.frames) {
    points.push_back(f);
    labels.push_back(-1);
  }
  if (augment) {
    constants.assign(points.size(), 1.0);
    if (!virtual_point.empty()) constants[bag.frames.size()] = virtual_point.back();
  }
  const LinearSvmProblem problem(points, constants);

  SVMPDescriptor out;
  Hyperplane h;
  bool converged = false;
  auto decision = [&h](std::span<const double> x) { return decision_value(h, x); };
  growth_loop(config, out, [&](double c) {
    SolverConfig solver = config.solver;
    solver.c = c;
    const auto sol = problem.solve(labels, solver);
    h = problem.hyperplane(sol, labels);
    converged = sol.stats.converged;
    return positive_fraction(decision, bag.frames);
  });
  out.solver_converged = converged;
  out.selected = selection(decision, bag.frames);
  out.vector = h.as_descriptor();
  return out;
}

NSVMPDescriptor nsvmp_pool(const FeatureBag& bag, const NegativeBag& negative, const PoolConfig& config) {
  config.validate();
  if (!config.kernel) fail(ErrorCode::kInvalidConfig, "nsvmp_pool needs a kernel");
  check_bag_pair(bag, negative);
  const KernelSpec spec = *config.kernel;

  std::vector<FeatureVector> points(bag.frames);
  points.insert(points.end(), negative.frames.begin(), negative.frames.end());
  std::vector<int> labels(points.size(), -1);
  std::fill_n(labels.begin(), bag.frames.size(), 1);
  const GramMatrix k = gram(spec, points);

  NSVMPDescriptor out;
  DualSolution sol;
  auto decision = [&](std::span<const double> x) { return kernel_decision(sol, points, spec, x); };
  growth_loop(config, out, [&](double c) {
    SolverConfig solver = config.solver;
    solver.c = c;
    sol = train_kernel_svm_precomputed(k, labels, solver);
    return positive_fraction(decision, bag.frames);
  });
  out.solver_converged = sol.converged;
  out.selected = selection(decision, bag.frames);
  out.vector = sol.alphas;
  out.vector.push_back(sol.bias);
  return out;
}

std::vector<SVMPDescriptor> svmp_pool_all(std::span<const FeatureBag> bags, const NegativeBag& negative,
                                          const PoolConfig& config, int jobs) {
  std::vector<SVMPDescriptor> out(bags.size());
  parallel_for(bags.size(), jobs, [&](std::size_t i) { out[i] = svmp_pool(bags[i], negative, config); });
  return out;
}

std::vector<NSVMPDescriptor> nsvmp_pool_all(std::span<const FeatureBag> bags, const NegativeBag& negative,
                                            const PoolConfig& config, int jobs) {
  std::vector<NSVMPDescriptor> out(bags.size());
  parallel_for(bags.size(), jobs, [&](std::size_t i) { out[i] = nsvmp_pool(bags[i], negative, config); });
  return out;
}

FeatureVector training_mean(const BagDataset& dataset, std::span<const std::size_t> training) {
  std::vector<std::size_t> all;
  if (training.empty()) {
    all.resize(dataset.sequences.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    training = all;
  }
  FeatureVector mean(dataset.dimension, 0.0);
  std::size_t count = 0;
  auto add = [&](const FeatureVector& f) {
    if (f.size() != mean.size()) fail(ErrorCode::kDimensionMismatch, "frame dimension differs from dataset");
    for (std::size_t k = 0; k < f.size(); ++k) mean[k] += f[k];
    ++count;
  };
  for (std::size_t i : training) {
    if (i >= dataset.sequences.size()) fail(ErrorCode::kCountMismatch, "training index out of range");
    for (const auto& f : dataset.sequences[i].frames) add(f);
  }
  for (const auto& f : dataset.negative.frames) add(f);
  if (count == 0 || dataset.dimension == 0) fail(ErrorCode::kEmptyDataset, "no frames to average");
  for (auto& v : mean) v /= static_cast<double>(count);
  return mean;
}

BagDataset centralize(const BagDataset& dataset, std::span<const double> mean) {
  if (mean.size() != dataset.dimension) fail(ErrorCode::kDimensionMismatch, "mean dimension differs from dataset");
  BagDataset out = dataset;
  auto shift = [&](FeatureVector& f) {
    for (std::size_t k = 0; k < f.size(); ++k) f[k] -= mean[k];
  };
  for (auto& bag : out.sequences) {
    for (auto& f : bag.frames) shift(f);
  }
  for (auto& f : out.negative.frames) shift(f);
  return out;
}

CentralizedDataset centralize(const BagDataset& dataset) {
  CentralizedDataset out;
  out.mean = training_mean(dataset);
  out.dataset = centralize(dataset, out.mean);
  return out;
}

}  // namespace svmpool
