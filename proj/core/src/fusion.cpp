#include "svmpool/fusion.hpp"

#include <cmath>
#include <string>

#include "svmpool/error.hpp"
#include "svmpool/svm_core.hpp"

namespace svmpool {

void FusedKernelConfig::validate() const {
  if (!(beta1 >= 0.0) || !(beta2 >= 0.0) || !(beta1 + beta2 > 0.0)) {
    fail(ErrorCode::kInvalidConfig, "fusion weights must be >= 0 with a positive sum");
  }
  svmp_kernel.validate();
  nsvmp_kernel.validate();
}

NsvmpFeatureMap NsvmpFeatureMap::fit(std::span<const FeatureVector> training,
                                     std::optional<HomogeneousMapConfig> homogeneous) {
  if (homogeneous) homogeneous->validate();
  NsvmpFeatureMap m;
  m.shift = MinMaxShift::fit(training);
  m.homogeneous = homogeneous;
  return m;
}

FeatureVector NsvmpFeatureMap::apply(std::span<const double> nsvmp) const {
  FeatureVector shifted = shift.apply(nsvmp);
  if (!homogeneous) return shifted;
  return homogeneous_map(*homogeneous, shifted);
}

std::vector<FeatureVector> NsvmpFeatureMap::apply_all(std::span<const FeatureVector> rows) const {
  std::vector<FeatureVector> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(apply(r));
  return out;
}

GramMatrix fused_gram(std::span<const FeatureVector> svmp_rows, std::span<const FeatureVector> nsvmp_rows,
                      std::span<const FeatureVector> svmp_cols, std::span<const FeatureVector> nsvmp_cols,
                      const FusedKernelConfig& config) {
  config.validate();
  if (svmp_rows.size() != nsvmp_rows.size() || svmp_cols.size() != nsvmp_cols.size()) {
    fail(ErrorCode::kCountMismatch, "SVMP and NSVMP descriptor lists differ in length");
  }
  GramMatrix a = gram(config.svmp_kernel, svmp_rows, svmp_cols);
  const GramMatrix b = gram(config.nsvmp_kernel, nsvmp_rows, nsvmp_cols);
  for (std::size_t k = 0; k < a.entries.size(); ++k) {
    a.entries[k] = config.beta1 * a.entries[k] + config.beta2 * b.entries[k];
  }
  return a;
}

GramMatrix fused_gram(std::span<const FeatureVector> svmp, std::span<const FeatureVector> nsvmp,
                      const FusedKernelConfig& config) {
  config.validate();
  if (svmp.size() != nsvmp.size()) fail(ErrorCode::kCountMismatch, "SVMP and NSVMP descriptor lists differ in length");
  GramMatrix a = gram(config.svmp_kernel, svmp);
  const GramMatrix b = gram(config.nsvmp_kernel, nsvmp);
  for (std::size_t k = 0; k < a.entries.size(); ++k) {
    a.entries[k] = config.beta1 * a.entries[k] + config.beta2 * b.entries[k];
  }
  return a;
}

std::vector<double> PrecomputedModel::scores(std::span<const double> kernel_row) const {
  if (kernel_row.size() != training_size) {
    fail(ErrorCode::kCountMismatch, "kernel row has " + std::to_string(kernel_row.size()) + " entries, expected " +
                                        std::to_string(training_size));
  }
  std::vector<double> s(coefficients.size(), 0.0);
  for (std::size_t j = 0; j < coefficients.size(); ++j) {
    double v = 0.0;
    const auto& coef = coefficients[j];
    for (std::size_t i = 0; i < training_size; ++i) {
      if (coef[i] != 0.0) v += coef[i] * kernel_row[i];
    }
    s[j] = v + biases[j];
  }
  return s;
}

PrecomputedModel train_precomputed(const GramMatrix& k, std::span<const int> labels, int class_count, double c,
                                   const SolverConfig& solver) {
  if (!k.is_square()) fail(ErrorCode::kCountMismatch, "training Gram matrix must be square");
  if (labels.size() != k.rows) fail(ErrorCode::kCountMismatch, "label count does not match Gram size");
  if (class_count < 1) fail(ErrorCode::kInvalidConfig, "class_count must be >= 1");
  if (!is_psd(k, 1e-6)) fail(ErrorCode::kNotPsd, "training Gram matrix is not positive semi-definite");
  std::vector<std::size_t> counts(static_cast<std::size_t>(class_count), 0);
  for (int y : labels) {
    if (y < 0 || y >= class_count) fail(ErrorCode::kInvalidConfig, "label out of range");
    ++counts[static_cast<std::size_t>(y)];
  }
  for (int j = 0; j < class_count; ++j) {
    if (counts[static_cast<std::size_t>(j)] == 0) {
      fail(ErrorCode::kMissingClass, "class " + std::to_string(j) + " has no training samples");
    }
  }

  PrecomputedModel model;
  model.class_count = class_count;
  model.training_size = k.rows;
  if (class_count == 1) {
    model.coefficients.assign(1, std::vector<double>(k.rows, 0.0));
    model.biases.assign(1, 1.0);
    return model;
  }
  const std::size_t n = k.rows;
  std::vector<double> augmented(k.entries);
  for (auto& v : augmented) v += 1.0;
  const auto problem = LinearSvmProblem::from_gram(augmented, n);
  SolverConfig cfg = solver;
  cfg.c = c;
  std::vector<int> y(n);
  for (int j = 0; j < class_count; ++j) {
    for (std::size_t i = 0; i < n; ++i) y[i] = labels[i] == j ? 1 : -1;
    const auto sol = problem.solve(y, cfg);
    std::vector<double> coef(n);
    double bias = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      coef[i] = sol.alphas[i] * y[i];
      bias += coef[i];
    }
    model.coefficients.push_back(std::move(coef));
    model.biases.push_back(bias);
  }
  return model;
}

int predict_precomputed(const PrecomputedModel& model, std::span<const double> kernel_row) {
  const auto s = model.scores(kernel_row);
  std::size_t best = 0;
  for (std::size_t j = 1; j < s.size(); ++j) {
    if (s[j] > s[best]) best = j;
  }
  return static_cast<int>(best);
}

}  // namespace svmpool
