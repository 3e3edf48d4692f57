#include "svmpool/svm_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "svmpool/error.hpp"

namespace svmpool {
namespace {

double projected_gradient(double g, double alpha, double c) {
  if (alpha <= 0.0) return std::min(g, 0.0);
  if (alpha >= c) return std::max(g, 0.0);
  return g;
}

std::vector<int> stacked_labels(std::size_t n_pos, std::size_t n_neg) {
  std::vector<int> y(n_pos + n_neg, -1);
  std::fill_n(y.begin(), n_pos, 1);
  return y;
}

std::vector<FeatureVector> stacked_points(std::span<const FeatureVector> positives,
                                          std::span<const FeatureVector> negatives) {
  std::vector<FeatureVector> pts;
  pts.reserve(positives.size() + negatives.size());
  pts.insert(pts.end(), positives.begin(), positives.end());
  pts.insert(pts.end(), negatives.begin(), negatives.end());
  return pts;
}

}  // namespace

LinearSvmProblem::LinearSvmProblem(std::span<const FeatureVector> points, bool augment_bias)
    : LinearSvmProblem(points, std::vector<double>(augment_bias ? points.size() : 0, 1.0)) {}

LinearSvmProblem::LinearSvmProblem(std::span<const FeatureVector> points,
                                   std::span<const double> augmentation)
    : n_(points.size()),
      augmented_(!augmentation.empty()),
      points_(points.begin(), points.end()),
      augmentation_(augmentation.begin(), augmentation.end()) {
  p_ = check_uniform(points, "training points");
  if (augmented_ && augmentation_.size() != n_) {
    fail(ErrorCode::kDimensionMismatch, "augmentation constants do not match point count");
  }
  check_finite(augmentation_, "augmentation constants");
  gram_.assign(n_ * n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i; j < n_; ++j) {
      double k = dot(points_[i], points_[j]);
      if (augmented_) k += augmentation_[i] * augmentation_[j];
      gram_[i * n_ + j] = k;
      gram_[j * n_ + i] = k;
    }
  }
}

LinearSvmProblem LinearSvmProblem::from_gram(std::span<const double> gram, std::size_t n) {
  if (n == 0) fail(ErrorCode::kEmptyBag, "empty Gram matrix");
  if (gram.size() != n * n) fail(ErrorCode::kDimensionMismatch, "Gram matrix is not n x n");
  check_finite(gram, "Gram matrix");
  LinearSvmProblem problem;
  problem.n_ = n;
  problem.gram_.assign(gram.begin(), gram.end());
  return problem;
}

std::vector<double> LinearSvmProblem::margins(std::span<const double> alphas,
                                              std::span<const int> labels) const {
  std::vector<double> f(n_, 0.0);
  if (has_points()) {
    const Hyperplane h = hyperplane(Solution{std::vector<double>(alphas.begin(), alphas.end()), {}}, labels);
    for (std::size_t i = 0; i < n_; ++i) {
      f[i] = dot(h.weights, points_[i]) + (augmented_ ? h.bias * augmentation_[i] : 0.0);
    }
    return f;
  }
  for (std::size_t j = 0; j < n_; ++j) {
    const double coef = alphas[j] * labels[j];
    if (coef == 0.0) continue;
    for (std::size_t i = 0; i < n_; ++i) f[i] += coef * gram_[j * n_ + i];
  }
  return f;
}

double LinearSvmProblem::residual(std::span<const double> alphas, std::span<const double> f,
                                  std::span<const int> labels, double c) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    const double g = labels[i] * f[i] - 1.0;
    worst = std::max(worst, std::abs(projected_gradient(g, alphas[i], c)));
  }
  return worst;
}

LinearSvmProblem::Solution LinearSvmProblem::solve(std::span<const int> labels,
                                                   const SolverConfig& config) const {
  config.validate();
  if (labels.size() != n_) fail(ErrorCode::kDimensionMismatch, "label count does not match problem size");
  for (int y : labels) {
    if (y != 1 && y != -1) fail(ErrorCode::kInvalidConfig, "labels must be +1 or -1");
  }
  const double c = config.c;
  Solution sol;
  sol.alphas.assign(n_, 0.0);
  std::vector<double> f(n_, 0.0);  // f_i = sum_j alpha_j y_j K_ij
  std::mt19937_64 rng(config.shuffle_seed);
  std::vector<std::size_t> order(n_);
  std::iota(order.begin(), order.end(), std::size_t{0});

  int pass = 0;
  bool converged = false;
  while (pass < config.max_passes) {
    ++pass;
    seeded_shuffle(order, rng);
    double max_violation = 0.0;
    for (std::size_t i : order) {
      double& alpha = sol.alphas[i];
      const double g = labels[i] * f[i] - 1.0;
      const double pg = projected_gradient(g, alpha, c);
      max_violation = std::max(max_violation, std::abs(pg));
      if (std::abs(pg) <= 1e-14) continue;
      const double qii = gram_[i * n_ + i];
      const double updated = qii > 0.0 ? std::clamp(alpha - g / qii, 0.0, c) : (g < 0.0 ? c : 0.0);
      const double delta = (updated - alpha) * labels[i];
      if (delta == 0.0) continue;
      alpha = updated;
      const double* col = &gram_[i * n_];
      for (std::size_t k = 0; k < n_; ++k) f[k] += delta * col[k];
    }
    if (max_violation <= config.tolerance) {
      const auto exact = margins(sol.alphas, labels);
      if (residual(sol.alphas, exact, labels, c) <= config.tolerance) {
        converged = true;
        break;
      }
    }
  }

  const auto fm = margins(sol.alphas, labels);
  double slack = 0.0;
  double wnorm2 = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    slack += std::max(0.0, 1.0 - labels[i] * fm[i]);
  }
  if (has_points()) {
    const Hyperplane h = hyperplane(sol, labels);
    wnorm2 = dot(h.weights, h.weights) + h.bias * h.bias;
  } else {
    for (std::size_t i = 0; i < n_; ++i) wnorm2 += sol.alphas[i] * labels[i] * fm[i];
  }
  sol.stats.passes_used = pass;
  sol.stats.total_slack = slack;
  sol.stats.primal_objective = 0.5 * wnorm2 + c * slack;
  sol.stats.converged = converged;
  return sol;
}

Hyperplane LinearSvmProblem::hyperplane(const Solution& solution, std::span<const int> labels) const {
  if (!has_points()) fail(ErrorCode::kStateMismatch, "kernel-backed problem has no explicit hyperplane");
  Hyperplane h;
  h.weights.assign(p_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const double coef = solution.alphas[i] * labels[i];
    if (coef == 0.0) continue;
    const auto& x = points_[i];
    for (std::size_t k = 0; k < p_; ++k) h.weights[k] += coef * x[k];
    if (augmented_) h.bias += coef * augmentation_[i];
  }
  return h;
}

std::vector<double> LinearSvmProblem::training_decisions(const Solution& solution,
                                                         std::span<const int> labels) const {
  std::vector<double> f(n_, 0.0);
  for (std::size_t j = 0; j < n_; ++j) {
    const double coef = solution.alphas[j] * labels[j];
    if (coef == 0.0) continue;
    for (std::size_t i = 0; i < n_; ++i) f[i] += coef * gram_[j * n_ + i];
  }
  return f;
}

LinearSvmResult train_linear_svm(std::span<const FeatureVector> positives,
                                 std::span<const FeatureVector> negatives,
                                 const SolverConfig& config) {
  config.validate();
  const std::size_t p = check_uniform(positives, "positive bag");
  if (check_uniform(negatives, "negative bag") != p) {
    fail(ErrorCode::kDimensionMismatch, "positive and negative bags differ in dimension");
  }
  const auto points = stacked_points(positives, negatives);
  const auto labels = stacked_labels(positives.size(), negatives.size());
  const LinearSvmProblem problem(points, config.augment_bias);
  auto sol = problem.solve(labels, config);

  LinearSvmResult out;
  out.hyperplane = problem.hyperplane(sol, labels);
  out.stats = sol.stats;
  out.dual.alphas = std::move(sol.alphas);
  out.dual.positive_count = positives.size();
  out.dual.negative_count = negatives.size();
  return out;
}

double decision_value(const Hyperplane& h, std::span<const double> x) {
  if (x.size() != h.weights.size()) {
    fail(ErrorCode::kDimensionMismatch, "decision_value: expected dimension " +
                                            std::to_string(h.weights.size()) + ", got " +
                                            std::to_string(x.size()));
  }
  return dot(h.weights, x) + h.bias;
}

double kkt_residual(const Hyperplane& h, const LinearDualState& dual,
                    std::span<const FeatureVector> positives,
                    std::span<const FeatureVector> negatives, double c) {
  if (dual.positive_count != positives.size() || dual.negative_count != negatives.size() ||
      dual.alphas.size() != positives.size() + negatives.size()) {
    fail(ErrorCode::kStateMismatch, "dual state does not match the data sizes");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < dual.alphas.size(); ++i) {
    const bool pos = i < positives.size();
    const auto& x = pos ? positives[i] : negatives[i - positives.size()];
    const double y = pos ? 1.0 : -1.0;
    const double g = y * decision_value(h, x) - 1.0;
    worst = std::max(worst, std::abs(projected_gradient(g, dual.alphas[i], c)));
  }
  return worst;
}

double augmented_primal_objective(const Hyperplane& h, std::span<const FeatureVector> positives,
                                  std::span<const FeatureVector> negatives, double c) {
  double slack = 0.0;
  for (const auto& x : positives) slack += std::max(0.0, 1.0 - decision_value(h, x));
  for (const auto& x : negatives) slack += std::max(0.0, 1.0 + decision_value(h, x));
  return 0.5 * (dot(h.weights, h.weights) + h.bias * h.bias) + c * slack;
}

}  // namespace svmpool
