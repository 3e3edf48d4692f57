#include "svmpool/ksvm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "svmpool/error.hpp"

namespace svmpool {
namespace {

constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

class SmoSolver {
 public:
  SmoSolver(const GramMatrix& k, std::span<const int> y, double c)
      : n_(k.rows), k_(k), y_(y), c_(c), alpha_(n_, 0.0), grad_(n_, -1.0) {}

  bool upper(std::size_t t) const { return alpha_[t] >= c_; }
  bool lower(std::size_t t) const { return alpha_[t] <= 0.0; }
  double q(std::size_t i, std::size_t j) const { return y_[i] * y_[j] * k_(i, j); }

  // Returns false when optimal within tolerance.
  bool select(double tolerance, std::size_t& out_i, std::size_t& out_j) {
    double gmax = -kInf;
    std::size_t imax = n_;
    for (std::size_t t = 0; t < n_; ++t) {
      if (y_[t] == 1) {
        if (!upper(t) && -grad_[t] >= gmax) { gmax = -grad_[t]; imax = t; }
      } else {
        if (!lower(t) && grad_[t] >= gmax) { gmax = grad_[t]; imax = t; }
      }
    }
    double gmax2 = -kInf;
    double best = kInf;
    std::size_t jmin = n_;
    const std::size_t i = imax;
    for (std::size_t t = 0; t < n_; ++t) {
      if (y_[t] == 1) {
        if (lower(t)) continue;
        const double diff = gmax + grad_[t];
        gmax2 = std::max(gmax2, grad_[t]);
        if (i < n_ && diff > 0.0) {
          double quad = k_(i, i) + k_(t, t) - 2.0 * y_[i] * q(i, t);
          if (quad <= 0.0) quad = kTau;
          const double obj = -(diff * diff) / quad;
          if (obj <= best) { best = obj; jmin = t; }
        }
      } else {
        if (upper(t)) continue;
        const double diff = gmax - grad_[t];
        gmax2 = std::max(gmax2, -grad_[t]);
        if (i < n_ && diff > 0.0) {
          double quad = k_(i, i) + k_(t, t) + 2.0 * y_[i] * q(i, t);
          if (quad <= 0.0) quad = kTau;
          const double obj = -(diff * diff) / quad;
          if (obj <= best) { best = obj; jmin = t; }
        }
      }
    }
    violation_ = (gmax == -kInf || gmax2 == -kInf) ? 0.0 : gmax + gmax2;
    if (violation_ < tolerance || jmin == n_ || i == n_) return false;
    out_i = i;
    out_j = jmin;
    return true;
  }

  void update(std::size_t i, std::size_t j) {
    const double old_i = alpha_[i];
    const double old_j = alpha_[j];
    double& ai = alpha_[i];
    double& aj = alpha_[j];
    const double qij = q(i, j);
    if (y_[i] != y_[j]) {
      double quad = k_(i, i) + k_(j, j) + 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad_[i] - grad_[j]) / quad;
      const double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0.0) {
        if (aj < 0.0) { aj = 0.0; ai = diff; }
      } else {
        if (ai < 0.0) { ai = 0.0; aj = -diff; }
      }
      if (diff > 0.0) {
        if (ai > c_) { ai = c_; aj = c_ - diff; }
      } else {
        if (aj > c_) { aj = c_; ai = c_ + diff; }
      }
    } else {
      double quad = k_(i, i) + k_(j, j) - 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad_[i] - grad_[j]) / quad;
      const double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > c_) {
        if (ai > c_) { ai = c_; aj = sum - c_; }
      } else {
        if (aj < 0.0) { aj = 0.0; ai = sum; }
      }
      if (sum > c_) {
        if (aj > c_) { aj = c_; ai = sum - c_; }
      } else {
        if (ai < 0.0) { ai = 0.0; aj = sum; }
      }
    }
    const double di = ai - old_i;
    const double dj = aj - old_j;
    for (std::size_t t = 0; t < n_; ++t) grad_[t] += q(i, t) * di + q(j, t) * dj;
  }

  double rho() const {
    double ub = kInf;
    double lb = -kInf;
    double sum_free = 0.0;
    std::size_t n_free = 0;
    for (std::size_t t = 0; t < n_; ++t) {
      const double yg = y_[t] * grad_[t];
      if (upper(t)) {
        if (y_[t] == -1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
      } else if (lower(t)) {
        if (y_[t] == 1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
      } else {
        ++n_free;
        sum_free += yg;
      }
    }
    if (n_free > 0) return sum_free / static_cast<double>(n_free);
    if (ub == kInf) return lb == -kInf ? 0.0 : lb;
    if (lb == -kInf) return ub;
    return 0.5 * (ub + lb);
  }

  double objective() const {
    double v = 0.0;
    for (std::size_t t = 0; t < n_; ++t) v += alpha_[t] * (grad_[t] - 1.0);
    return 0.5 * v;
  }

  double violation() const { return violation_; }
  const std::vector<double>& alpha() const { return alpha_; }

 private:
  std::size_t n_;
  const GramMatrix& k_;
  std::span<const int> y_;
  double c_;
  std::vector<double> alpha_;
  std::vector<double> grad_;
  double violation_ = kInf;
};

}  // namespace

DualSolution train_kernel_svm_precomputed(const GramMatrix& k, std::span<const int> labels,
                                          const SolverConfig& config) {
  config.validate();
  if (!k.is_square() || k.rows == 0) fail(ErrorCode::kDimensionMismatch, "kernel SVM needs a square Gram matrix");
  if (labels.size() != k.rows) fail(ErrorCode::kDimensionMismatch, "label count does not match Gram size");
  check_finite(k.entries, "Gram matrix");
  for (int y : labels) {
    if (y != 1 && y != -1) fail(ErrorCode::kInvalidConfig, "labels must be +1 or -1");
  }

  const std::size_t n = k.rows;
  SmoSolver smo(k, labels, config.c);
  const long long max_iter = static_cast<long long>(config.max_passes) * static_cast<long long>(std::max<std::size_t>(n, 1));
  DualSolution out;
  long long iter = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  bool converged = false;
  while (true) {
    if (!smo.select(config.tolerance, i, j)) {
      converged = true;
      break;
    }
    if (iter >= max_iter) break;
    smo.update(i, j);
    ++iter;
  }
  out.iterations = static_cast<int>(iter);
  out.converged = converged;
  out.kkt_violation = smo.violation();
  out.dual_objective = smo.objective();
  out.bias = -smo.rho();
  out.alphas.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    out.alphas[t] = smo.alpha()[t] * labels[t];
    if (std::abs(out.alphas[t]) > 1e-12) ++out.support_count;
  }
  return out;
}

DualSolution train_kernel_svm(std::span<const FeatureVector> positives,
                              std::span<const FeatureVector> negatives, const KernelSpec& spec,
                              const SolverConfig& config) {
  config.validate();
  spec.validate();
  const std::size_t p = check_uniform(positives, "positive bag");
  if (check_uniform(negatives, "negative bag") != p) {
    fail(ErrorCode::kDimensionMismatch, "positive and negative bags differ in dimension");
  }
  std::vector<FeatureVector> points;
  points.reserve(positives.size() + negatives.size());
  points.insert(points.end(), positives.begin(), positives.end());
  points.insert(points.end(), negatives.begin(), negatives.end());
  std::vector<int> labels(points.size(), -1);
  std::fill_n(labels.begin(), positives.size(), 1);
  return train_kernel_svm_precomputed(gram(spec, points), labels, config);
}

double kernel_decision(const DualSolution& solution, std::span<const FeatureVector> training_points,
                       const KernelSpec& spec, std::span<const double> x) {
  if (training_points.size() != solution.alphas.size()) {
    fail(ErrorCode::kOrderingMismatch, "training point count " + std::to_string(training_points.size()) +
                                           " does not match " + std::to_string(solution.alphas.size()) +
                                           " coefficients");
  }
  double f = solution.bias;
  for (std::size_t k = 0; k < training_points.size(); ++k) {
    if (solution.alphas[k] == 0.0) continue;
    f += solution.alphas[k] * kernel_eval(spec, x, training_points[k]);
  }
  return f;
}

double kernel_primal_objective(const DualSolution& solution, const GramMatrix& k,
                               std::span<const int> labels, double c) {
  const std::size_t n = k.rows;
  if (solution.alphas.size() != n || labels.size() != n) {
    fail(ErrorCode::kOrderingMismatch, "solution, Gram and labels differ in size");
  }
  double quad = 0.0;
  double slack = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double f = 0.0;
    for (std::size_t j = 0; j < n; ++j) f += solution.alphas[j] * k(i, j);
    quad += solution.alphas[i] * f;
    slack += std::max(0.0, 1.0 - labels[i] * (f + solution.bias));
  }
  return 0.5 * quad + c * slack;
}

}  // namespace svmpool
