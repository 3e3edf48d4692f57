#include "svmpool/kernel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "svmpool/error.hpp"

namespace svmpool {

void KernelSpec::validate() const {
  if (kind == KernelKind::kRbf && !(gamma > 0.0 && std::isfinite(gamma))) {
    fail(ErrorCode::kInvalidConfig, "rbf gamma must be positive");
  }
}

std::string_view kernel_kind_name(KernelKind kind) {
  return kind == KernelKind::kLinear ? "linear" : "rbf";
}

KernelKind parse_kernel_kind(std::string_view name) {
  if (name == "linear") return KernelKind::kLinear;
  if (name == "rbf") return KernelKind::kRbf;
  fail(ErrorCode::kInvalidConfig, "unknown kernel '" + std::string(name) + "'");
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(ErrorCode::kDimensionMismatch, "kernel_eval: dimension mismatch");
  switch (spec.kind) {
    case KernelKind::kLinear:
      return dot(x, y);
    case KernelKind::kRbf:
      return std::exp(-spec.gamma * squared_distance(x, y));
  }
  return 0.0;
}

bool GramMatrix::is_symmetric(double tol) const {
  if (!is_square()) return false;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = i + 1; j < cols; ++j) {
      if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
    }
  }
  return true;
}

GramMatrix gram(const KernelSpec& spec, std::span<const FeatureVector> x,
                std::span<const FeatureVector> y) {
  spec.validate();
  const std::size_t p = check_uniform(x, "gram rows");
  if (check_uniform(y, "gram columns") != p) {
    fail(ErrorCode::kDimensionMismatch, "gram: row and column sets differ in dimension");
  }
  GramMatrix k;
  k.rows = x.size();
  k.cols = y.size();
  k.entries.resize(k.rows * k.cols);
  for (std::size_t i = 0; i < k.rows; ++i) {
    for (std::size_t j = 0; j < k.cols; ++j) k(i, j) = kernel_eval(spec, x[i], y[j]);
  }
  return k;
}

GramMatrix gram(const KernelSpec& spec, std::span<const FeatureVector> x) {
  spec.validate();
  check_uniform(x, "gram rows");
  GramMatrix k;
  k.rows = k.cols = x.size();
  k.entries.resize(k.rows * k.cols);
  for (std::size_t i = 0; i < k.rows; ++i) {
    for (std::size_t j = i; j < k.cols; ++j) {
      const double v = kernel_eval(spec, x[i], x[j]);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

EigenvalueRange eigenvalue_range(const GramMatrix& k) {
  if (!k.is_square() || k.rows == 0) fail(ErrorCode::kDimensionMismatch, "eigenvalues need a square matrix");
  Eigen::MatrixXd m(k.rows, k.cols);
  for (std::size_t i = 0; i < k.rows; ++i) {
    for (std::size_t j = 0; j < k.cols; ++j) m(i, j) = 0.5 * (k(i, j) + k(j, i));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

bool is_psd(const GramMatrix& k, double relative_tolerance) {
  const auto range = eigenvalue_range(k);
  const double scale = std::max(std::abs(range.max), 1e-300);
  return range.min >= -relative_tolerance * scale;
}

double median_heuristic_gamma(std::span<const FeatureVector> x, std::uint64_t seed) {
  const std::size_t p = check_uniform(x, "median heuristic input");
  std::vector<std::size_t> idx(x.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  if (idx.size() > 256) {
    std::mt19937_64 rng(seed);
    seeded_shuffle(idx, rng);
    idx.resize(256);
    std::sort(idx.begin(), idx.end());
  }
  std::vector<double> d2;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) d2.push_back(squared_distance(x[idx[a]], x[idx[b]]));
  }
  if (d2.empty()) return 1.0 / static_cast<double>(p);
  auto mid = d2.begin() + static_cast<std::ptrdiff_t>(d2.size() / 2);
  std::nth_element(d2.begin(), mid, d2.end());
  const double median = *mid;
  if (!(median > 0.0)) return 1.0 / static_cast<double>(p);
  return 1.0 / (static_cast<double>(p) * median);
}

std::string_view homogeneous_kernel_name(HomogeneousKernel family) {
  switch (family) {
    case HomogeneousKernel::kChi2: return "chi2";
    case HomogeneousKernel::kIntersection: return "intersection";
    case HomogeneousKernel::kJensenShannon: return "jensen_shannon";
  }
  return "chi2";
}

HomogeneousKernel parse_homogeneous_kernel(std::string_view name) {
  if (name == "chi2") return HomogeneousKernel::kChi2;
  if (name == "intersection") return HomogeneousKernel::kIntersection;
  if (name == "jensen_shannon" || name == "js") return HomogeneousKernel::kJensenShannon;
  fail(ErrorCode::kInvalidConfig, "unknown homogeneous kernel '" + std::string(name) + "'");
}

void HomogeneousMapConfig::validate() const {
  if (order < 1) fail(ErrorCode::kInvalidConfig, "homogeneous map order must be >= 1");
  if (period && !(*period > 0.0)) fail(ErrorCode::kInvalidConfig, "homogeneous map period must be positive");
}

double HomogeneousMapConfig::resolved_period() const {
  if (period) return *period;
  return 2.0 * std::numbers::pi / (5.86 * std::sqrt(static_cast<double>(order)) + 3.65);
}

namespace {

// Spectrum kappa(lambda) of the signature K(omega) of each kernel.
double spectrum(HomogeneousKernel family, double lambda) {
  const double pi = std::numbers::pi;
  switch (family) {
    case HomogeneousKernel::kChi2:
      return 1.0 / std::cosh(pi * lambda);
    case HomogeneousKernel::kIntersection:
      return 2.0 / (pi * (1.0 + 4.0 * lambda * lambda));
    case HomogeneousKernel::kJensenShannon:
      return 2.0 / (std::log(4.0) * std::cosh(pi * lambda) * (1.0 + 4.0 * lambda * lambda));
  }
  return 0.0;
}

double scalar_kernel(HomogeneousKernel family, double a, double b) {
  if (a <= 0.0 || b <= 0.0) return 0.0;
  switch (family) {
    case HomogeneousKernel::kChi2:
      return 2.0 * a * b / (a + b);
    case HomogeneousKernel::kIntersection:
      return std::min(a, b);
    case HomogeneousKernel::kJensenShannon:
      return 0.5 * a * std::log2((a + b) / a) + 0.5 * b * std::log2((a + b) / b);
  }
  return 0.0;
}

}  // namespace

double homogeneous_kernel(HomogeneousKernel family, std::span<const double> x,
                          std::span<const double> y) {
  if (x.size() != y.size()) fail(ErrorCode::kDimensionMismatch, "homogeneous_kernel: dimension mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] < 0.0 || y[k] < 0.0) fail(ErrorCode::kNegativeInput, "homogeneous kernels need x >= 0");
    s += scalar_kernel(family, x[k], y[k]);
  }
  return s;
}

FeatureVector homogeneous_map(const HomogeneousMapConfig& config, std::span<const double> x) {
  config.validate();
  const auto order = static_cast<std::size_t>(config.order);
  const double step = config.resolved_period();
  const std::size_t block = 2 * order + 1;

  std::vector<double> coef(order + 1);
  coef[0] = std::sqrt(step * spectrum(config.family, 0.0));
  for (std::size_t j = 1; j <= order; ++j) {
    coef[j] = std::sqrt(2.0 * step * spectrum(config.family, static_cast<double>(j) * step));
  }

  FeatureVector out(x.size() * block, 0.0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double v = x[k];
    if (v < 0.0 || !std::isfinite(v)) {
      fail(ErrorCode::kNegativeInput, "homogeneous_map: entry " + std::to_string(k) + " is negative or non-finite");
    }
    if (v == 0.0) continue;
    double* dst = out.data() + k * block;
    const double root = std::sqrt(v);
    const double logv = std::log(v);
    dst[0] = coef[0] * root;
    for (std::size_t j = 1; j <= order; ++j) {
      const double phase = static_cast<double>(j) * step * logv;
      dst[2 * j - 1] = coef[j] * root * std::cos(phase);
      dst[2 * j] = coef[j] * root * std::sin(phase);
    }
  }
  return out;
}

MinMaxShift MinMaxShift::fit(std::span<const FeatureVector> rows) {
  const std::size_t p = check_uniform(rows, "min-max fit rows");
  MinMaxShift s;
  s.lo.assign(p, 0.0);
  s.hi.assign(p, 0.0);
  for (std::size_t k = 0; k < p; ++k) {
    s.lo[k] = s.hi[k] = rows.front()[k];
  }
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < p; ++k) {
      s.lo[k] = std::min(s.lo[k], r[k]);
      s.hi[k] = std::max(s.hi[k], r[k]);
    }
  }
  return s;
}

FeatureVector MinMaxShift::apply(std::span<const double> x) const {
  if (x.size() != lo.size()) fail(ErrorCode::kDimensionMismatch, "min-max shift: dimension mismatch");
  FeatureVector out(x.size(), 0.0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double range = hi[k] - lo[k];
    if (!(range > 0.0)) continue;
    out[k] = std::clamp((x[k] - lo[k]) / range, 0.0, 1.0);
  }
  return out;
}

}  // namespace svmpool
