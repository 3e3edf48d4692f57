#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "svmpool/types.hpp"

namespace svmpool {

enum class KernelKind { kLinear, kRbf };

struct KernelSpec {
  KernelKind kind = KernelKind::kLinear;
  double gamma = 1.0;  // rbf only

  static KernelSpec linear() { return {}; }
  static KernelSpec rbf(double gamma) { return {KernelKind::kRbf, gamma}; }

  void validate() const;
};

std::string_view kernel_kind_name(KernelKind kind);
KernelKind parse_kernel_kind(std::string_view name);

/// linear: x.y, rbf: exp(-gamma |x - y|^2).
double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);

struct GramMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> entries;  // row-major
  std::vector<std::string> row_ids;
  std::vector<std::string> col_ids;

  double operator()(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }
  double& operator()(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
  std::span<const double> row(std::size_t i) const { return {entries.data() + i * cols, cols}; }
  bool is_square() const { return rows == cols; }
  bool is_symmetric(double tol) const;
};

GramMatrix gram(const KernelSpec& spec, std::span<const FeatureVector> x,
                std::span<const FeatureVector> y);
// Self-Gram; only the upper triangle is evaluated and mirrored.
GramMatrix gram(const KernelSpec& spec, std::span<const FeatureVector> x);

struct EigenvalueRange {
  double min = 0.0;
  double max = 0.0;
};

EigenvalueRange eigenvalue_range(const GramMatrix& k);

/// min eigenvalue >= -relative_tolerance * max(|max eigenvalue|, tiny).
bool is_psd(const GramMatrix& k, double relative_tolerance);

/// 1 / (p * median pairwise squared distance) over a seeded subset of at most
/// 256 rows.
double median_heuristic_gamma(std::span<const FeatureVector> x, std::uint64_t seed);

enum class HomogeneousKernel { kChi2, kIntersection, kJensenShannon };

std::string_view homogeneous_kernel_name(HomogeneousKernel family);
HomogeneousKernel parse_homogeneous_kernel(std::string_view name);

struct HomogeneousMapConfig {
  HomogeneousKernel family = HomogeneousKernel::kChi2;
  int order = 3;
  // Sampling step of the kernel spectrum. Unset selects the order-dependent
  // default 2*pi / (5.86*sqrt(order) + 3.65).
  std::optional<double> period;

  void validate() const;
  double resolved_period() const;
};

/// Exact additive homogeneous kernel sum_k k(x_k, y_k); inputs must be >= 0.
double homogeneous_kernel(HomogeneousKernel family, std::span<const double> x,
                          std::span<const double> y);

/// Finite feature map of length p * (2 * order + 1) whose inner products
/// approximate homogeneous_kernel. Throws NegativeInput on negative entries.
FeatureVector homogeneous_map(const HomogeneousMapConfig& config, std::span<const double> x);

/// Per-coordinate affine map onto [0, 1] fitted on a training split. Values
/// outside the fitted range are clamped; constant coordinates map to 0.
struct MinMaxShift {
  std::vector<double> lo;
  std::vector<double> hi;

  static MinMaxShift fit(std::span<const FeatureVector> rows);
  FeatureVector apply(std::span<const double> x) const;
};

}  // namespace svmpool
