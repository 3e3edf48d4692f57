#include "svmpool/types.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "svmpool/error.hpp"

namespace svmpool {

std::vector<double> Hyperplane::as_descriptor() const {
  std::vector<double> out(weights);
  out.push_back(bias);
  return out;
}

void SolverConfig::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) {
    fail(ErrorCode::kInvalidConfig, "solver C must be positive and finite");
  }
  if (!(tolerance > 0.0)) fail(ErrorCode::kInvalidConfig, "solver tolerance must be positive");
  if (max_passes < 1) fail(ErrorCode::kInvalidConfig, "solver max_passes must be >= 1");
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

std::size_t check_uniform(std::span<const FeatureVector> rows, const char* what) {
  if (rows.empty()) fail(ErrorCode::kEmptyBag, std::string(what) + " is empty");
  const std::size_t p = rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != p) {
      fail(ErrorCode::kDimensionMismatch,
           std::string(what) + ": expected dimension " + std::to_string(p) + ", got " +
               std::to_string(r.size()));
    }
    check_finite(r, what);
  }
  return p;
}

void check_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) fail(ErrorCode::kNonFiniteInput, std::string(what) + " has a non-finite entry");
  }
}

void seeded_shuffle(std::span<std::size_t> indices, std::mt19937_64& rng) {
  for (std::size_t i = indices.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(indices[i - 1], indices[j]);
  }
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  seeded_shuffle(idx, rng);
  return idx;
}

double uniform01(std::mt19937_64& rng) {
  // 53 random bits -> [0, 1)
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& rng) {
  // Box-Muller; the second variate is discarded to keep draws stateless.
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace svmpool
