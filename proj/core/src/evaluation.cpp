#include "svmpool/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <random>
#include <string>

#include "svmpool/error.hpp"

namespace svmpool {

std::string_view method_name(Method method) {
  switch (method) {
    case Method::kAveragePool: return "average_pool";
    case Method::kMaxPool: return "max_pool";
    case Method::kSvmp: return "svmp";
    case Method::kNsvmp: return "nsvmp";
    case Method::kFused: return "fused";
    case Method::kJoint: return "joint";
  }
  return "svmp";
}

Method parse_method(std::string_view name) {
  for (Method m : all_methods()) {
    if (method_name(m) == name) return m;
  }
  fail(ErrorCode::kInvalidConfig, "unknown method '" + std::string(name) + "'");
}

std::string_view descriptor_norm_name(DescriptorNorm norm) {
  return norm == DescriptorNorm::kL2 ? "l2" : "none";
}

DescriptorNorm parse_descriptor_norm(std::string_view name) {
  if (name == "l2") return DescriptorNorm::kL2;
  if (name == "none") return DescriptorNorm::kNone;
  fail(ErrorCode::kInvalidConfig, "unknown descriptor norm '" + std::string(name) + "'");
}

FeatureVector l2_normalized(FeatureVector v) {
  const double n = norm(v);
  if (n > 0.0) {
    for (auto& x : v) x /= n;
  }
  return v;
}

std::vector<Method> all_methods() {
  return {Method::kAveragePool, Method::kMaxPool, Method::kSvmp, Method::kNsvmp, Method::kFused, Method::kJoint};
}

void EvalConfig::validate() const {
  pool.validate();
  if (nsvmp_gamma && !(*nsvmp_gamma > 0.0)) fail(ErrorCode::kInvalidConfig, "gamma must be positive");
  if (!(c2 > 0.0)) fail(ErrorCode::kInvalidConfig, "c2 must be positive");
  fusion.validate();
  if (homogeneous) homogeneous->validate();
  if (folds < 2) fail(ErrorCode::kInvalidConfig, "at least 2 folds are needed");
  if (jobs < 1) fail(ErrorCode::kInvalidConfig, "jobs must be >= 1");
  joint().validate();
}

JointConfig EvalConfig::joint() const {
  JointConfig j;
  j.c2 = c2;
  j.max_bcd_iters = max_bcd_iters;
  j.z_tolerance = z_tolerance;
  j.pool = pool;
  j.pool.kernel.reset();
  j.virtual_point_scale = virtual_point_scale;
  j.jobs = jobs;
  return j;
}

const MethodReport& EvalResult::report(Method m) const {
  for (const auto& r : methods) {
    if (r.method == m) return r;
  }
  fail(ErrorCode::kInvalidConfig, "method '" + std::string(method_name(m)) + "' was not evaluated");
}

std::vector<int> assign_folds(const BagDataset& dataset, int folds, std::uint64_t seed) {
  if (folds < 2) fail(ErrorCode::kInvalidConfig, "at least 2 folds are needed");
  if (!dataset.folds.empty()) {
    for (int f : dataset.folds) {
      if (f < 0 || f >= folds) fail(ErrorCode::kInvalidConfig, "dataset fold id out of range");
    }
    return dataset.folds;
  }
  std::vector<int> out(dataset.sequences.size(), 0);
  std::mt19937_64 rng(seed);
  for (int c = 0; c < dataset.class_count; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < dataset.sequences.size(); ++i) {
      if (dataset.sequences[i].label == c) members.push_back(i);
    }
    seeded_shuffle(members, rng);
    for (std::size_t k = 0; k < members.size(); ++k) out[members[k]] = static_cast<int>(k % static_cast<std::size_t>(folds));
  }
  return out;
}

FeatureVector average_pool(const FeatureBag& bag) {
  if (bag.frames.empty()) fail(ErrorCode::kEmptyBag, "average_pool of an empty bag");
  FeatureVector out(bag.frames.front().size(), 0.0);
  for (const auto& f : bag.frames) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += f[k];
  }
  for (auto& v : out) v /= static_cast<double>(bag.frames.size());
  return out;
}

FeatureVector max_pool(const FeatureBag& bag) {
  if (bag.frames.empty()) fail(ErrorCode::kEmptyBag, "max_pool of an empty bag");
  FeatureVector out(bag.frames.front());
  for (const auto& f : bag.frames) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::max(out[k], f[k]);
  }
  return out;
}

namespace {

class StageClock {
 public:
  explicit StageClock(std::map<std::string, double>& totals, std::string stage)
      : totals_(totals), stage_(std::move(stage)), start_(std::chrono::steady_clock::now()) {}
  ~StageClock() {
    totals_[stage_] += std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::map<std::string, double>& totals_;
  std::string stage_;
  std::chrono::steady_clock::time_point start_;
};

std::vector<FeatureVector> normalized(std::vector<FeatureVector> rows, DescriptorNorm norm) {
  if (norm == DescriptorNorm::kL2) {
    for (auto& r : rows) r = l2_normalized(std::move(r));
  }
  return rows;
}

template <typename T>
std::vector<T> pick(const std::vector<T>& all, const std::vector<std::size_t>& idx) {
  std::vector<T> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(all[i]);
  return out;
}

std::vector<int> linear_predictions(const std::vector<FeatureVector>& descs, const std::vector<int>& labels,
                                    const std::vector<std::size_t>& train, const std::vector<std::size_t>& test,
                                    int class_count, const EvalConfig& config) {
  SolverConfig solver = config.pool.solver;
  const auto z = train_action_classifiers(pick(descs, train), pick(labels, train), class_count, config.c2, solver);
  std::vector<int> out;
  for (std::size_t i : test) out.push_back(predict(z, descs[i]));
  return out;
}

std::vector<int> kernel_predictions(const std::vector<FeatureVector>& svmp, const std::vector<FeatureVector>& nsvmp,
                                    const std::vector<int>& labels, const std::vector<std::size_t>& train,
                                    const std::vector<std::size_t>& test, int class_count,
                                    const FusedKernelConfig& fusion, const EvalConfig& config) {
  const auto svmp_train = pick(svmp, train);
  const auto nsvmp_train = pick(nsvmp, train);
  const auto k = fused_gram(svmp_train, nsvmp_train, fusion);
  const auto model = train_precomputed(k, pick(labels, train), class_count, config.c2, config.pool.solver);
  const auto cross = fused_gram(pick(svmp, test), pick(nsvmp, test), svmp_train, nsvmp_train, fusion);
  std::vector<int> out;
  for (std::size_t r = 0; r < test.size(); ++r) out.push_back(predict_precomputed(model, cross.row(r)));
  return out;
}

}  // namespace

EvalResult cross_validate(const BagDataset& dataset, std::span<const Method> methods, const EvalConfig& config) {
  config.validate();
  dataset.validate();
  if (methods.empty()) fail(ErrorCode::kInvalidConfig, "no methods requested");
  const int d = dataset.class_count;
  const std::size_t n = dataset.sequences.size();
  auto wants = [&](Method m) { return std::find(methods.begin(), methods.end(), m) != methods.end(); };
  const bool need_svmp = wants(Method::kSvmp) || wants(Method::kFused) || wants(Method::kJoint);
  const bool need_nsvmp = wants(Method::kNsvmp) || wants(Method::kFused);

  EvalResult result;
  result.fold_of = assign_folds(dataset, config.folds, config.seed);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = dataset.sequences[i].label;

  for (Method m : methods) {
    MethodReport r;
    r.method = m;
    r.confusion.assign(static_cast<std::size_t>(d), std::vector<int>(static_cast<std::size_t>(d), 0));
    r.predictions.assign(n, -1);
    result.methods.push_back(std::move(r));
  }
  std::map<std::string, double> clock;

  for (int fold = 0; fold < config.folds; ++fold) {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    for (std::size_t i = 0; i < n; ++i) (result.fold_of[i] == fold ? test : train).push_back(i);
    if (test.empty() || train.empty()) fail(ErrorCode::kEmptyDataset, "fold " + std::to_string(fold) + " is empty");

    BagDataset local;
    {
      StageClock t(clock, "centralize");
      local = centralize(dataset, training_mean(dataset, train));
    }
    std::vector<FeatureVector> svmp_raw;
    std::vector<FeatureVector> nsvmp_raw;
    if (need_svmp) {
      StageClock t(clock, "svmp_pool");
      PoolConfig pc = config.pool;
      pc.kernel.reset();
      for (auto& dsc : svmp_pool_all(local.sequences, local.negative, pc, config.jobs)) {
        svmp_raw.push_back(std::move(dsc.vector));
      }
    }
    if (need_nsvmp) {
      StageClock t(clock, "nsvmp_pool");
      PoolConfig pc = config.pool;
      if (config.nsvmp_pool_kernel == KernelKind::kRbf) {
        double gamma = 0.0;
        if (config.nsvmp_gamma) {
          gamma = *config.nsvmp_gamma;
        } else {
          std::vector<FeatureVector> frames;
          for (std::size_t i : train) {
            for (const auto& f : local.sequences[i].frames) frames.push_back(f);
          }
          for (const auto& f : local.negative.frames) frames.push_back(f);
          gamma = median_heuristic_gamma(frames, config.seed);
        }
        pc.kernel = KernelSpec::rbf(gamma);
      } else {
        pc.kernel = KernelSpec::linear();
      }
      for (auto& dsc : nsvmp_pool_all(local.sequences, local.negative, pc, config.jobs)) {
        nsvmp_raw.push_back(std::move(dsc.vector));
      }
    }
    std::vector<FeatureVector> nsvmp;
    if (need_nsvmp) {
      StageClock t(clock, "nsvmp_feature_map");
      const auto map = NsvmpFeatureMap::fit(pick(nsvmp_raw, train), config.homogeneous);
      nsvmp = normalized(map.apply_all(nsvmp_raw), config.descriptor_norm);
    }
    const auto svmp = normalized(svmp_raw, config.descriptor_norm);

    for (auto& report : result.methods) {
      std::vector<int> pred;
      const std::string stage = "classify_" + std::string(method_name(report.method));
      StageClock t(clock, stage);
      switch (report.method) {
        case Method::kAveragePool:
        case Method::kMaxPool: {
          std::vector<FeatureVector> descs;
          for (const auto& bag : local.sequences) {
            descs.push_back(report.method == Method::kAveragePool ? average_pool(bag) : max_pool(bag));
          }
          pred = linear_predictions(normalized(std::move(descs), config.descriptor_norm), labels, train, test, d, config);
          break;
        }
        case Method::kSvmp:
          pred = linear_predictions(svmp, labels, train, test, d, config);
          break;
        case Method::kNsvmp: {
          FusedKernelConfig only = config.fusion;
          only.beta1 = 0.0;
          only.beta2 = 1.0;
          pred = kernel_predictions(svmp.empty() ? nsvmp : svmp, nsvmp, labels, train, test, d, only, config);
          break;
        }
        case Method::kFused:
          pred = kernel_predictions(svmp, nsvmp, labels, train, test, d, config.fusion, config);
          break;
        case Method::kJoint: {
          const auto train_bags = pick(local.sequences, train);
          const auto fit = bcd_fit(train_bags, local.negative, d, config.joint());
          for (std::size_t i : test) pred.push_back(predict(fit.classifiers, svmp_raw[i]));
          break;
        }
      }
      std::size_t correct = 0;
      for (std::size_t r = 0; r < test.size(); ++r) {
        const std::size_t i = test[r];
        report.predictions[i] = pred[r];
        ++report.confusion[static_cast<std::size_t>(labels[i])][static_cast<std::size_t>(pred[r])];
        if (pred[r] == labels[i]) ++correct;
      }
      report.fold_accuracies.push_back(static_cast<double>(correct) / static_cast<double>(test.size()));
    }
  }

  for (auto& report : result.methods) {
    double sum = 0.0;
    for (double a : report.fold_accuracies) sum += a;
    report.mean_accuracy = sum / static_cast<double>(report.fold_accuracies.size());
    for (std::size_t c = 0; c < report.confusion.size(); ++c) {
      int total = 0;
      for (int v : report.confusion[c]) total += v;
      report.per_class_accuracy.push_back(total > 0 ? static_cast<double>(report.confusion[c][c]) / total : 0.0);
    }
  }
  for (const auto& [stage, seconds] : clock) result.timings.push_back({stage, seconds});
  return result;
}

}  // namespace svmpool
