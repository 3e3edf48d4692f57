#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "svmpool/joint.hpp"
#include "svmpool/mil_pool.hpp"

namespace svmpool {

inline constexpr std::uint32_t kModelFormatVersion = 1;
inline constexpr std::uint32_t kDescriptorFormatVersion = 1;

/// Everything needed to pool and classify an unseen sequence.
struct JointModel {
  std::size_t dimension = 0;
  ActionClassifierSet classifiers;
  FeatureVector mean;  // global training mean subtracted before pooling
  PoolConfig pool;     // linear pooling settings used at training time

  friend bool operator==(const JointModel& a, const JointModel& b);
};

/// Binary layout, little-endian: magic "SVMPMODL", u32 version, then the
/// pooling settings, mean, and per-class [w; b] rows as float64.
void save_model(const JointModel& model, const std::filesystem::path& path);
JointModel load_model(const std::filesystem::path& path);

enum class DescriptorKind : std::uint32_t { kSvmp = 1, kNsvmp = 2 };

struct DescriptorRecord {
  std::string sequence_id;
  int label = 0;
  bool satisfied = false;
  double final_c = 0.0;
  double achieved_fraction = 0.0;
  std::vector<double> vector;

  friend bool operator==(const DescriptorRecord&, const DescriptorRecord&) = default;
};

struct DescriptorFile {
  DescriptorKind kind = DescriptorKind::kSvmp;
  std::vector<DescriptorRecord> records;

  friend bool operator==(const DescriptorFile&, const DescriptorFile&) = default;
};

/// Binary layout: magic "SVMPDESC", u32 version, u32 kind, u64 count, u64
/// dimension, then per record: id, label, flags, final C, fraction, vector.
void save_descriptors(const DescriptorFile& file, const std::filesystem::path& path);
DescriptorFile load_descriptors(const std::filesystem::path& path);

}  // namespace svmpool
