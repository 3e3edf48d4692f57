#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "svmpool/types.hpp"

namespace svmpool {

/// One sequence's sampled frame features (a positive bag).
struct FeatureBag {
  std::string sequence_id;
  int label = 0;
  std::vector<FeatureVector> frames;

  friend bool operator==(const FeatureBag&, const FeatureBag&) = default;
};

/// Contrast set shared by every pooling problem of a run.
struct NegativeBag {
  std::vector<FeatureVector> frames;
  std::string source_tag;

  friend bool operator==(const NegativeBag&, const NegativeBag&) = default;
};

struct BagDataset {
  std::size_t dimension = 0;
  int class_count = 0;
  std::vector<FeatureBag> sequences;
  NegativeBag negative;
  std::string provenance;
  std::vector<int> folds;  // empty, or one fold id per sequence

  void validate() const;

  friend bool operator==(const BagDataset&, const BagDataset&) = default;
};

struct SyntheticSpec {
  int class_count = 10;
  int sequences_per_class = 30;
  int frames_per_sequence = 25;
  int dimension = 128;
  double informative_fraction = 0.2;
  double signal_strength = 3.0;
  double noise_sigma = 0.8;
  int negative_frame_count = 50;
  int background_prototypes = 8;
  int negative_prototypes = 8;
  // probability that a negative frame is drawn from the background prototypes
  // shared with the positive bags instead of the negative-only ones
  double negative_overlap = 0.0;
  double background_strength = 12.0;
  std::uint64_t seed = 0;

  void validate() const;
  int informative_per_sequence() const;
};

/// Ground truth kept alongside a planted dataset.
struct SyntheticTruth {
  std::vector<std::vector<bool>> informative;  // per sequence, per frame
  std::vector<FeatureVector> prototypes;       // unit directions
  // Index ranges into `prototypes`: [begin, end).
  std::size_t class_begin = 0, class_end = 0;
  std::size_t background_begin = 0, background_end = 0;
  std::size_t negative_begin = 0, negative_end = 0;
};

struct SyntheticDataset {
  BagDataset dataset;
  SyntheticTruth truth;
};

/// Planted-signal generator. Every sequence holds ceil(rho * n) frames drawn
/// around its class prototype and background frames from a class-independent
/// mixture; the negative bag uses held-out prototypes. Values are rounded to
/// float32 so the on-disk format round-trips exactly.
SyntheticDataset synthesize_with_truth(const SyntheticSpec& spec);
BagDataset synthesize(const SyntheticSpec& spec);

/// n frames drawn uniformly without replacement, or with replacement when
/// the source is shorter than n.
std::vector<FeatureVector> sample_frames(std::span<const FeatureVector> source, std::size_t n,
                                         std::uint64_t seed);
FeatureBag sample_bag(const FeatureBag& source, std::size_t n, std::uint64_t seed);

inline constexpr int kDatasetFormatVersion = 1;
inline constexpr const char* kDatasetMagic = "svmpool-dataset";
inline constexpr int kTableFormatVersion = 1;
inline constexpr const char* kTableMagic = "#svmpool-table";

/// Writes a JSON manifest at `path` and a float32 little-endian blob next to
/// it (`<path>.f32`). Feature values are stored in single precision.
void save_dataset(const BagDataset& dataset, const std::filesystem::path& path);
BagDataset load_dataset(const std::filesystem::path& path);

std::filesystem::path blob_path_for(const std::filesystem::path& manifest);

struct TableImportOptions {
  std::size_t positive_bag_size = 25;
  std::size_t negative_bag_size = 50;
  std::uint64_t seed = 0;
  std::string negative_source_tag = "table";
};

/// Comma-separated table: a `#svmpool-table,1` header line, then one frame per
/// row as `sequence_id,label,v_0,...,v_{p-1}`. Rows labelled `neg` form the
/// negative pool. Bags are resampled to the configured sizes.
BagDataset import_table(const std::filesystem::path& path, const TableImportOptions& options);
void export_table(const BagDataset& dataset, const std::filesystem::path& path);

// Writes `bytes` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::span<const char> bytes);
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace svmpool
