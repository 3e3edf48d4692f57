#include "svmpool/dataio.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <random>
#include <sstream>

#include "json.hpp"
#include "svmpool/error.hpp"

namespace svmpool {
namespace fs = std::filesystem;
using nlohmann::json;

void BagDataset::validate() const {
  if (dimension == 0) fail(ErrorCode::kEmptyDataset, "dataset dimension is zero");
  if (class_count < 1) fail(ErrorCode::kEmptyDataset, "dataset has no classes");
  for (const auto& bag : sequences) {
    if (bag.frames.empty()) fail(ErrorCode::kEmptyBag, "sequence '" + bag.sequence_id + "' has no frames");
    if (bag.label < 0 || bag.label >= class_count) {
      fail(ErrorCode::kInvalidSpec, "sequence '" + bag.sequence_id + "' has label out of range");
    }
    for (const auto& f : bag.frames) {
      if (f.size() != dimension) {
        fail(ErrorCode::kDimensionMismatch, "sequence '" + bag.sequence_id + "' has a frame of wrong dimension");
      }
    }
  }
  if (negative.frames.empty()) fail(ErrorCode::kEmptyBag, "dataset has an empty negative bag");
  for (const auto& f : negative.frames) {
    if (f.size() != dimension) fail(ErrorCode::kDimensionMismatch, "negative frame of wrong dimension");
  }
  if (!folds.empty() && folds.size() != sequences.size()) {
    fail(ErrorCode::kCountMismatch, "fold assignment count does not match sequence count");
  }
}

void SyntheticSpec::validate() const {
  auto bad = [](const std::string& what) { fail(ErrorCode::kInvalidSpec, "synthetic spec: " + what); };
  if (class_count < 1) bad("class_count must be >= 1");
  if (sequences_per_class < 1) bad("sequences_per_class must be >= 1");
  if (frames_per_sequence < 1) bad("frames_per_sequence must be >= 1");
  if (dimension < 1) bad("dimension must be >= 1");
  if (!(informative_fraction > 0.0 && informative_fraction <= 1.0)) bad("informative_fraction must be in (0, 1]");
  if (informative_fraction * frames_per_sequence < 1.0 - 1e-9) bad("informative_fraction * n must be >= 1");
  if (!(noise_sigma > 0.0)) bad("noise_sigma must be positive");
  if (!std::isfinite(signal_strength) || !std::isfinite(background_strength)) bad("strengths must be finite");
  if (negative_frame_count < 1) bad("negative_frame_count must be >= 1");
  if (background_prototypes < 1 || negative_prototypes < 1) bad("prototype counts must be >= 1");
  if (!(negative_overlap >= 0.0 && negative_overlap <= 1.0)) bad("negative_overlap must be in [0, 1]");
}

int SyntheticSpec::informative_per_sequence() const {
  const double raw = informative_fraction * static_cast<double>(frames_per_sequence);
  const int k = static_cast<int>(std::ceil(raw - 1e-9));
  return std::clamp(k, 1, frames_per_sequence);
}

namespace {

FeatureVector random_direction(std::size_t p, std::mt19937_64& rng) {
  FeatureVector v(p);
  double n2 = 0.0;
  do {
    for (auto& x : v) x = standard_normal(rng);
    n2 = dot(v, v);
  } while (n2 <= 0.0);
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& x : v) x *= inv;
  return v;
}

FeatureVector planted_frame(const FeatureVector& prototype, double strength, double sigma,
                            std::mt19937_64& rng) {
  FeatureVector f(prototype.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double v = strength * prototype[k] + sigma * standard_normal(rng);
    f[k] = static_cast<double>(static_cast<float>(v));
  }
  return f;
}

}  // namespace

SyntheticDataset synthesize_with_truth(const SyntheticSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const auto p = static_cast<std::size_t>(spec.dimension);
  const auto d = static_cast<std::size_t>(spec.class_count);
  const auto nb = static_cast<std::size_t>(spec.background_prototypes);
  const auto nn = static_cast<std::size_t>(spec.negative_prototypes);

  SyntheticDataset out;
  auto& truth = out.truth;
  truth.class_begin = 0;
  truth.class_end = d;
  truth.background_begin = d;
  truth.background_end = d + nb;
  truth.negative_begin = d + nb;
  truth.negative_end = d + nb + nn;
  for (std::size_t i = 0; i < truth.negative_end; ++i) truth.prototypes.push_back(random_direction(p, rng));

  auto& ds = out.dataset;
  ds.dimension = p;
  ds.class_count = spec.class_count;
  const auto n = static_cast<std::size_t>(spec.frames_per_sequence);
  const auto informative = static_cast<std::size_t>(spec.informative_per_sequence());
  for (std::size_t c = 0; c < d; ++c) {
    for (int s = 0; s < spec.sequences_per_class; ++s) {
      FeatureBag bag;
      bag.sequence_id = "c" + std::to_string(c) + "_s" + std::to_string(s);
      bag.label = static_cast<int>(c);
      const auto positions = seeded_permutation(n, rng);
      std::vector<bool> mask(n, false);
      for (std::size_t k = 0; k < informative; ++k) mask[positions[k]] = true;
      bag.frames.reserve(n);
      for (std::size_t k = 0; k < n; ++k) {
        if (mask[k]) {
          bag.frames.push_back(planted_frame(truth.prototypes[c], spec.signal_strength, spec.noise_sigma, rng));
        } else {
          const std::size_t b = truth.background_begin + static_cast<std::size_t>(rng() % nb);
          bag.frames.push_back(planted_frame(truth.prototypes[b], spec.background_strength, spec.noise_sigma, rng));
        }
      }
      ds.sequences.push_back(std::move(bag));
      truth.informative.push_back(std::move(mask));
    }
  }
  ds.negative.source_tag = "synthetic-heldout-background";
  for (int k = 0; k < spec.negative_frame_count; ++k) {
    const bool shared = uniform01(rng) < spec.negative_overlap;
    const std::size_t b = shared ? truth.background_begin + static_cast<std::size_t>(rng() % nb)
                                 : truth.negative_begin + static_cast<std::size_t>(rng() % nn);
    ds.negative.frames.push_back(planted_frame(truth.prototypes[b], spec.background_strength, spec.noise_sigma, rng));
  }
  std::ostringstream prov;
  prov << "synthetic planted d=" << spec.class_count << " per_class=" << spec.sequences_per_class
       << " n=" << spec.frames_per_sequence << " p=" << spec.dimension
       << " rho=" << spec.informative_fraction << " seed=" << spec.seed;
  ds.provenance = prov.str();
  return out;
}

BagDataset synthesize(const SyntheticSpec& spec) { return synthesize_with_truth(spec).dataset; }

std::vector<FeatureVector> sample_frames(std::span<const FeatureVector> source, std::size_t n,
                                         std::uint64_t seed) {
  if (source.empty()) fail(ErrorCode::kEmptySource, "cannot sample from an empty sequence");
  std::mt19937_64 rng(seed);
  std::vector<FeatureVector> out;
  out.reserve(n);
  if (source.size() >= n) {
    const auto perm = seeded_permutation(source.size(), rng);
    for (std::size_t k = 0; k < n; ++k) out.push_back(source[perm[k]]);
  } else {
    for (std::size_t k = 0; k < n; ++k) out.push_back(source[static_cast<std::size_t>(rng() % source.size())]);
  }
  return out;
}

FeatureBag sample_bag(const FeatureBag& source, std::size_t n, std::uint64_t seed) {
  FeatureBag out;
  out.sequence_id = source.sequence_id;
  out.label = source.label;
  out.frames = sample_frames(source.frames, n, seed);
  return out;
}

// ---------------------------------------------------------------------------
// Binary dataset format

fs::path blob_path_for(const fs::path& manifest) {
  fs::path blob = manifest;
  blob += ".f32";
  return blob;
}

void write_file_atomic(const fs::path& path, std::span<const char> bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::kIoFailure, "cannot open '" + tmp.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorCode::kIoFailure, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) fail(ErrorCode::kIoFailure, "rename to '" + path.string() + "' failed: " + ec.message());
}

void write_file_atomic(const fs::path& path, const std::string& text) {
  write_file_atomic(path, std::span<const char>(text.data(), text.size()));
}

namespace {

void append_f32_le(std::vector<char>& out, double value) {
  const auto f = static_cast<float>(value);
  std::uint32_t bits = std::bit_cast<std::uint32_t>(f);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
  char buf[4];
  std::memcpy(buf, &bits, 4);
  out.insert(out.end(), buf, buf + 4);
}

double read_f32_le(const char* src) {
  std::uint32_t bits;
  std::memcpy(&bits, src, 4);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
  return static_cast<double>(std::bit_cast<float>(bits));
}

std::string crc_hex(std::span<const char> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size()));
  char buf[16];
  std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc));
  return buf;
}

std::vector<char> read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoFailure, "cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

void save_dataset(const BagDataset& dataset, const fs::path& path) {
  dataset.validate();
  std::vector<char> blob;
  json manifest;
  manifest["magic"] = kDatasetMagic;
  manifest["format_version"] = kDatasetFormatVersion;
  manifest["dimension"] = dataset.dimension;
  manifest["class_count"] = dataset.class_count;
  manifest["provenance"] = dataset.provenance;

  std::size_t offset = 0;
  json seqs = json::array();
  for (std::size_t i = 0; i < dataset.sequences.size(); ++i) {
    const auto& bag = dataset.sequences[i];
    json entry = {{"id", bag.sequence_id}, {"label", bag.label}, {"offset", offset}, {"count", bag.frames.size()}};
    if (!dataset.folds.empty()) entry["fold"] = dataset.folds[i];
    seqs.push_back(std::move(entry));
    for (const auto& f : bag.frames) {
      for (double v : f) append_f32_le(blob, v);
    }
    offset += bag.frames.size();
  }
  manifest["sequences"] = std::move(seqs);
  manifest["negative"] = {{"source_tag", dataset.negative.source_tag},
                          {"offset", offset},
                          {"count", dataset.negative.frames.size()}};
  for (const auto& f : dataset.negative.frames) {
    for (double v : f) append_f32_le(blob, v);
  }
  const fs::path blob_path = blob_path_for(path);
  manifest["blob"] = blob_path.filename().string();
  manifest["blob_bytes"] = blob.size();
  manifest["crc32"] = crc_hex(blob);

  write_file_atomic(blob_path, std::span<const char>(blob));
  write_file_atomic(path, manifest.dump(2) + "\n");
}

BagDataset load_dataset(const fs::path& path) {
  const auto text = read_all(path);
  json manifest;
  try {
    manifest = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    fail(ErrorCode::kCorruptFile, "manifest '" + path.string() + "' is not valid JSON: " + e.what());
  }
  BagDataset ds;
  std::size_t blob_bytes = 0;
  std::string crc;
  fs::path blob_path;
  std::size_t neg_offset = 0;
  std::size_t neg_count = 0;
  struct SeqEntry {
    std::size_t offset, count;
  };
  std::vector<SeqEntry> entries;
  try {
    if (manifest.value("magic", "") != kDatasetMagic) {
      fail(ErrorCode::kFormatVersionMismatch, "'" + path.string() + "' is not an svmpool dataset manifest");
    }
    if (manifest.at("format_version").get<int>() != kDatasetFormatVersion) {
      fail(ErrorCode::kFormatVersionMismatch, "unsupported dataset format version");
    }
    ds.dimension = manifest.at("dimension").get<std::size_t>();
    ds.class_count = manifest.at("class_count").get<int>();
    ds.provenance = manifest.value("provenance", "");
    bool any_fold = false;
    for (const auto& s : manifest.at("sequences")) {
      FeatureBag bag;
      bag.sequence_id = s.at("id").get<std::string>();
      bag.label = s.at("label").get<int>();
      entries.push_back({s.at("offset").get<std::size_t>(), s.at("count").get<std::size_t>()});
      if (s.contains("fold")) {
        any_fold = true;
        ds.folds.push_back(s.at("fold").get<int>());
      }
      ds.sequences.push_back(std::move(bag));
    }
    if (any_fold && ds.folds.size() != ds.sequences.size()) {
      fail(ErrorCode::kCorruptFile, "fold ids present on only some sequences");
    }
    const auto& neg = manifest.at("negative");
    ds.negative.source_tag = neg.value("source_tag", "");
    neg_offset = neg.at("offset").get<std::size_t>();
    neg_count = neg.at("count").get<std::size_t>();
    blob_path = path.parent_path() / manifest.at("blob").get<std::string>();
    blob_bytes = manifest.at("blob_bytes").get<std::size_t>();
    crc = manifest.at("crc32").get<std::string>();
  } catch (const json::exception& e) {
    fail(ErrorCode::kCorruptFile, std::string("manifest field error: ") + e.what());
  }

  std::size_t total_frames = 0;
  for (const auto& e : entries) {
    if (e.offset != total_frames) fail(ErrorCode::kCorruptFile, "sequence offsets are not contiguous");
    total_frames += e.count;
  }
  if (neg_offset != total_frames) fail(ErrorCode::kCorruptFile, "negative bag offset is not contiguous");
  total_frames += neg_count;
  if (ds.dimension == 0 || total_frames * ds.dimension * 4 != blob_bytes) {
    fail(ErrorCode::kFormatVersionMismatch,
         "manifest dimension/counts disagree with recorded blob size " + std::to_string(blob_bytes));
  }
  const auto blob = read_all(blob_path);
  if (blob.size() != blob_bytes) {
    fail(ErrorCode::kCorruptFile, "blob '" + blob_path.string() + "' has " + std::to_string(blob.size()) +
                                      " bytes, expected " + std::to_string(blob_bytes));
  }
  if (crc_hex(blob) != crc) fail(ErrorCode::kCorruptFile, "blob checksum mismatch");

  const char* cursor = blob.data();
  auto read_frame = [&]() {
    FeatureVector f(ds.dimension);
    for (auto& v : f) {
      v = read_f32_le(cursor);
      cursor += 4;
    }
    return f;
  };
  for (std::size_t i = 0; i < ds.sequences.size(); ++i) {
    auto& frames = ds.sequences[i].frames;
    frames.reserve(entries[i].count);
    for (std::size_t k = 0; k < entries[i].count; ++k) frames.push_back(read_frame());
  }
  for (std::size_t k = 0; k < neg_count; ++k) ds.negative.frames.push_back(read_frame());
  ds.validate();
  return ds;
}

// ---------------------------------------------------------------------------
// Text table

BagDataset import_table(const fs::path& path, const TableImportOptions& options) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoFailure, "cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::kCorruptFile, "empty table file");
  {
    const auto comma = line.find(',');
    const std::string magic = line.substr(0, comma);
    if (magic != kTableMagic || comma == std::string::npos) {
      fail(ErrorCode::kFormatVersionMismatch, "missing '#svmpool-table' header");
    }
    int version = 0;
    const std::string rest = line.substr(comma + 1);
    const auto res = std::from_chars(rest.data(), rest.data() + rest.size(), version);
    if (res.ec != std::errc() || version != kTableFormatVersion) {
      fail(ErrorCode::kFormatVersionMismatch, "unsupported table format version");
    }
  }
  std::vector<FeatureBag> bags;
  std::map<std::string, std::size_t> index;
  std::vector<FeatureVector> negatives;
  std::size_t p = 0;
  std::size_t line_no = 1;
  int max_label = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 3) fail(ErrorCode::kCorruptFile, "table line " + std::to_string(line_no) + " has too few columns");
    FeatureVector f(cells.size() - 2);
    for (std::size_t k = 2; k < cells.size(); ++k) {
      const std::string& c = cells[k];
      float v = 0.0f;
      const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
      if (res.ec != std::errc() || res.ptr != c.data() + c.size()) {
        fail(ErrorCode::kCorruptFile, "table line " + std::to_string(line_no) + " has a non-numeric value");
      }
      f[k - 2] = static_cast<double>(v);
    }
    if (p == 0) p = f.size();
    if (f.size() != p) fail(ErrorCode::kDimensionMismatch, "table line " + std::to_string(line_no) + " has wrong width");
    check_finite(f, "table row");
    if (cells[1] == "neg") {
      negatives.push_back(std::move(f));
      continue;
    }
    int label = 0;
    const auto lres = std::from_chars(cells[1].data(), cells[1].data() + cells[1].size(), label);
    if (lres.ec != std::errc() || lres.ptr != cells[1].data() + cells[1].size()) {
      fail(ErrorCode::kCorruptFile, "table line " + std::to_string(line_no) + " has a bad label");
    }
    if (label < 0) fail(ErrorCode::kCorruptFile, "negative class label on line " + std::to_string(line_no));
    auto [it, inserted] = index.emplace(cells[0], bags.size());
    if (inserted) bags.push_back(FeatureBag{cells[0], label, {}});
    auto& bag = bags[it->second];
    if (bag.label != label) fail(ErrorCode::kCorruptFile, "sequence '" + cells[0] + "' has conflicting labels");
    bag.frames.push_back(std::move(f));
    max_label = std::max(max_label, label);
  }
  if (bags.empty()) fail(ErrorCode::kEmptyDataset, "table has no positive sequences");
  if (negatives.empty()) fail(ErrorCode::kEmptyBag, "table has no 'neg' rows");

  BagDataset ds;
  ds.dimension = p;
  ds.class_count = max_label + 1;
  ds.provenance = "table import: " + path.filename().string();
  std::mt19937_64 seeds(options.seed);
  for (auto& bag : bags) ds.sequences.push_back(sample_bag(bag, options.positive_bag_size, seeds()));
  ds.negative.frames = sample_frames(negatives, options.negative_bag_size, seeds());
  ds.negative.source_tag = options.negative_source_tag;
  ds.validate();
  return ds;
}

void export_table(const BagDataset& dataset, const fs::path& path) {
  dataset.validate();
  std::ostringstream out;
  out.precision(9);
  out << kTableMagic << ',' << kTableFormatVersion << '\n';
  auto row = [&](const std::string& id, const std::string& label, const FeatureVector& f) {
    out << id << ',' << label;
    for (double v : f) out << ',' << static_cast<float>(v);
    out << '\n';
  };
  for (const auto& bag : dataset.sequences) {
    for (const auto& f : bag.frames) row(bag.sequence_id, std::to_string(bag.label), f);
  }
  for (const auto& f : dataset.negative.frames) row("negative", "neg", f);
  write_file_atomic(path, out.str());
}

}  // namespace svmpool
