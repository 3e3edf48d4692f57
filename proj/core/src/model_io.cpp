#include "svmpool/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "svmpool/dataio.hpp"
#include "svmpool/error.hpp"

namespace svmpool {
namespace {

constexpr char kModelMagic[8] = {'S', 'V', 'M', 'P', 'M', 'O', 'D', 'L'};
constexpr char kDescMagic[8] = {'S', 'V', 'M', 'P', 'D', 'E', 'S', 'C'};

class Writer {
 public:
  void raw(const char* data, std::size_t n) { buf_.insert(buf_.end(), data, data + n); }

  template <typename T>
  void le(T value) {
    static_assert(std::is_integral_v<T>);
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      buf_.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff));
    }
  }
  void u32(std::uint32_t v) { le(v); }
  void u64(std::uint64_t v) { le(v); }
  void i32(std::int32_t v) { le(static_cast<std::uint32_t>(v)); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u64(s.size());
    raw(s.data(), s.size());
  }
  void vec(const std::vector<double>& v) {
    u64(v.size());
    for (double x : v) f64(x);
  }
  const std::vector<char>& bytes() const { return buf_; }

 private:
  std::vector<char> buf_;
};

class Reader {
 public:
  explicit Reader(std::vector<char> bytes) : buf_(std::move(bytes)) {}

  void need(std::size_t n) const {
    if (pos_ + n > buf_.size()) fail(ErrorCode::kCorruptFile, "unexpected end of file");
  }
  void raw(char* out, std::size_t n) {
    need(n);
    std::memcpy(out, buf_.data() + pos_, n);
    pos_ += n;
  }
  std::uint64_t le(std::size_t width) {
    need(width);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf_[pos_ + i])) << (8 * i);
    }
    pos_ += width;
    return v;
  }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::size_t count(std::size_t unit) {
    const std::uint64_t n = u64();
    if (n > (buf_.size() - pos_) / std::max<std::size_t>(unit, 1)) fail(ErrorCode::kCorruptFile, "length field exceeds file size");
    return static_cast<std::size_t>(n);
  }
  std::string str() {
    const std::size_t n = count(1);
    std::string s(n, '\0');
    raw(s.data(), n);
    return s;
  }
  std::vector<double> vec() {
    const std::size_t n = count(8);
    std::vector<double> v(n);
    for (auto& x : v) x = f64();
    return v;
  }
  bool done() const { return pos_ == buf_.size(); }

 private:
  std::vector<char> buf_;
  std::size_t pos_ = 0;
};

std::vector<char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoFailure, "cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void check_header(Reader& r, const char (&magic)[8], std::uint32_t version, const std::string& what) {
  char got[8];
  r.raw(got, 8);
  if (std::memcmp(got, magic, 8) != 0) fail(ErrorCode::kFormatVersionMismatch, "not an svmpool " + what + " file");
  if (r.u32() != version) fail(ErrorCode::kFormatVersionMismatch, "unsupported " + what + " format version");
}

void write_pool(Writer& w, const PoolConfig& p) {
  w.f64(p.eta);
  w.f64(p.c_init);
  w.f64(p.growth);
  w.f64(p.c_cap);
  w.u32(p.fixed_c ? 1 : 0);
  w.f64(p.fixed_c.value_or(0.0));
  w.f64(p.solver.tolerance);
  w.i32(p.solver.max_passes);
  w.u64(p.solver.shuffle_seed);
  w.u32(p.solver.augment_bias ? 1 : 0);
}

PoolConfig read_pool(Reader& r) {
  PoolConfig p;
  p.eta = r.f64();
  p.c_init = r.f64();
  p.growth = r.f64();
  p.c_cap = r.f64();
  const bool fixed = r.u32() != 0;
  const double c = r.f64();
  if (fixed) p.fixed_c = c;
  p.solver.tolerance = r.f64();
  p.solver.max_passes = r.i32();
  p.solver.shuffle_seed = r.u64();
  p.solver.augment_bias = r.u32() != 0;
  return p;
}

}  // namespace

bool operator==(const JointModel& a, const JointModel& b) {
  auto same_pool = [](const PoolConfig& x, const PoolConfig& y) {
    return x.eta == y.eta && x.c_init == y.c_init && x.growth == y.growth && x.c_cap == y.c_cap &&
           x.fixed_c == y.fixed_c && x.solver.tolerance == y.solver.tolerance &&
           x.solver.max_passes == y.solver.max_passes && x.solver.shuffle_seed == y.solver.shuffle_seed &&
           x.solver.augment_bias == y.solver.augment_bias;
  };
  return a.dimension == b.dimension && a.classifiers == b.classifiers && a.mean == b.mean && same_pool(a.pool, b.pool);
}

void save_model(const JointModel& model, const std::filesystem::path& path) {
  if (model.mean.size() != model.dimension) fail(ErrorCode::kDimensionMismatch, "model mean has wrong dimension");
  if (model.classifiers.classes.size() != model.classifiers.class_ids.size()) {
    fail(ErrorCode::kCountMismatch, "classifier and class id counts differ");
  }
  Writer w;
  w.raw(kModelMagic, 8);
  w.u32(kModelFormatVersion);
  w.u64(model.dimension);
  write_pool(w, model.pool);
  w.vec(model.mean);
  w.u64(model.classifiers.classes.size());
  for (std::size_t j = 0; j < model.classifiers.classes.size(); ++j) {
    w.i32(model.classifiers.class_ids[j]);
    w.vec(model.classifiers.classes[j].weights);
    w.f64(model.classifiers.classes[j].bias);
  }
  write_file_atomic(path, std::span<const char>(w.bytes()));
}

JointModel load_model(const std::filesystem::path& path) {
  Reader r(read_bytes(path));
  check_header(r, kModelMagic, kModelFormatVersion, "model");
  JointModel m;
  m.dimension = static_cast<std::size_t>(r.u64());
  m.pool = read_pool(r);
  m.mean = r.vec();
  const std::size_t d = r.count(4);
  for (std::size_t j = 0; j < d; ++j) {
    m.classifiers.class_ids.push_back(r.i32());
    Hyperplane h;
    h.weights = r.vec();
    h.bias = r.f64();
    m.classifiers.classes.push_back(std::move(h));
  }
  if (!r.done()) fail(ErrorCode::kCorruptFile, "trailing bytes in model file");
  if (m.mean.size() != m.dimension) fail(ErrorCode::kCorruptFile, "model mean has wrong dimension");
  for (const auto& h : m.classifiers.classes) {
    if (h.weights.size() != m.dimension + 1) fail(ErrorCode::kCorruptFile, "classifier dimension mismatch");
  }
  return m;
}

void save_descriptors(const DescriptorFile& file, const std::filesystem::path& path) {
  const std::size_t dim = file.records.empty() ? 0 : file.records.front().vector.size();
  Writer w;
  w.raw(kDescMagic, 8);
  w.u32(kDescriptorFormatVersion);
  w.u32(static_cast<std::uint32_t>(file.kind));
  w.u64(file.records.size());
  w.u64(dim);
  for (const auto& rec : file.records) {
    if (rec.vector.size() != dim) fail(ErrorCode::kDimensionMismatch, "descriptor records differ in dimension");
    w.str(rec.sequence_id);
    w.i32(rec.label);
    w.u32(rec.satisfied ? 1 : 0);
    w.f64(rec.final_c);
    w.f64(rec.achieved_fraction);
    for (double v : rec.vector) w.f64(v);
  }
  write_file_atomic(path, std::span<const char>(w.bytes()));
}

DescriptorFile load_descriptors(const std::filesystem::path& path) {
  Reader r(read_bytes(path));
  check_header(r, kDescMagic, kDescriptorFormatVersion, "descriptor");
  DescriptorFile f;
  const std::uint32_t kind = r.u32();
  if (kind != 1 && kind != 2) fail(ErrorCode::kCorruptFile, "unknown descriptor kind");
  f.kind = static_cast<DescriptorKind>(kind);
  const std::size_t count = r.count(1);
  const std::size_t dim = static_cast<std::size_t>(r.u64());
  for (std::size_t i = 0; i < count; ++i) {
    DescriptorRecord rec;
    rec.sequence_id = r.str();
    rec.label = r.i32();
    rec.satisfied = r.u32() != 0;
    rec.final_c = r.f64();
    rec.achieved_fraction = r.f64();
    r.need(dim * 8);
    rec.vector.resize(dim);
    for (auto& v : rec.vector) v = r.f64();
    f.records.push_back(std::move(rec));
  }
  if (!r.done()) fail(ErrorCode::kCorruptFile, "trailing bytes in descriptor file");
  return f;
}

}  // namespace svmpool
