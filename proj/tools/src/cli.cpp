#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "report.hpp"
#include "svmpool/dataio.hpp"
#include "svmpool/error.hpp"
#include "svmpool/evaluation.hpp"
#include "svmpool/joint.hpp"
#include "svmpool/mil_pool.hpp"
#include "svmpool/model_io.hpp"

namespace svmpool::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
  // inputs and outputs
  std::string data;
  std::string table;
  std::string out;
  std::string format = "binary";
  std::string kind = "svmp";
  std::string methods = "svmp";
  bool with_joint = false;

  // synthetic generator
  int classes = 10;
  int per_class = 30;
  int dim = 128;
  double rho = 0.2;
  double signal = 3.0;
  double noise = 0.8;
  double background_strength = 12.0;
  int background_prototypes = 8;
  int negative_prototypes = 8;
  double negative_overlap = 0.0;

  // pooling
  double eta = 0.9;
  double c_init = 1e-4;
  double c_growth = 10.0;
  double c_cap = 1e4;
  double c_fixed = 0.0;
  double tolerance = 1e-4;
  int max_passes = 1000;
  std::string kernel = "rbf";
  double gamma = 0.0;

  // classification and fusion
  double c2 = 10.0;
  double beta1 = 1.0;
  double beta2 = 1.0;
  int hom_order = 3;
  std::string hom_kernel = "chi2";
  double hom_period = 0.0;
  std::string descriptor_norm = "l2";

  // joint training
  int max_bcd_iters = 3;
  double z_tolerance = 1e-3;
  std::string vp_scale = "bag_mean_norm";

  int pos_bag_size = 25;
  int neg_bag_size = 50;
  int folds = 3;
  std::uint64_t seed = 0;
  int jobs = 1;

  // set after parsing: whether an optional flag was supplied
  bool has_c_fixed = false;
  bool has_gamma = false;
  bool has_hom_period = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string env_name(const std::string& lname) {
  std::string s = "SVMPOOL_";
  for (char ch : lname) s += ch == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return s;
}

void bind_env(CLI::App& app) {
  for (CLI::Option* opt : app.get_options()) {
    const auto& names = opt->get_lnames();
    if (names.empty() || names.front() == "help") continue;
    opt->envname(env_name(names.front()));
  }
}

void add_input(CLI::App& cmd, Options& o) {
  cmd.add_option("--data", o.data, "dataset manifest (JSON)");
  cmd.add_option("--table", o.table, "frame table to import instead of a manifest");
  cmd.add_option("--pos-bag-size", o.pos_bag_size, "frames resampled per sequence on table import")->capture_default_str();
  cmd.add_option("--neg-bag-size", o.neg_bag_size, "negative frames resampled on table import")->capture_default_str();
}

void add_pool(CLI::App& cmd, Options& o) {
  cmd.add_option("--eta", o.eta, "required positive fraction of each bag")->capture_default_str();
  cmd.add_option("--c-init", o.c_init, "initial C of the growth loop")->capture_default_str();
  cmd.add_option("--c-growth", o.c_growth, "C multiplier per step")->capture_default_str();
  cmd.add_option("--c-cap", o.c_cap, "largest C tried")->capture_default_str();
  cmd.add_option("--c-fixed", o.c_fixed, "single solve at this C (skips the growth loop)");
  cmd.add_option("--tolerance", o.tolerance, "solver stopping tolerance")->capture_default_str();
  cmd.add_option("--max-passes", o.max_passes, "solver pass limit")->capture_default_str();
  cmd.add_option("--jobs", o.jobs, "parallel pooling workers")->capture_default_str();
  cmd.add_option("--seed", o.seed, "global seed")->capture_default_str();
}

void add_nsvmp(CLI::App& cmd, Options& o) {
  cmd.add_option("--kernel", o.kernel, "NSVMP pooling kernel")->check(CLI::IsMember({"linear", "rbf"}))->capture_default_str();
  cmd.add_option("--gamma", o.gamma, "rbf width (default: median heuristic)");
}

void add_classifier(CLI::App& cmd, Options& o) {
  cmd.add_option("--c2", o.c2, "action classifier C")->capture_default_str();
  cmd.add_option("--beta1", o.beta1, "SVMP kernel weight")->capture_default_str();
  cmd.add_option("--beta2", o.beta2, "NSVMP kernel weight")->capture_default_str();
  cmd.add_option("--hom-order", o.hom_order, "homogeneous map order, 0 disables the map")->capture_default_str();
  cmd.add_option("--hom-kernel", o.hom_kernel, "homogeneous kernel family")
      ->check(CLI::IsMember({"chi2", "intersection", "js"}))
      ->capture_default_str();
  cmd.add_option("--hom-period", o.hom_period, "homogeneous map sampling step");
  cmd.add_option("--descriptor-norm", o.descriptor_norm, "descriptor normalization before classification")
      ->check(CLI::IsMember({"l2", "none"}))
      ->capture_default_str();
  cmd.add_option("--folds", o.folds, "cross-validation folds")->capture_default_str();
}

void add_joint(CLI::App& cmd, Options& o) {
  cmd.add_option("--max-bcd-iters", o.max_bcd_iters, "block-coordinate descent iterations")->capture_default_str();
  cmd.add_option("--z-tolerance", o.z_tolerance, "relative change of Z that ends training")->capture_default_str();
  cmd.add_option("--vp-scale", o.vp_scale, "virtual point scaling")
      ->check(CLI::IsMember({"bag_mean_norm", "unit_norm"}))
      ->capture_default_str();
}

void add_output(CLI::App& cmd, Options& o, const char* help) { cmd.add_option("--out", o.out, help); }

// ---------------------------------------------------------------------------
// Config resolution. Everything is validated before any data is touched.

PoolConfig pool_config(const Options& o) {
  PoolConfig p;
  p.eta = o.eta;
  p.c_init = o.c_init;
  p.growth = o.c_growth;
  p.c_cap = o.c_cap;
  if (o.has_c_fixed) p.fixed_c = o.c_fixed;
  p.solver.tolerance = o.tolerance;
  p.solver.max_passes = o.max_passes;
  p.solver.shuffle_seed = o.seed;
  p.validate();
  return p;
}

std::optional<HomogeneousMapConfig> homogeneous_config(const Options& o) {
  if (o.hom_order < 0) fail(ErrorCode::kInvalidConfig, "--hom-order must be >= 0");
  if (o.hom_order == 0) return std::nullopt;
  HomogeneousMapConfig h;
  h.family = parse_homogeneous_kernel(o.hom_kernel);
  h.order = o.hom_order;
  if (o.has_hom_period) h.period = o.hom_period;
  h.validate();
  return h;
}

EvalConfig eval_config(const Options& o) {
  EvalConfig e;
  e.pool = pool_config(o);
  e.nsvmp_pool_kernel = parse_kernel_kind(o.kernel);
  if (o.has_gamma) e.nsvmp_gamma = o.gamma;
  e.c2 = o.c2;
  e.fusion.beta1 = o.beta1;
  e.fusion.beta2 = o.beta2;
  e.homogeneous = homogeneous_config(o);
  e.descriptor_norm = parse_descriptor_norm(o.descriptor_norm);
  e.max_bcd_iters = o.max_bcd_iters;
  e.z_tolerance = o.z_tolerance;
  e.virtual_point_scale = parse_virtual_point_scale(o.vp_scale);
  e.folds = o.folds;
  e.seed = o.seed;
  e.jobs = o.jobs;
  e.validate();
  return e;
}

void check_input_flags(const Options& o) {
  if (o.data.empty() == o.table.empty()) throw UsageError("exactly one of --data or --table is required");
  if (o.pos_bag_size < 1 || o.neg_bag_size < 1) fail(ErrorCode::kInvalidConfig, "bag sizes must be >= 1");
}

void require_out(const Options& o, const char* what) {
  if (o.out.empty()) throw UsageError(std::string("--out is required (") + what + ")");
}

BagDataset load_input(const Options& o) {
  if (!o.table.empty()) {
    TableImportOptions t;
    t.positive_bag_size = static_cast<std::size_t>(o.pos_bag_size);
    t.negative_bag_size = static_cast<std::size_t>(o.neg_bag_size);
    t.seed = o.seed;
    return import_table(o.table, t);
  }
  return load_dataset(o.data);
}

// ---------------------------------------------------------------------------
// Resolved configuration blocks

void put_input(KeyValueWriter& kv, const Options& o) {
  if (!o.table.empty()) {
    kv.put("config.table", o.table);
    kv.put("config.pos_bag_size", o.pos_bag_size);
    kv.put("config.neg_bag_size", o.neg_bag_size);
  } else {
    kv.put("config.data", o.data);
  }
}

void put_pool(KeyValueWriter& kv, const PoolConfig& p) {
  kv.put("config.eta", p.eta);
  kv.put("config.c_init", p.c_init);
  kv.put("config.c_growth", p.growth);
  kv.put("config.c_cap", p.c_cap);
  kv.put("config.c_fixed", p.fixed_c ? fmt(*p.fixed_c) : std::string("none"));
  kv.put("config.tolerance", p.solver.tolerance);
  kv.put("config.max_passes", p.solver.max_passes);
}

void put_eval(KeyValueWriter& kv, const EvalConfig& e) {
  put_pool(kv, e.pool);
  kv.put("config.kernel", kernel_kind_name(e.nsvmp_pool_kernel));
  kv.put("config.gamma", e.nsvmp_gamma ? fmt(*e.nsvmp_gamma) : std::string("median_heuristic"));
  kv.put("config.c2", e.c2);
  kv.put("config.beta1", e.fusion.beta1);
  kv.put("config.beta2", e.fusion.beta2);
  kv.put("config.hom_order", e.homogeneous ? e.homogeneous->order : 0);
  if (e.homogeneous) {
    kv.put("config.hom_kernel", homogeneous_kernel_name(e.homogeneous->family));
    kv.put("config.hom_period", e.homogeneous->resolved_period());
  }
  kv.put("config.descriptor_norm", descriptor_norm_name(e.descriptor_norm));
  kv.put("config.max_bcd_iters", e.max_bcd_iters);
  kv.put("config.z_tolerance", e.z_tolerance);
  kv.put("config.vp_scale", virtual_point_scale_name(e.virtual_point_scale));
  kv.put("config.folds", e.folds);
  kv.put("config.seed", std::to_string(e.seed));
}

void put_dataset(KeyValueWriter& kv, const BagDataset& ds) {
  kv.put("dataset.sequences", ds.sequences.size());
  kv.put("dataset.classes", ds.class_count);
  kv.put("dataset.dimension", ds.dimension);
  kv.put("dataset.negative_frames", ds.negative.frames.size());
  kv.put("dataset.provenance", ds.provenance);
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_file_atomic(path, text);
  }
}

void emit_timings(const std::vector<StageTiming>& timings, const std::string& report_path, std::ostream& err) {
  KeyValueWriter kv;
  kv.comment("wall-clock seconds per stage, summed over folds");
  for (const auto& t : timings) kv.put("timing." + t.stage, t.seconds);
  if (report_path.empty()) {
    err << kv.str();
  } else {
    write_file_atomic(report_path + ".timings.txt", kv.str());
  }
}

// ---------------------------------------------------------------------------
// Commands

int cmd_synth(const Options& o, std::ostream& out) {
  require_out(o, "dataset path");
  SyntheticSpec s;
  s.class_count = o.classes;
  s.sequences_per_class = o.per_class;
  s.frames_per_sequence = o.pos_bag_size;
  s.dimension = o.dim;
  s.informative_fraction = o.rho;
  s.signal_strength = o.signal;
  s.noise_sigma = o.noise;
  s.negative_frame_count = o.neg_bag_size;
  s.background_prototypes = o.background_prototypes;
  s.negative_prototypes = o.negative_prototypes;
  s.negative_overlap = o.negative_overlap;
  s.background_strength = o.background_strength;
  s.seed = o.seed;
  s.validate();
  if (o.format != "binary" && o.format != "table") fail(ErrorCode::kInvalidConfig, "--format must be binary or table");

  const BagDataset ds = synthesize(s);
  if (o.format == "table") {
    export_table(ds, o.out);
  } else {
    save_dataset(ds, o.out);
  }
  KeyValueWriter kv;
  kv.comment("svmpool synth");
  kv.put("command", "synth");
  kv.put("config.out", o.out);
  kv.put("config.format", o.format);
  kv.put("config.classes", s.class_count);
  kv.put("config.per_class", s.sequences_per_class);
  kv.put("config.frames", s.frames_per_sequence);
  kv.put("config.dim", s.dimension);
  kv.put("config.rho", s.informative_fraction);
  kv.put("config.signal", s.signal_strength);
  kv.put("config.noise", s.noise_sigma);
  kv.put("config.negative_frames", s.negative_frame_count);
  kv.put("config.background_strength", s.background_strength);
  kv.put("config.background_prototypes", s.background_prototypes);
  kv.put("config.negative_prototypes", s.negative_prototypes);
  kv.put("config.negative_overlap", s.negative_overlap);
  kv.put("config.seed", std::to_string(s.seed));
  kv.put("informative_per_sequence", s.informative_per_sequence());
  put_dataset(kv, ds);
  out << kv.str();
  return kExitOk;
}

int cmd_pool(const Options& o, std::ostream& out) {
  check_input_flags(o);
  require_out(o, "descriptor file");
  PoolConfig pc = pool_config(o);
  if (o.jobs < 1) fail(ErrorCode::kInvalidConfig, "--jobs must be >= 1");
  if (o.kind != "svmp" && o.kind != "nsvmp") fail(ErrorCode::kInvalidConfig, "--kind must be svmp or nsvmp");
  const KernelKind kk = parse_kernel_kind(o.kernel);
  if (o.has_gamma && !(o.gamma > 0.0)) fail(ErrorCode::kInvalidConfig, "--gamma must be positive");

  const BagDataset raw = load_input(o);
  const auto centered = centralize(raw);
  const BagDataset& ds = centered.dataset;

  DescriptorFile file;
  std::string gamma_text = "none";
  if (o.kind == "svmp") {
    file.kind = DescriptorKind::kSvmp;
    const auto descs = svmp_pool_all(ds.sequences, ds.negative, pc, o.jobs);
    for (std::size_t i = 0; i < descs.size(); ++i) {
      file.records.push_back({ds.sequences[i].sequence_id, ds.sequences[i].label, descs[i].satisfied,
                              descs[i].final_c, descs[i].achieved_fraction, descs[i].vector});
    }
  } else {
    file.kind = DescriptorKind::kNsvmp;
    if (kk == KernelKind::kRbf) {
      double gamma = o.gamma;
      if (!o.has_gamma) {
        std::vector<FeatureVector> frames;
        for (const auto& bag : ds.sequences) frames.insert(frames.end(), bag.frames.begin(), bag.frames.end());
        frames.insert(frames.end(), ds.negative.frames.begin(), ds.negative.frames.end());
        gamma = median_heuristic_gamma(frames, o.seed);
      }
      pc.kernel = KernelSpec::rbf(gamma);
      gamma_text = fmt(gamma);
    } else {
      pc.kernel = KernelSpec::linear();
    }
    const auto descs = nsvmp_pool_all(ds.sequences, ds.negative, pc, o.jobs);
    for (std::size_t i = 0; i < descs.size(); ++i) {
      file.records.push_back({ds.sequences[i].sequence_id, ds.sequences[i].label, descs[i].satisfied,
                              descs[i].final_c, descs[i].achieved_fraction, descs[i].vector});
    }
  }
  save_descriptors(file, o.out);

  std::size_t satisfied = 0;
  double fraction = 0.0;
  for (const auto& r : file.records) {
    satisfied += r.satisfied ? 1 : 0;
    fraction += r.achieved_fraction;
  }
  KeyValueWriter kv;
  kv.comment("svmpool pool");
  kv.put("command", "pool");
  put_input(kv, o);
  kv.put("config.out", o.out);
  kv.put("config.kind", o.kind);
  put_pool(kv, pc);
  if (o.kind == "nsvmp") {
    kv.put("config.kernel", kernel_kind_name(kk));
    kv.put("config.gamma", gamma_text);
  }
  kv.put("config.seed", std::to_string(o.seed));
  put_dataset(kv, raw);
  kv.put("descriptors.count", file.records.size());
  kv.put("descriptors.dimension", file.records.empty() ? std::size_t{0} : file.records.front().vector.size());
  kv.put("descriptors.satisfied", satisfied);
  kv.put("descriptors.mean_achieved_fraction",
         file.records.empty() ? 0.0 : fraction / static_cast<double>(file.records.size()));
  out << kv.str();
  return kExitOk;
}

int cmd_train(const Options& o, std::ostream& out) {
  check_input_flags(o);
  require_out(o, "model file");
  const EvalConfig e = eval_config(o);
  const JointConfig jc = e.joint();

  const BagDataset raw = load_input(o);
  const auto centered = centralize(raw);
  const BcdResult fit = bcd_fit(centered.dataset, jc);

  JointModel model;
  model.dimension = raw.dimension;
  model.classifiers = fit.classifiers;
  model.mean = centered.mean;
  model.pool = jc.pool;
  save_model(model, o.out);

  KeyValueWriter kv;
  kv.comment("svmpool train");
  kv.put("command", "train");
  put_input(kv, o);
  kv.put("config.out", o.out);
  put_pool(kv, jc.pool);
  kv.put("config.c2", jc.c2);
  kv.put("config.max_bcd_iters", jc.max_bcd_iters);
  kv.put("config.z_tolerance", jc.z_tolerance);
  kv.put("config.vp_scale", virtual_point_scale_name(jc.virtual_point_scale));
  kv.put("config.seed", std::to_string(o.seed));
  put_dataset(kv, raw);
  kv.put("bcd.iterations", fit.history.size());
  kv.put("bcd.converged", fit.converged);
  for (std::size_t t = 0; t < fit.history.size(); ++t) {
    const std::string p = "bcd.iter" + std::to_string(t + 1) + ".";
    kv.put(p + "mean_achieved_fraction", fit.history[t].mean_achieved_fraction);
    kv.put(p + "z_relative_change", fit.history[t].z_relative_change);
    kv.put(p + "training_accuracy", fit.history[t].training_accuracy);
  }
  out << kv.str();
  return kExitOk;
}

std::vector<Method> parse_methods(const std::string& list) {
  std::vector<Method> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const Method m = parse_method(item);
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  if (out.empty()) fail(ErrorCode::kInvalidConfig, "--methods is empty");
  return out;
}

void put_method(KeyValueWriter& kv, const MethodReport& r) {
  const std::string p = "method." + std::string(method_name(r.method)) + ".";
  kv.put_list(p + "fold_accuracy", r.fold_accuracies);
  kv.put(p + "mean_accuracy", r.mean_accuracy);
  kv.put_list(p + "per_class_accuracy", r.per_class_accuracy);
  for (std::size_t c = 0; c < r.confusion.size(); ++c) {
    kv.put_list(p + "confusion." + std::to_string(c), r.confusion[c]);
  }
}

int cmd_eval(const Options& o, std::ostream& out, std::ostream& err) {
  check_input_flags(o);
  const EvalConfig e = eval_config(o);
  const auto methods = parse_methods(o.methods);

  const BagDataset ds = load_input(o);
  const EvalResult result = cross_validate(ds, methods, e);

  KeyValueWriter kv;
  kv.comment("svmpool eval");
  kv.put("command", "eval");
  put_input(kv, o);
  kv.put("config.methods", o.methods);
  put_eval(kv, e);
  put_dataset(kv, ds);
  kv.put_list("folds.assignment", result.fold_of);
  for (const auto& r : result.methods) put_method(kv, r);
  emit(kv.str(), o.out, out);
  emit_timings(result.timings, o.out, err);
  return kExitOk;
}

int cmd_report(const Options& o, std::ostream& out, std::ostream& err) {
  check_input_flags(o);
  const EvalConfig e = eval_config(o);
  std::vector<Method> methods = {Method::kAveragePool, Method::kMaxPool, Method::kSvmp, Method::kNsvmp, Method::kFused};
  if (o.with_joint) methods.push_back(Method::kJoint);

  const BagDataset ds = load_input(o);
  const EvalResult result = cross_validate(ds, methods, e);

  std::ostringstream table;
  table << "# method";
  for (int f = 0; f < e.folds; ++f) table << " fold" << f + 1;
  table << " mean\n";
  for (const auto& r : result.methods) {
    table << "# " << method_name(r.method);
    for (double a : r.fold_accuracies) table << ' ' << fmt(a);
    table << ' ' << fmt(r.mean_accuracy) << '\n';
  }

  KeyValueWriter kv;
  kv.comment("svmpool report");
  kv.put("command", "report");
  put_input(kv, o);
  put_eval(kv, e);
  put_dataset(kv, ds);
  for (const auto& r : result.methods) {
    const std::string p = "method." + std::string(method_name(r.method)) + ".";
    kv.put_list(p + "fold_accuracy", r.fold_accuracies);
    kv.put(p + "mean_accuracy", r.mean_accuracy);
  }
  const double svmp = result.report(Method::kSvmp).mean_accuracy;
  kv.put("delta.svmp_minus_average_pool", svmp - result.report(Method::kAveragePool).mean_accuracy);
  kv.put("delta.fused_minus_best_single",
         result.report(Method::kFused).mean_accuracy -
             std::max(svmp, result.report(Method::kNsvmp).mean_accuracy));
  emit(table.str() + kv.str(), o.out, out);
  emit_timings(result.timings, o.out, err);
  return kExitOk;
}

int exit_code_for(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::kUsage: return kExitUsage;
    case ErrorCategory::kData: return kExitData;
    case ErrorCategory::kNumerical: return kExitNumerical;
  }
  return kExitData;
}

std::string_view category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::kUsage: return "usage";
    case ErrorCategory::kData: return "data";
    case ErrorCategory::kNumerical: return "numerical";
  }
  return "data";
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"SVM pooling descriptors, joint training and fused evaluation", "svmpool"};
  app.require_subcommand(1, 1);

  auto* synth = app.add_subcommand("synth", "generate a planted synthetic dataset");
  synth->add_option("--classes", o.classes, "number of classes")->capture_default_str();
  synth->add_option("--per-class", o.per_class, "sequences per class")->capture_default_str();
  synth->add_option("--dim", o.dim, "frame feature dimension")->capture_default_str();
  synth->add_option("--rho", o.rho, "informative fraction per sequence")->capture_default_str();
  synth->add_option("--signal", o.signal, "informative frame signal strength")->capture_default_str();
  synth->add_option("--noise", o.noise, "per-coordinate Gaussian noise")->capture_default_str();
  synth->add_option("--background-strength", o.background_strength, "background frame strength")->capture_default_str();
  synth->add_option("--background-prototypes", o.background_prototypes, "background mixture size")->capture_default_str();
  synth->add_option("--negative-prototypes", o.negative_prototypes, "negative-only prototypes")->capture_default_str();
  synth->add_option("--negative-overlap", o.negative_overlap, "share of negatives drawn from the background")
      ->capture_default_str();
  synth->add_option("--pos-bag-size", o.pos_bag_size, "frames per sequence")->capture_default_str();
  synth->add_option("--neg-bag-size", o.neg_bag_size, "frames in the negative bag")->capture_default_str();
  synth->add_option("--format", o.format, "binary manifest or text table")
      ->check(CLI::IsMember({"binary", "table"}))
      ->capture_default_str();
  synth->add_option("--seed", o.seed, "generator seed")->capture_default_str();
  add_output(*synth, o, "output path");

  auto* pool = app.add_subcommand("pool", "compute SVMP or NSVMP descriptors for every sequence");
  add_input(*pool, o);
  add_pool(*pool, o);
  add_nsvmp(*pool, o);
  pool->add_option("--kind", o.kind, "descriptor kind")->check(CLI::IsMember({"svmp", "nsvmp"}))->capture_default_str();
  add_output(*pool, o, "descriptor file");

  auto* train = app.add_subcommand("train", "joint block-coordinate descent training");
  add_input(*train, o);
  add_pool(*train, o);
  add_joint(*train, o);
  train->add_option("--c2", o.c2, "action classifier C")->capture_default_str();
  add_output(*train, o, "model file");

  auto* eval = app.add_subcommand("eval", "k-fold cross-validation of selected pipelines");
  add_input(*eval, o);
  add_pool(*eval, o);
  add_nsvmp(*eval, o);
  add_classifier(*eval, o);
  add_joint(*eval, o);
  eval->add_option("--methods", o.methods, "comma list of average_pool,max_pool,svmp,nsvmp,fused,joint")
      ->capture_default_str();
  add_output(*eval, o, "report file (default stdout)");

  auto* report = app.add_subcommand("report", "compare pooling baselines side by side");
  add_input(*report, o);
  add_pool(*report, o);
  add_nsvmp(*report, o);
  add_classifier(*report, o);
  add_joint(*report, o);
  report->add_flag("--with-joint", o.with_joint, "also run joint training");
  add_output(*report, o, "report file (default stdout)");

  for (CLI::App* sub : {synth, pool, train, eval, report}) bind_env(*sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  auto given = [](CLI::App* sub, const char* name) {
    const CLI::Option* opt = sub->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  CLI::App* active = app.get_subcommands().front();
  o.has_c_fixed = given(active, "--c-fixed");
  o.has_gamma = given(active, "--gamma");
  o.has_hom_period = given(active, "--hom-period");

  try {
    if (active == synth) return cmd_synth(o, out);
    if (active == pool) return cmd_pool(o, out);
    if (active == train) return cmd_train(o, out);
    if (active == eval) return cmd_eval(o, out, err);
    return cmd_report(o, out, err);
  } catch (const UsageError& e) {
    err << "svmpool: error category=usage code=Usage message=" << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    const ErrorCategory c = error_category(e.code());
    err << "svmpool: error category=" << category_name(c) << " code=" << error_code_name(e.code())
        << " message=" << e.what() << '\n';
    return exit_code_for(c);
  } catch (const std::exception& e) {
    err << "svmpool: error category=data code=Unexpected message=" << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace svmpool::cli
