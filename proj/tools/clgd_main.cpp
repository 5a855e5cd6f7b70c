// Command-line front end: distance evaluation, registration, scene flow,
// synthetic scenes, evaluation, and benchmark sweeps.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "clgd/baselines.hpp"
#include "clgd/eval.hpp"
#include "clgd/io.hpp"
#include "clgd/metric.hpp"
#include "clgd/parallel.hpp"
#include "clgd/rng.hpp"
#include "clgd/se3.hpp"
#include "clgd/solvers.hpp"
#include "clgd/synth.hpp"

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

json vec3_json(const clgd::Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json mat3_row_major(const clgd::Mat3& m) {
  json rows = json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) rows.push_back(m(r, c));
  }
  return rows;
}

json vec6_json(const clgd::Vec6& v) {
  json out = json::array();
  for (int i = 0; i < 6; ++i) out.push_back(v(i));
  return out;
}

void write_json_file(const json& j, const std::string& path) {
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (out == nullptr) {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  const std::string text = j.dump(2);
  std::fwrite(text.data(), 1, text.size(), out);
  std::fputc('\n', out);
  if (std::fclose(out) != 0) {
    throw std::runtime_error("error while writing " + path);
  }
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& header) {
    out_ = std::fopen(path.c_str(), "w");
    if (out_ == nullptr) {
      throw std::runtime_error("cannot open " + path + " for writing");
    }
    std::fprintf(out_, "%s\n", header.c_str());
  }
  ~CsvWriter() {
    if (out_ != nullptr) std::fclose(out_);
  }
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void cell(double v) {
    sep();
    std::fprintf(out_, "%.17g", v);
  }
  void cell(long long v) {
    sep();
    std::fprintf(out_, "%lld", v);
  }
  void cell(const std::string& v) {
    sep();
    std::fprintf(out_, "%s", v.c_str());
  }
  void end_row() {
    std::fputc('\n', out_);
    first_ = true;
  }

 private:
  void sep() {
    if (!first_) std::fputc(',', out_);
    first_ = false;
  }
  std::FILE* out_ = nullptr;
  bool first_ = true;
};

// Reference/metric flags shared by dist, register, flow, and bench.
struct ClgdFlags {
  int k = 5;
  double beta = 0.0;
  double epsilon = 1e-12;
  int ref_r = 10;
  double ref_t = 3.0;
  bool ref_include_other = true;
  bool ref_resample = false;
};

void add_clgd_flags(CLI::App* cmd, ClgdFlags& f) {
  cmd->add_option("--k", f.k, "neighborhood size K")->capture_default_str();
  cmd->add_option("--beta", f.beta, "confidence sharpness")
      ->capture_default_str();
  cmd->add_option("--epsilon", f.epsilon, "inverse-square weight guard")
      ->capture_default_str();
  cmd->add_option("--ref-r", f.ref_r, "noise repetitions per point")
      ->capture_default_str();
  cmd->add_option("--ref-t", f.ref_t, "noise scale multiplier")
      ->capture_default_str();
  cmd->add_option("--ref-include-other", f.ref_include_other,
                  "append the other cloud to the references")
      ->capture_default_str();
  cmd->add_flag("--ref-resample", f.ref_resample,
                "resample references every solver iteration");
}

clgd::ClgdParams to_params(const ClgdFlags& f, uint64_t seed) {
  clgd::ClgdParams params;
  params.k = f.k;
  params.beta = f.beta;
  params.epsilon = f.epsilon;
  params.reference.repetitions = f.ref_r;
  params.reference.noise_scale = f.ref_t;
  params.reference.include_other = f.ref_include_other;
  params.reference.resample_each_iteration = f.ref_resample;
  params.reference.seed = seed;
  return params;
}

json clgd_config_json(const ClgdFlags& f, uint64_t seed) {
  json cfg;
  cfg["k"] = f.k;
  cfg["beta"] = f.beta;
  cfg["epsilon"] = f.epsilon;
  cfg["ref_r"] = f.ref_r;
  cfg["ref_t"] = f.ref_t;
  cfg["ref_include_other"] = f.ref_include_other;
  cfg["ref_resample"] = f.ref_resample;
  cfg["seed"] = seed;
  cfg["rng"] = clgd::kRngAlgorithm;
  return cfg;
}

json optimizer_config_json(const clgd::OptimizerConfig& opt) {
  json cfg;
  cfg["iterations"] = opt.iterations;
  cfg["learning_rate"] = opt.learning_rate;
  cfg["beta1"] = opt.beta1;
  cfg["beta2"] = opt.beta2;
  cfg["adam_epsilon"] = opt.epsilon;
  return cfg;
}

json trace_json(const clgd::SolveTrace& trace) {
  json out;
  out["objective"] = trace.objective;
  out["best_iteration"] = trace.best_iteration;
  out["best_objective"] = trace.best_objective;
  return out;
}

// Ground-truth transform file: three rotation rows then the translation.
void save_transform(const clgd::Mat3& r, const clgd::Vec3& t,
                    const std::string& path) {
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (out == nullptr) {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  std::fprintf(out, "# rotation matrix rows, then translation\n");
  for (int row = 0; row < 3; ++row) {
    std::fprintf(out, "%.17g %.17g %.17g\n", r(row, 0), r(row, 1), r(row, 2));
  }
  std::fprintf(out, "%.17g %.17g %.17g\n", t.x(), t.y(), t.z());
  if (std::fclose(out) != 0) {
    throw std::runtime_error("error while writing " + path);
  }
}

void load_transform(const std::string& path, clgd::Mat3& r, clgd::Vec3& t) {
  const clgd::PointCloud rows = clgd::load_cloud(path, clgd::CloudFormat::kXyz);
  if (rows.size() != 4) {
    throw std::runtime_error(
        path + ": expected 4 rows (rotation matrix rows then translation), "
               "found " + std::to_string(rows.size()));
  }
  for (int row = 0; row < 3; ++row) {
    r(row, 0) = rows[static_cast<std::size_t>(row)].x();
    r(row, 1) = rows[static_cast<std::size_t>(row)].y();
    r(row, 2) = rows[static_cast<std::size_t>(row)].z();
  }
  t = rows[3];
}

std::vector<clgd::Vec3> load_flow(const std::string& path) {
  return clgd::load_cloud(path, clgd::CloudFormat::kXyz).points;
}

void save_flow(const std::vector<clgd::Vec3>& flow, const std::string& path) {
  clgd::save_cloud(clgd::PointCloud(flow), path, clgd::CloudFormat::kXyz);
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// ---------------------------------------------------------------- dist ----

struct DistOptions {
  std::string a, b;
  std::string metric = "clgd";
  std::string format = "auto";
  ClgdFlags clgd;
  uint64_t seed = 0;
  bool symmetric = false;
  std::size_t emd_cap = clgd::kEmdDefaultCap;
  std::string per_ref_out;
  std::string out;
};

int cmd_dist(const DistOptions& o) {
  const auto start = Clock::now();
  const clgd::CloudFormat format = clgd::cloud_format_from_name(o.format);
  const clgd::PointCloud a = clgd::load_cloud(o.a, format);
  const clgd::PointCloud b = clgd::load_cloud(o.b, format);

  if (o.metric != "clgd" && o.metric != "cd" && o.metric != "hd" &&
      o.metric != "emd") {
    throw std::invalid_argument("--metric: unknown metric '" + o.metric +
                                "' (expected clgd, cd, hd, or emd)");
  }
  if (o.metric != "clgd" && !o.per_ref_out.empty()) {
    throw std::invalid_argument(
        "--per-ref-out: only available with --metric clgd");
  }

  json result;
  double value = 0.0;
  if (o.metric == "clgd") {
    const clgd::ClgdParams params = to_params(o.clgd, o.seed);
    const clgd::PointCloud* other =
        params.reference.include_other ? &b : nullptr;
    const clgd::ReferenceSet refs =
        clgd::generate_references(a, other, params.reference);
    const clgd::ClgdReport report = clgd::clgd_distance(a, b, refs, params);
    value = report.value;
    result["value"] = report.value;
    result["references"] = refs.size();
    if (o.symmetric) {
      value = 0.5 * (report.value + clgd::clgd_distance_auto(b, a, params).value);
      result["symmetric_value"] = value;
    }
    if (!o.per_ref_out.empty()) {
      CsvWriter csv(o.per_ref_out, "ref_x,ref_y,ref_z,d,score");
      for (std::size_t m = 0; m < refs.size(); ++m) {
        csv.cell(refs.points[m].x());
        csv.cell(refs.points[m].y());
        csv.cell(refs.points[m].z());
        csv.cell(report.per_reference[m]);
        csv.cell(report.scores[m]);
        csv.end_row();
      }
    }
  } else if (o.metric == "cd") {
    const clgd::ChamferReport report = clgd::chamfer(a, b);
    value = report.value;
    result["value"] = report.value;
    result["forward_mean"] = report.forward_mean;
    result["backward_mean"] = report.backward_mean;
  } else if (o.metric == "hd") {
    const clgd::HausdorffReport report = clgd::hausdorff(a, b);
    value = report.value;
    result["value"] = report.value;
    result["forward"] = report.forward;
    result["backward"] = report.backward;
  } else if (o.metric == "emd") {
    const clgd::EmdReport report = clgd::emd_exact(a, b, o.emd_cap);
    value = report.value;
    result["value"] = report.value;
  }

  if (!o.out.empty()) {
    json doc;
    json cfg = clgd_config_json(o.clgd, o.seed);
    cfg["command"] = "dist";
    cfg["metric"] = o.metric;
    cfg["a"] = o.a;
    cfg["b"] = o.b;
    cfg["symmetric"] = o.symmetric;
    doc["config"] = cfg;
    doc["result"] = result;
    doc["timing"] = {{"wall_seconds", seconds_since(start)}};
    write_json_file(doc, o.out);
  }
  std::cout << fmt6(value) << "\n";
  return 0;
}

// ------------------------------------------------------------ register ----

struct RegisterOptions {
  std::string src, tgt;
  std::string metric = "clgd";
  std::string format = "auto";
  ClgdFlags clgd;
  uint64_t seed = 0;
  int iters = 1000;
  double lr = 0.02;
  int log_every = 0;
  std::size_t emd_cap = clgd::kEmdDefaultCap;
  std::string gt;
  std::string out;
};

int cmd_register(const RegisterOptions& o) {
  const clgd::CloudFormat format = clgd::cloud_format_from_name(o.format);
  const clgd::PointCloud src = clgd::load_cloud(o.src, format);
  const clgd::PointCloud tgt = clgd::load_cloud(o.tgt, format);
  const clgd::Metric metric = clgd::metric_from_name(o.metric);

  clgd::OptimizerConfig opt;
  opt.iterations = o.iters;
  opt.learning_rate = o.lr;
  opt.log_every = o.log_every;

  const clgd::RegistrationResult res = clgd::register_rigid(
      src, tgt, metric, to_params(o.clgd, o.seed), opt, o.seed);

  json doc;
  json cfg = clgd_config_json(o.clgd, o.seed);
  cfg["command"] = "register";
  cfg["metric"] = o.metric;
  cfg["src"] = o.src;
  cfg["tgt"] = o.tgt;
  cfg["optimizer"] = optimizer_config_json(opt);
  doc["config"] = cfg;

  json result;
  result["rotation"] = mat3_row_major(res.transform.rotation);
  result["translation"] = vec3_json(res.transform.translation);
  result["xi"] = vec6_json(res.transform.xi());
  result["trace"] = trace_json(res.trace);

  std::string eval_line;
  if (!o.gt.empty()) {
    clgd::Mat3 r_gt;
    clgd::Vec3 t_gt;
    load_transform(o.gt, r_gt, t_gt);
    const clgd::RegistrationError err = clgd::registration_error(
        res.transform.rotation, res.transform.translation, r_gt, t_gt);
    result["eval"] = {{"re_degrees", err.re_degrees}, {"te", err.te}};
    eval_line = " re_degrees=" + fmt6(err.re_degrees) + " te=" + fmt6(err.te);
  }
  doc["result"] = result;
  doc["timing"] = {{"wall_seconds", res.trace.wall_seconds}};
  if (!o.out.empty()) write_json_file(doc, o.out);

  std::cout << "metric=" << o.metric
            << " best_objective=" << fmt6(res.trace.best_objective)
            << " best_iteration=" << res.trace.best_iteration << eval_line
            << "\n";
  return 0;
}

// ---------------------------------------------------------------- flow ----

struct FlowOptions {
  std::string src, tgt;
  std::string metric = "clgd";
  std::string format = "auto";
  ClgdFlags clgd;
  uint64_t seed = 0;
  double alpha = 50.0;
  int ks = 30;
  int iters = 500;
  double lr = 0.01;
  int log_every = 0;
  std::string gt;
  std::string out;
  std::string out_flow;
};

int cmd_flow(const FlowOptions& o) {
  const clgd::CloudFormat format = clgd::cloud_format_from_name(o.format);
  const clgd::PointCloud src = clgd::load_cloud(o.src, format);
  const clgd::PointCloud tgt = clgd::load_cloud(o.tgt, format);
  const clgd::Metric metric = clgd::metric_from_name(o.metric);

  clgd::OptimizerConfig opt;
  opt.iterations = o.iters;
  opt.learning_rate = o.lr;
  opt.log_every = o.log_every;

  const clgd::FlowResult res =
      clgd::estimate_flow(src, tgt, metric, to_params(o.clgd, o.seed), o.alpha,
                          o.ks, opt, o.seed);

  json doc;
  json cfg = clgd_config_json(o.clgd, o.seed);
  cfg["command"] = "flow";
  cfg["metric"] = o.metric;
  cfg["src"] = o.src;
  cfg["tgt"] = o.tgt;
  cfg["alpha"] = o.alpha;
  cfg["ks"] = o.ks;
  cfg["optimizer"] = optimizer_config_json(opt);
  doc["config"] = cfg;

  json result;
  json flow_rows = json::array();
  for (const clgd::Vec3& f : res.flow) flow_rows.push_back(vec3_json(f));
  result["flow"] = flow_rows;
  result["trace"] = trace_json(res.trace);

  std::string eval_line;
  if (!o.gt.empty()) {
    const std::vector<clgd::Vec3> gt = load_flow(o.gt);
    const clgd::FlowError err = clgd::flow_error(res.flow, gt);
    result["eval"] = {{"epe3d", err.epe3d},
                      {"acc_005", err.acc_005},
                      {"acc_01", err.acc_01},
                      {"outliers", err.outliers}};
    eval_line = " epe3d=" + fmt6(err.epe3d);
  }
  doc["result"] = result;
  doc["timing"] = {{"wall_seconds", res.trace.wall_seconds}};
  if (!o.out.empty()) write_json_file(doc, o.out);
  if (!o.out_flow.empty()) save_flow(res.flow, o.out_flow);

  std::cout << "metric=" << o.metric
            << " best_objective=" << fmt6(res.trace.best_objective)
            << " best_iteration=" << res.trace.best_iteration << eval_line
            << "\n";
  return 0;
}

// --------------------------------------------------------------- synth ----

struct SynthOptions {
  std::string kind = "sphere";
  int n = 1024;
  uint64_t seed = 0;
  double rot_deg = 0.0;
  double trans = 0.0;
  double crop = 0.0;
  double noise = 0.0;
  bool resample_target = false;
  std::vector<double> flow_a;
  std::vector<double> flow_b;
  std::string out_src;
  std::string out_tgt;
  std::string out_gt_transform;
  std::string out_gt_flow;
};

int cmd_synth(const SynthOptions& o) {
  clgd::SceneSpec spec;
  spec.kind = clgd::scene_kind_from_name(o.kind);
  spec.n = o.n;
  spec.seed = o.seed;
  spec.crop_fraction = o.crop;
  spec.noise_sigma = o.noise;
  spec.resample_target = o.resample_target;
  if (o.rot_deg != 0.0 || o.trans != 0.0) {
    spec.xi = clgd::random_rigid_motion(o.seed, o.rot_deg, o.trans);
  }
  if (!o.flow_a.empty() || !o.flow_b.empty()) {
    if (o.flow_a.size() != 3 || o.flow_b.size() != 3) {
      throw std::invalid_argument(
          "--flow-a/--flow-b: both per-object flows need 3 components");
    }
    spec.object_flows = {clgd::Vec3(o.flow_a[0], o.flow_a[1], o.flow_a[2]),
                         clgd::Vec3(o.flow_b[0], o.flow_b[1], o.flow_b[2])};
  }

  const clgd::Scene scene = clgd::synth_scene(spec);
  clgd::save_cloud(scene.src, o.out_src);
  clgd::save_cloud(scene.tgt, o.out_tgt);
  if (!o.out_gt_transform.empty()) {
    save_transform(scene.rotation_gt, scene.translation_gt,
                   o.out_gt_transform);
  }
  if (!o.out_gt_flow.empty()) {
    save_flow(scene.flow_gt, o.out_gt_flow);
  }
  std::cout << "kind=" << o.kind << " src=" << scene.src.size()
            << " tgt=" << scene.tgt.size() << "\n";
  return 0;
}

// ---------------------------------------------------------------- eval ----

struct EvalOptions {
  std::string pred;
  std::string gt;
  std::string out;
};

int cmd_eval(const EvalOptions& o) {
  std::ifstream in(o.pred);
  if (!in) {
    throw std::runtime_error("cannot open " + o.pred + " for reading");
  }
  json pred;
  try {
    in >> pred;
  } catch (const json::exception& e) {
    throw std::runtime_error(o.pred + ": not valid JSON (" +
                             std::string(e.what()) + ")");
  }
  if (!pred.contains("result")) {
    throw std::runtime_error(o.pred + ": no 'result' object");
  }
  const json& result = pred["result"];

  json doc;
  doc["config"] = {{"command", "eval"}, {"pred", o.pred}, {"gt", o.gt}};
  std::string line;
  if (result.contains("rotation")) {
    clgd::Mat3 r_hat;
    for (int row = 0; row < 3; ++row) {
      for (int col = 0; col < 3; ++col) {
        r_hat(row, col) = result["rotation"][static_cast<std::size_t>(
            row * 3 + col)].get<double>();
      }
    }
    clgd::Vec3 t_hat(result["translation"][0].get<double>(),
                     result["translation"][1].get<double>(),
                     result["translation"][2].get<double>());
    clgd::Mat3 r_gt;
    clgd::Vec3 t_gt;
    load_transform(o.gt, r_gt, t_gt);
    const clgd::RegistrationError err =
        clgd::registration_error(r_hat, t_hat, r_gt, t_gt);
    doc["result"] = {{"re_degrees", err.re_degrees}, {"te", err.te}};
    line = "re_degrees=" + fmt6(err.re_degrees) + " te=" + fmt6(err.te);
  } else if (result.contains("flow")) {
    std::vector<clgd::Vec3> flow;
    for (const json& row : result["flow"]) {
      flow.emplace_back(row[0].get<double>(), row[1].get<double>(),
                        row[2].get<double>());
    }
    const std::vector<clgd::Vec3> gt = load_flow(o.gt);
    const clgd::FlowError err = clgd::flow_error(flow, gt);
    doc["result"] = {{"epe3d", err.epe3d},
                     {"acc_005", err.acc_005},
                     {"acc_01", err.acc_01},
                     {"outliers", err.outliers}};
    line = "epe3d=" + fmt6(err.epe3d) + " acc_005=" + fmt6(err.acc_005) +
           " acc_01=" + fmt6(err.acc_01) + " outliers=" + fmt6(err.outliers);
  } else {
    throw std::runtime_error(
        o.pred + ": 'result' has neither 'rotation' nor 'flow'");
  }
  if (!o.out.empty()) write_json_file(doc, o.out);
  std::cout << line << "\n";
  return 0;
}

// --------------------------------------------------------------- bench ----

struct BenchOptions {
  std::string suite;
  std::string out;
  uint64_t seed = 0;
  int n = 512;
  int trials = 3;
  int iters = 500;
  double lr = 0.02;
  ClgdFlags clgd;
};

struct TimedDist {
  double value = 0.0;
  double wall_ms = 0.0;
  long long references = 0;
};

// Timed CLGD evaluation on a seeded sphere pair (median of `reps` runs).
TimedDist timed_dist(int n, const ClgdFlags& flags, uint64_t seed, int reps) {
  clgd::SceneSpec spec;
  spec.kind = clgd::SceneKind::kSphere;
  spec.n = n;
  spec.seed = seed;
  spec.xi = clgd::random_rigid_motion(seed, 20.0, 0.2);
  const clgd::Scene scene = clgd::synth_scene(spec);

  const clgd::ClgdParams params = to_params(flags, seed);
  const clgd::PointCloud* other =
      params.reference.include_other ? &scene.tgt : nullptr;
  const clgd::ReferenceSet refs =
      clgd::generate_references(scene.src, other, params.reference);

  TimedDist out;
  out.references = static_cast<long long>(refs.size());
  std::vector<double> times;
  for (int rep = 0; rep < std::max(1, reps); ++rep) {
    const auto start = Clock::now();
    out.value = clgd::clgd_distance(scene.src, scene.tgt, refs, params).value;
    times.push_back(seconds_since(start) * 1000.0);
  }
  out.wall_ms = median(times);
  return out;
}

int bench_scaling(const BenchOptions& o) {
  CsvWriter csv(o.out, "n,m,k,value,wall_ms");
  for (int n : {1024, 2048, 4096, 8192}) {
    const TimedDist r = timed_dist(n, o.clgd, o.seed, o.trials);
    csv.cell(static_cast<long long>(n));
    csv.cell(r.references);
    csv.cell(static_cast<long long>(o.clgd.k));
    csv.cell(r.value);
    csv.cell(r.wall_ms);
    csv.end_row();
  }
  return 0;
}

int bench_ablation_k(const BenchOptions& o) {
  CsvWriter csv(o.out, "k,value,wall_ms");
  for (int k : {1, 3, 5, 10}) {
    ClgdFlags flags = o.clgd;
    flags.k = k;
    const TimedDist r = timed_dist(o.n, flags, o.seed, o.trials);
    csv.cell(static_cast<long long>(k));
    csv.cell(r.value);
    csv.cell(r.wall_ms);
    csv.end_row();
  }
  return 0;
}

int bench_ablation_r(const BenchOptions& o) {
  CsvWriter csv(o.out, "r,m,value,wall_ms");
  for (int rr : {1, 5, 10, 20}) {
    ClgdFlags flags = o.clgd;
    flags.ref_r = rr;
    const TimedDist r = timed_dist(o.n, flags, o.seed, o.trials);
    csv.cell(static_cast<long long>(rr));
    csv.cell(r.references);
    csv.cell(r.value);
    csv.cell(r.wall_ms);
    csv.end_row();
  }
  return 0;
}

int bench_ablation_t(const BenchOptions& o) {
  CsvWriter csv(o.out, "t,value,wall_ms");
  for (double t : {0.0, 1.0, 3.0, 5.0}) {
    ClgdFlags flags = o.clgd;
    flags.ref_t = t;
    const TimedDist r = timed_dist(o.n, flags, o.seed, o.trials);
    csv.cell(t);
    csv.cell(r.value);
    csv.cell(r.wall_ms);
    csv.end_row();
  }
  return 0;
}

// Registration quality on 40%-cropped scenes as beta sweeps; the paper's
// partial-overlap regime.
int bench_ablation_beta(const BenchOptions& o) {
  CsvWriter csv(o.out, "beta,median_re_degrees,median_te,wall_ms");
  for (double beta : {0.0, 1.0, 3.0, 5.0, 10.0}) {
    std::vector<double> res, tes;
    const auto start = Clock::now();
    for (int trial = 0; trial < o.trials; ++trial) {
      const uint64_t trial_seed =
          clgd::mix_stream(o.seed, 0xbe1a, static_cast<uint64_t>(trial));
      clgd::SceneSpec spec;
      spec.kind = clgd::SceneKind::kSphere;
      spec.n = o.n;
      spec.seed = trial_seed;
      spec.xi = clgd::random_rigid_motion(trial_seed, 30.0, 0.3);
      spec.crop_fraction = 0.4;
      const clgd::Scene scene = clgd::synth_scene(spec);

      ClgdFlags flags = o.clgd;
      flags.beta = beta;
      clgd::OptimizerConfig opt;
      opt.iterations = o.iters;
      opt.learning_rate = o.lr;
      const clgd::RegistrationResult reg =
          clgd::register_rigid(scene.src, scene.tgt, clgd::Metric::kClgd,
                               to_params(flags, trial_seed), opt, trial_seed);
      const clgd::RegistrationError err = clgd::registration_error(
          reg.transform.rotation, reg.transform.translation, scene.rotation_gt,
          scene.translation_gt);
      res.push_back(err.re_degrees);
      tes.push_back(err.te);
    }
    csv.cell(beta);
    csv.cell(median(res));
    csv.cell(median(tes));
    csv.cell(seconds_since(start) * 1000.0);
    csv.end_row();
  }
  return 0;
}

int cmd_bench(const BenchOptions& o) {
  if (o.suite == "scaling") return bench_scaling(o);
  if (o.suite == "ablation-K") return bench_ablation_k(o);
  if (o.suite == "ablation-R") return bench_ablation_r(o);
  if (o.suite == "ablation-T") return bench_ablation_t(o);
  if (o.suite == "ablation-beta") return bench_ablation_beta(o);
  throw std::invalid_argument(
      "--suite: unknown suite '" + o.suite +
      "' (expected scaling, ablation-K, ablation-R, ablation-T, or "
      "ablation-beta)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"calibrated local geometry distance toolkit"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::simple);

  int threads = 0;
  app.add_option("--threads", threads,
                 "worker threads for metric evaluation (0 = all cores)")
      ->envname("CLGD_THREADS")
      ->capture_default_str();

  DistOptions dist;
  CLI::App* cmd_dist_app = app.add_subcommand(
      "dist", "distance between two point clouds");
  cmd_dist_app->add_option("--a", dist.a, "first cloud")->required();
  cmd_dist_app->add_option("--b", dist.b, "second cloud (CLGD references "
                           "are seeded from --a)")->required();
  cmd_dist_app->add_option("--metric", dist.metric, "clgd, cd, hd, or emd")
      ->capture_default_str();
  cmd_dist_app->add_option("--format", dist.format, "auto, xyz, or ply")
      ->capture_default_str();
  add_clgd_flags(cmd_dist_app, dist.clgd);
  cmd_dist_app->add_option("--seed", dist.seed, "reference RNG seed")
      ->capture_default_str();
  cmd_dist_app->add_flag("--symmetric", dist.symmetric,
                         "average both directed CLGD evaluations");
  cmd_dist_app->add_option("--emd-cap", dist.emd_cap,
                           "exact assignment size cap")
      ->capture_default_str();
  cmd_dist_app->add_option("--per-ref-out", dist.per_ref_out,
                           "CSV of per-reference distances and scores");
  cmd_dist_app->add_option("--out", dist.out, "JSON report path");

  RegisterOptions reg;
  CLI::App* cmd_reg_app =
      app.add_subcommand("register", "rigid registration src -> tgt");
  cmd_reg_app->add_option("--src", reg.src, "moving cloud")->required();
  cmd_reg_app->add_option("--tgt", reg.tgt, "static cloud")->required();
  cmd_reg_app->add_option("--metric", reg.metric, "clgd, cd, or emd")
      ->capture_default_str();
  cmd_reg_app->add_option("--format", reg.format, "auto, xyz, or ply")
      ->capture_default_str();
  add_clgd_flags(cmd_reg_app, reg.clgd);
  cmd_reg_app->add_option("--seed", reg.seed, "reference RNG seed")
      ->capture_default_str();
  cmd_reg_app->add_option("--iters", reg.iters, "optimizer iterations")
      ->capture_default_str();
  cmd_reg_app->add_option("--lr", reg.lr, "learning rate")
      ->capture_default_str();
  cmd_reg_app->add_option("--log-every", reg.log_every,
                          "progress print period (0 = silent)")
      ->capture_default_str();
  cmd_reg_app->add_option("--emd-cap", reg.emd_cap,
                          "exact assignment size cap")
      ->capture_default_str();
  cmd_reg_app->add_option("--gt", reg.gt,
                          "ground-truth transform file for evaluation");
  cmd_reg_app->add_option("--out", reg.out, "JSON report path");

  FlowOptions flow;
  CLI::App* cmd_flow_app =
      app.add_subcommand("flow", "scene-flow estimation src -> tgt");
  cmd_flow_app->add_option("--src", flow.src, "moving cloud")->required();
  cmd_flow_app->add_option("--tgt", flow.tgt, "static cloud")->required();
  cmd_flow_app->add_option("--metric", flow.metric, "clgd, cd, or emd")
      ->capture_default_str();
  cmd_flow_app->add_option("--format", flow.format, "auto, xyz, or ply")
      ->capture_default_str();
  add_clgd_flags(cmd_flow_app, flow.clgd);
  cmd_flow_app->add_option("--seed", flow.seed, "reference RNG seed")
      ->capture_default_str();
  cmd_flow_app->add_option("--alpha", flow.alpha, "smoothness weight")
      ->capture_default_str();
  cmd_flow_app->add_option("--ks", flow.ks, "smoothness neighborhood size")
      ->capture_default_str();
  cmd_flow_app->add_option("--iters", flow.iters, "optimizer iterations")
      ->capture_default_str();
  cmd_flow_app->add_option("--lr", flow.lr, "learning rate")
      ->capture_default_str();
  cmd_flow_app->add_option("--log-every", flow.log_every,
                           "progress print period (0 = silent)")
      ->capture_default_str();
  cmd_flow_app->add_option("--gt", flow.gt,
                           "ground-truth flow file for evaluation");
  cmd_flow_app->add_option("--out", flow.out, "JSON report path");
  cmd_flow_app->add_option("--out-flow", flow.out_flow,
                           "write the flow as an XYZ-style text file");

  SynthOptions synth;
  CLI::App* cmd_synth_app =
      app.add_subcommand("synth", "generate a synthetic scene");
  cmd_synth_app->add_option("--kind", synth.kind,
                            "sphere, plane, torus, or two-objects")
      ->capture_default_str();
  cmd_synth_app->add_option("--n", synth.n, "source point count")
      ->capture_default_str();
  cmd_synth_app->add_option("--seed", synth.seed, "scene RNG seed")
      ->capture_default_str();
  cmd_synth_app->add_option("--rot-deg", synth.rot_deg,
                            "rotation angle about a seeded random axis")
      ->capture_default_str();
  cmd_synth_app->add_option("--trans", synth.trans,
                            "translation norm in a seeded random direction")
      ->capture_default_str();
  cmd_synth_app->add_option("--crop", synth.crop,
                            "fraction of the target cropped away")
      ->capture_default_str();
  cmd_synth_app->add_option("--noise", synth.noise,
                            "additive Gaussian noise sigma on the target")
      ->capture_default_str();
  cmd_synth_app->add_flag("--resample-target", synth.resample_target,
                          "sample the target surface independently");
  cmd_synth_app->add_option("--flow-a", synth.flow_a,
                            "two-objects: flow of object 0 (3 reals)")
      ->expected(3);
  cmd_synth_app->add_option("--flow-b", synth.flow_b,
                            "two-objects: flow of object 1 (3 reals)")
      ->expected(3);
  cmd_synth_app->add_option("--out-src", synth.out_src, "source cloud path")
      ->required();
  cmd_synth_app->add_option("--out-tgt", synth.out_tgt, "target cloud path")
      ->required();
  cmd_synth_app->add_option("--out-gt-transform", synth.out_gt_transform,
                            "ground-truth transform path");
  cmd_synth_app->add_option("--out-gt-flow", synth.out_gt_flow,
                            "ground-truth flow path");

  EvalOptions eval;
  CLI::App* cmd_eval_app =
      app.add_subcommand("eval", "evaluate a solver JSON against ground truth");
  cmd_eval_app->add_option("--pred", eval.pred, "register/flow JSON output")
      ->required();
  cmd_eval_app->add_option("--gt", eval.gt, "ground-truth file")->required();
  cmd_eval_app->add_option("--out", eval.out, "JSON report path");

  BenchOptions bench;
  CLI::App* cmd_bench_app =
      app.add_subcommand("bench", "benchmark and ablation sweeps");
  cmd_bench_app->add_option("--suite", bench.suite,
                            "scaling, ablation-K, ablation-R, ablation-T, or "
                            "ablation-beta")
      ->required();
  cmd_bench_app->add_option("--out", bench.out, "CSV output path")->required();
  cmd_bench_app->add_option("--seed", bench.seed, "sweep RNG seed")
      ->capture_default_str();
  cmd_bench_app->add_option("--n", bench.n, "cloud size for ablation suites")
      ->capture_default_str();
  cmd_bench_app->add_option("--trials", bench.trials,
                            "timing repetitions / solve trials")
      ->capture_default_str();
  cmd_bench_app->add_option("--iters", bench.iters,
                            "solver iterations (ablation-beta)")
      ->capture_default_str();
  cmd_bench_app->add_option("--lr", bench.lr, "learning rate (ablation-beta)")
      ->capture_default_str();
  add_clgd_flags(cmd_bench_app, bench.clgd);

  CLI11_PARSE(app, argc, argv);

  try {
    clgd::set_thread_count(threads);
    if (cmd_dist_app->parsed()) return cmd_dist(dist);
    if (cmd_reg_app->parsed()) return cmd_register(reg);
    if (cmd_flow_app->parsed()) return cmd_flow(flow);
    if (cmd_synth_app->parsed()) return cmd_synth(synth);
    if (cmd_eval_app->parsed()) return cmd_eval(eval);
    if (cmd_bench_app->parsed()) return cmd_bench(bench);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
