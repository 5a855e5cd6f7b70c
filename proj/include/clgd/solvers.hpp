#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "clgd/metric.hpp"
#include "clgd/point_cloud.hpp"
#include "clgd/se3.hpp"

namespace clgd {

enum class Metric { kClgd, kChamfer, kEmd };

// Accepts the CLI spellings "clgd", "cd", "emd"; throws std::invalid_argument
// otherwise.
Metric metric_from_name(std::string_view name);
std::string metric_name(Metric metric);

struct OptimizerConfig {
  int iterations = 1000;
  double learning_rate = 0.02;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int log_every = 0;  // 0 = silent; otherwise progress lines to stderr

  void check() const;
};

struct SolveTrace {
  std::vector<double> objective;  // value at each iterate, before its update
  int best_iteration = 0;
  double best_objective = 0.0;
  double wall_seconds = 0.0;
};

struct RegistrationResult {
  RigidTransform transform;
  SolveTrace trace;
};

struct FlowResult {
  std::vector<Vec3> flow;  // one offset per source point
  SolveTrace trace;
};

// Minimizes D(T(src), tgt) over rigid motions T, starting from the identity,
// with Adam on the left-perturbation gradient: a step delta updates the pose
// as T <- se3_exp(delta) o T. For CLGD the references are seeded from tgt
// (generated once up front by default) and `seed` overrides the reference
// seed in `params`. Returns the best-objective iterate.
RegistrationResult register_rigid(const PointCloud& src, const PointCloud& tgt,
                                  Metric metric, const ClgdParams& params,
                                  const OptimizerConfig& opt, uint64_t seed);

// The spatial smoothness term and its gradient over a fixed source-cloud
// neighbor graph: (1/(3 N Ks)) sum_i sum_{j in KNN_i} ||F_i - F_j||^2, self
// excluded from each neighborhood.
class SmoothnessTerm {
 public:
  SmoothnessTerm(const PointCloud& src, int ks);

  double value(const std::vector<Vec3>& flow) const;
  MetricGradient value_and_gradient(const std::vector<Vec3>& flow) const;

  int ks() const { return ks_; }

 private:
  int ks_ = 0;
  std::size_t size_ = 0;
  std::size_t neighbors_per_point_ = 0;  // min(ks, N-1)
  std::vector<uint32_t> neighbors_;      // size_ * neighbors_per_point_
};

double smoothness(const std::vector<Vec3>& flow, const PointCloud& src,
                  int ks);

// Minimizes D(src + F, tgt) + alpha * smoothness(F) over per-point offsets F,
// starting from zero flow. Returns the best-objective iterate.
FlowResult estimate_flow(const PointCloud& src, const PointCloud& tgt,
                         Metric metric, const ClgdParams& params, double alpha,
                         int ks, const OptimizerConfig& opt, uint64_t seed);

}  // namespace clgd
