#include "clgd/solvers.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <optional>
#include <stdexcept>

#include "clgd/adam.hpp"
#include "clgd/baselines.hpp"
#include "clgd/rng.hpp"
#include "clgd/spatial_index.hpp"

namespace clgd {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Data term D(moved, tgt) for one solve. For CLGD the target index and the
// reference set are built once; optional per-iteration resampling derives a
// fresh reference seed from the iteration number.
class DataTerm {
 public:
  DataTerm(const PointCloud& src, const PointCloud& tgt, Metric metric,
           const ClgdParams& params, uint64_t seed)
      : tgt_(tgt), metric_(metric), params_(params), seed_(seed) {
    if (metric_ == Metric::kClgd) {
      params_.reference.seed = seed_;
      static_index_.emplace(tgt_);
      const PointCloud* other = params_.reference.include_other ? &src : nullptr;
      refs_ = generate_references(tgt_, other, params_.reference);
    }
  }

  MetricGradient eval(const PointCloud& moved, int iteration) {
    switch (metric_) {
      case Metric::kClgd: {
        if (params_.reference.resample_each_iteration && iteration > 0) {
          ReferenceParams rp = params_.reference;
          rp.seed = mix_stream(seed_, 0x726573616d706cULL,
                               static_cast<uint64_t>(iteration));
          const PointCloud* other = rp.include_other ? &moved : nullptr;
          refs_ = generate_references(tgt_, other, rp);
        }
        SpatialIndex moving_index(moved);
        return clgd_gradient(*static_index_, moving_index, *refs_, params_);
      }
      case Metric::kChamfer:
        return chamfer_gradient(tgt_, moved);
      case Metric::kEmd:
        return emd_gradient(tgt_, moved);
    }
    throw std::logic_error("unhandled metric");
  }

 private:
  const PointCloud& tgt_;
  Metric metric_;
  ClgdParams params_;
  uint64_t seed_;
  std::optional<SpatialIndex> static_index_;
  std::optional<ReferenceSet> refs_;
};

void log_progress(const OptimizerConfig& opt, int iteration, double value) {
  if (opt.log_every > 0 && iteration % opt.log_every == 0) {
    std::cerr << "iter " << iteration << " objective " << value << "\n";
  }
}

}  // namespace

Metric metric_from_name(std::string_view name) {
  if (name == "clgd") return Metric::kClgd;
  if (name == "cd") return Metric::kChamfer;
  if (name == "emd") return Metric::kEmd;
  throw std::invalid_argument("unknown metric: " + std::string(name) +
                              " (expected clgd, cd, or emd)");
}

std::string metric_name(Metric metric) {
  switch (metric) {
    case Metric::kClgd: return "clgd";
    case Metric::kChamfer: return "cd";
    case Metric::kEmd: return "emd";
  }
  throw std::logic_error("unhandled metric");
}

void OptimizerConfig::check() const {
  if (iterations < 1) {
    throw std::invalid_argument("iterations must be positive");
  }
  AdamConfig adam{learning_rate, beta1, beta2, epsilon};
  adam.check();
}

RegistrationResult register_rigid(const PointCloud& src, const PointCloud& tgt,
                                  Metric metric, const ClgdParams& params,
                                  const OptimizerConfig& opt, uint64_t seed) {
  src.validate();
  tgt.validate();
  opt.check();
  const auto start = Clock::now();

  DataTerm term(src, tgt, metric, params, seed);
  const AdamConfig adam{opt.learning_rate, opt.beta1, opt.beta2, opt.epsilon};
  AdamState state(6);
  RigidTransform pose;

  RegistrationResult result;
  result.trace.objective.reserve(static_cast<std::size_t>(opt.iterations));
  double best = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < opt.iterations; ++iter) {
    const PointCloud moved = transformed(src, pose);
    const MetricGradient mg = term.eval(moved, iter);
    result.trace.objective.push_back(mg.value);
    log_progress(opt, iter, mg.value);
    if (mg.value < best) {
      best = mg.value;
      result.transform = pose;
      result.trace.best_iteration = iter;
    }
    // Left-perturbation gradient: moving a pose by exp(delta) moves point y
    // by delta_omega x y + delta_rho.
    Vec6 grad = Vec6::Zero();
    for (std::size_t i = 0; i < moved.size(); ++i) {
      grad.head<3>() += moved[i].cross(mg.gradient[i]);
      grad.tail<3>() += mg.gradient[i];
    }
    const Eigen::VectorXd delta = adam_step(state, grad, adam);
    pose = compose(se3_exp(Vec6(delta)), pose);
  }
  result.trace.best_objective = best;
  result.trace.wall_seconds = seconds_since(start);
  return result;
}

SmoothnessTerm::SmoothnessTerm(const PointCloud& src, int ks)
    : ks_(ks), size_(src.size()) {
  src.validate();
  if (ks < 1) {
    throw std::invalid_argument("Ks must be at least 1");
  }
  if (static_cast<std::size_t>(ks) > size_) {
    throw std::invalid_argument("Ks (" + std::to_string(ks) +
                                ") exceeds the source cloud size (" +
                                std::to_string(size_) + ")");
  }
  neighbors_per_point_ = std::min<std::size_t>(
      static_cast<std::size_t>(ks), size_ - 1);
  neighbors_.resize(size_ * neighbors_per_point_);
  if (neighbors_per_point_ == 0) return;

  const SpatialIndex index(src);
  Neighborhood nb;
  const int query_k = static_cast<int>(neighbors_per_point_) + 1;
  for (std::size_t i = 0; i < size_; ++i) {
    index.knn_into(src[i], query_k, nb);
    std::size_t count = 0;
    for (uint32_t candidate : nb.indices) {
      if (candidate == i) continue;  // self never counts as a neighbor
      neighbors_[i * neighbors_per_point_ + count] = candidate;
      if (++count == neighbors_per_point_) break;
    }
  }
}

double SmoothnessTerm::value(const std::vector<Vec3>& flow) const {
  if (flow.size() != size_) {
    throw std::invalid_argument("flow row count does not match source cloud");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < size_; ++i) {
    for (std::size_t r = 0; r < neighbors_per_point_; ++r) {
      const uint32_t j = neighbors_[i * neighbors_per_point_ + r];
      sum += (flow[i] - flow[j]).squaredNorm();
    }
  }
  return sum / (3.0 * static_cast<double>(size_) * static_cast<double>(ks_));
}

MetricGradient SmoothnessTerm::value_and_gradient(
    const std::vector<Vec3>& flow) const {
  if (flow.size() != size_) {
    throw std::invalid_argument("flow row count does not match source cloud");
  }
  const double scale =
      1.0 / (3.0 * static_cast<double>(size_) * static_cast<double>(ks_));
  MetricGradient out;
  out.gradient.assign(size_, Vec3::Zero());
  double sum = 0.0;
  for (std::size_t i = 0; i < size_; ++i) {
    for (std::size_t r = 0; r < neighbors_per_point_; ++r) {
      const uint32_t j = neighbors_[i * neighbors_per_point_ + r];
      const Vec3 diff = flow[i] - flow[j];
      sum += diff.squaredNorm();
      out.gradient[i] += (2.0 * scale) * diff;
      out.gradient[j] -= (2.0 * scale) * diff;
    }
  }
  out.value = sum * scale;
  return out;
}

double smoothness(const std::vector<Vec3>& flow, const PointCloud& src,
                  int ks) {
  return SmoothnessTerm(src, ks).value(flow);
}

FlowResult estimate_flow(const PointCloud& src, const PointCloud& tgt,
                         Metric metric, const ClgdParams& params, double alpha,
                         int ks, const OptimizerConfig& opt, uint64_t seed) {
  src.validate();
  tgt.validate();
  opt.check();
  if (alpha < 0.0) {
    throw std::invalid_argument("alpha must be non-negative");
  }
  const auto start = Clock::now();

  const std::size_t n = src.size();
  const SmoothnessTerm smooth(src, ks);
  DataTerm term(src, tgt, metric, params, seed);
  const AdamConfig adam{opt.learning_rate, opt.beta1, opt.beta2, opt.epsilon};
  AdamState state(static_cast<Eigen::Index>(3 * n));

  FlowResult result;
  std::vector<Vec3> flow(n, Vec3::Zero());
  result.flow = flow;
  result.trace.objective.reserve(static_cast<std::size_t>(opt.iterations));
  double best = std::numeric_limits<double>::infinity();
  PointCloud moved = src;
  Eigen::VectorXd grad(static_cast<Eigen::Index>(3 * n));
  for (int iter = 0; iter < opt.iterations; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      moved[i] = src[i] + flow[i];
    }
    const MetricGradient mg = term.eval(moved, iter);
    const MetricGradient sg = smooth.value_and_gradient(flow);
    const double objective = mg.value + alpha * sg.value;
    result.trace.objective.push_back(objective);
    log_progress(opt, iter, objective);
    if (objective < best) {
      best = objective;
      result.flow = flow;
      result.trace.best_iteration = iter;
    }
    for (std::size_t i = 0; i < n; ++i) {
      grad.segment<3>(static_cast<Eigen::Index>(3 * i)) =
          mg.gradient[i] + alpha * sg.gradient[i];
    }
    const Eigen::VectorXd delta = adam_step(state, grad, adam);
    for (std::size_t i = 0; i < n; ++i) {
      flow[i] += delta.segment<3>(static_cast<Eigen::Index>(3 * i));
    }
  }
  result.trace.best_objective = best;
  result.trace.wall_seconds = seconds_since(start);
  return result;
}

}  // namespace clgd
