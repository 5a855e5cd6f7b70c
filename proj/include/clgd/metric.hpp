#pragma once

#include <span>
#include <vector>

#include "clgd/point_cloud.hpp"
#include "clgd/reference.hpp"
#include "clgd/spatial_index.hpp"

namespace clgd {

struct ClgdParams {
  int k = 5;                  // neighborhood size
  double beta = 0.0;          // confidence sharpness; >0 for partial overlap
  double epsilon = 1e-12;     // guard for the inverse-square weights
  ReferenceParams reference;  // how reference points are generated
  bool symmetrize = false;    // average both directed evaluations (CLI path)
};

// The 4-vector [f | v]: f approximates the unsigned distance from a probe
// point to the cloud's underlying surface, v the offset from the closest
// surface point to the probe.
struct DirectionalDistance {
  double f = 0.0;
  Vec3 v = Vec3::Zero();
};

struct ClgdReport {
  double value = 0.0;
  std::vector<double> per_reference;  // d(q_m, P1, P2), one per reference
  std::vector<double> scores;         // s(q_m) = exp(-beta * d)
};

using ClgdGradient = MetricGradient;

// Weighted K-NN average of distances and offsets. When `weights` is empty the
// cloud's own inverse-square-distance weights w_k = 1 / max(dist_k^2, eps)
// are computed from its sorted K-NN; a supplied span is applied verbatim,
// rank-aligned against the sorted K-NN (the shared-weight calibration).
DirectionalDistance directional_distance(const Vec3& query,
                                         const SpatialIndex& index, int k,
                                         std::span<const double> weights = {},
                                         double epsilon = 1e-12);

// The calibrated local geometry distance between two clouds. `refs` must have
// been generated from one of the two arguments; its weights calibrate both
// evaluations. Identical clouds give exactly zero.
ClgdReport clgd_distance(const PointCloud& p1, const PointCloud& p2,
                         const ReferenceSet& refs, const ClgdParams& params);

ClgdReport clgd_distance(const SpatialIndex& selected_index,
                         const SpatialIndex& other_index,
                         const ReferenceSet& refs, const ClgdParams& params);

// Value and analytic gradient with respect to the moving cloud's points.
// `refs` must be seeded from the static cloud. Freeze conventions: K-NN
// memberships and sort ranks are locally constant, weights belong to the
// static cloud, confidence scores are constant multipliers, and the l1 norm
// takes subgradient 0 at exact zeros.
ClgdGradient clgd_gradient(const PointCloud& static_cloud,
                           const PointCloud& moving_cloud,
                           const ReferenceSet& refs, const ClgdParams& params);

ClgdGradient clgd_gradient(const SpatialIndex& static_index,
                           const SpatialIndex& moving_index,
                           const ReferenceSet& refs, const ClgdParams& params);

// Convenience: generates references internally (seeded from `a`, appending
// `b` when the reference params say so) and evaluates.
ClgdReport clgd_distance_auto(const PointCloud& a, const PointCloud& b,
                              const ClgdParams& params);

// Mean of the two directed evaluations, each seeding references from its own
// side.
double clgd_symmetric(const PointCloud& a, const PointCloud& b,
                      const ClgdParams& params);

}  // namespace clgd
