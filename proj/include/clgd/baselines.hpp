#pragma once

#include <cstdint>
#include <vector>

#include "clgd/point_cloud.hpp"

namespace clgd {

// Sum of the two directional means of unsquared nearest-neighbor distances.
// value = forward_mean + backward_mean keeps the metric in length units,
// comparable with CLGD and Hausdorff.
struct ChamferReport {
  double value = 0.0;
  double forward_mean = 0.0;   // mean over P1 of the distance to P2
  double backward_mean = 0.0;  // mean over P2 of the distance to P1
};

struct HausdorffReport {
  double value = 0.0;  // max of the two directed maxima
  double forward = 0.0;
  double backward = 0.0;
};

// Optimal one-to-one matching; value = mean of the matched unsquared
// Euclidean distances.
struct EmdReport {
  double value = 0.0;
  std::vector<uint32_t> assignment;  // p1[i] is matched with p2[assignment[i]]
};

ChamferReport chamfer(const PointCloud& p1, const PointCloud& p2);

// Chamfer value and analytic gradient with respect to the moving cloud, with
// nearest-neighbor assignments frozen. Zero-length matches contribute a zero
// (sub)gradient.
MetricGradient chamfer_gradient(const PointCloud& p1_static,
                                const PointCloud& p2_moving);

HausdorffReport hausdorff(const PointCloud& p1, const PointCloud& p2);

inline constexpr std::size_t kEmdDefaultCap = 1024;

// Exact assignment via the O(n^3) shortest-augmenting-path algorithm.
// Requires equal sizes and at most `max_points` points per cloud.
EmdReport emd_exact(const PointCloud& p1, const PointCloud& p2,
                    std::size_t max_points = kEmdDefaultCap);

// EMD value and gradient with respect to the moving cloud, assignment frozen.
MetricGradient emd_gradient(const PointCloud& p1_static,
                            const PointCloud& p2_moving,
                            std::size_t max_points = kEmdDefaultCap);

}  // namespace clgd
