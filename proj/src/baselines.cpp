#include "clgd/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "clgd/parallel.hpp"
#include "clgd/spatial_index.hpp"

namespace clgd {
namespace {

constexpr std::size_t kPointBlock = 1024;

// Nearest neighbor of every query point: distance and index, written to
// disjoint slots so the fill can run in parallel.
void nearest_all(const SpatialIndex& index, const PointCloud& queries,
                 std::vector<double>& distances,
                 std::vector<uint32_t>& indices) {
  const std::size_t n = queries.size();
  distances.resize(n);
  indices.resize(n);
  parallel_blocks(n, kPointBlock,
                  [&](std::size_t begin, std::size_t end, std::size_t) {
    thread_local Neighborhood nb;
    for (std::size_t i = begin; i < end; ++i) {
      index.knn_into(queries[i], 1, nb);
      distances[i] = nb.distances[0];
      indices[i] = nb.indices[0];
    }
  });
}

double sequential_mean(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

void check_emd_sizes(const PointCloud& p1, const PointCloud& p2,
                     std::size_t max_points) {
  if (p1.size() != p2.size()) {
    throw std::invalid_argument(
        "emd requires equal cloud sizes: " + std::to_string(p1.size()) +
        " vs " + std::to_string(p2.size()));
  }
  if (p1.size() > max_points) {
    throw std::invalid_argument(
        "cloud size " + std::to_string(p1.size()) +
        " exceeds the exact assignment cap " + std::to_string(max_points) +
        "; subsample the clouds or raise the cap");
  }
}

// Exact square assignment: shortest augmenting path with potentials,
// O(n^3). Returns, for each column j, the assigned row.
std::vector<int> solve_assignment(const std::vector<double>& cost,
                                  std::size_t n) {
  const double kInf = std::numeric_limits<double>::max() / 4;
  const std::size_t m = n + 1;
  std::vector<double> u(m, 0.0), v(m, 0.0), minv(m);
  std::vector<int> p(m, 0), way(m, 0);
  std::vector<char> used(m);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = static_cast<int>(i);
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = static_cast<std::size_t>(p[j0]);
      const double* row = cost.data() + (i0 - 1) * n;
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = row[j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = static_cast<int>(j0);
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[static_cast<std::size_t>(p[j])] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    while (j0 != 0) {
      const std::size_t j1 = static_cast<std::size_t>(way[j0]);
      p[j0] = p[j1];
      j0 = j1;
    }
  }
  return p;
}

}  // namespace

ChamferReport chamfer(const PointCloud& p1, const PointCloud& p2) {
  p1.validate();
  p2.validate();
  SpatialIndex index1(p1);
  SpatialIndex index2(p2);
  std::vector<double> dist;
  std::vector<uint32_t> idx;
  ChamferReport report;
  nearest_all(index2, p1, dist, idx);
  report.forward_mean = sequential_mean(dist);
  nearest_all(index1, p2, dist, idx);
  report.backward_mean = sequential_mean(dist);
  report.value = report.forward_mean + report.backward_mean;
  return report;
}

MetricGradient chamfer_gradient(const PointCloud& p1_static,
                                const PointCloud& p2_moving) {
  p1_static.validate();
  p2_moving.validate();
  SpatialIndex index1(p1_static);
  SpatialIndex index2(p2_moving);
  const std::size_t n1 = p1_static.size();
  const std::size_t n2 = p2_moving.size();

  std::vector<double> fwd_dist, bwd_dist;
  std::vector<uint32_t> fwd_idx, bwd_idx;
  nearest_all(index2, p1_static, fwd_dist, fwd_idx);
  nearest_all(index1, p2_moving, bwd_dist, bwd_idx);

  MetricGradient result;
  result.value = sequential_mean(fwd_dist) + sequential_mean(bwd_dist);
  result.gradient.assign(n2, Vec3::Zero());

  // Forward term: each static point pulls on its nearest moving point.
  const double inv_n1 = 1.0 / static_cast<double>(n1);
  for (std::size_t i = 0; i < n1; ++i) {
    if (fwd_dist[i] > 0.0) {
      const Vec3 diff = p2_moving[fwd_idx[i]] - p1_static[i];
      result.gradient[fwd_idx[i]] += inv_n1 * diff / fwd_dist[i];
    }
  }
  // Backward term: each moving point is pulled toward its nearest static
  // point; writes are disjoint per moving point.
  const double inv_n2 = 1.0 / static_cast<double>(n2);
  for (std::size_t j = 0; j < n2; ++j) {
    if (bwd_dist[j] > 0.0) {
      const Vec3 diff = p2_moving[j] - p1_static[bwd_idx[j]];
      result.gradient[j] += inv_n2 * diff / bwd_dist[j];
    }
  }
  return result;
}

HausdorffReport hausdorff(const PointCloud& p1, const PointCloud& p2) {
  p1.validate();
  p2.validate();
  SpatialIndex index1(p1);
  SpatialIndex index2(p2);
  std::vector<double> dist;
  std::vector<uint32_t> idx;
  HausdorffReport report;
  nearest_all(index2, p1, dist, idx);
  report.forward = *std::max_element(dist.begin(), dist.end());
  nearest_all(index1, p2, dist, idx);
  report.backward = *std::max_element(dist.begin(), dist.end());
  report.value = std::max(report.forward, report.backward);
  return report;
}

EmdReport emd_exact(const PointCloud& p1, const PointCloud& p2,
                    std::size_t max_points) {
  p1.validate();
  p2.validate();
  check_emd_sizes(p1, p2, max_points);
  const std::size_t n = p1.size();

  std::vector<double> cost(n * n);
  parallel_blocks(n, kPointBlock,
                  [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t i = begin; i < end; ++i) {
      double* row = cost.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) {
        row[j] = (p1[i] - p2[j]).norm();
      }
    }
  });

  const std::vector<int> by_column = solve_assignment(cost, n);
  EmdReport report;
  report.assignment.resize(n);
  for (std::size_t j = 1; j <= n; ++j) {
    report.assignment[static_cast<std::size_t>(by_column[j]) - 1] =
        static_cast<uint32_t>(j - 1);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += cost[i * n + report.assignment[i]];
  }
  report.value = sum / static_cast<double>(n);
  return report;
}

MetricGradient emd_gradient(const PointCloud& p1_static,
                            const PointCloud& p2_moving,
                            std::size_t max_points) {
  const EmdReport report = emd_exact(p1_static, p2_moving, max_points);
  const std::size_t n = p1_static.size();
  MetricGradient result;
  result.value = report.value;
  result.gradient.assign(n, Vec3::Zero());
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = report.assignment[i];
    const Vec3 diff = p2_moving[j] - p1_static[i];
    const double dist = diff.norm();
    if (dist > 0.0) {
      result.gradient[j] += inv_n * diff / dist;
    }
  }
  return result;
}

}  // namespace clgd
