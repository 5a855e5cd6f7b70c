#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "clgd/point_cloud.hpp"

namespace clgd {

// One KNN answer: point indices with their Euclidean distances, sorted
// ascending. Exact distance ties are broken by the smaller point index, so
// answers are fully deterministic.
struct Neighborhood {
  std::vector<std::uint32_t> indices;
  std::vector<double> distances;

  std::size_t size() const { return indices.size(); }
};

// Exact k-nearest-neighbor index over a PointCloud (median-split kd-tree).
// Immutable after construction; concurrent read-only queries are safe. Query
// answers are identical to a brute-force scan ordered by (distance, index).
//
// The index keeps a pointer to the cloud it was built from; the cloud must
// outlive the index.
class SpatialIndex {
 public:
  // Throws std::invalid_argument if the cloud is empty or non-finite.
  explicit SpatialIndex(const PointCloud& cloud);

  const PointCloud& cloud() const { return *cloud_; }
  std::size_t size() const { return cloud_->size(); }

  // The k exactly-nearest points to `query`. Throws std::invalid_argument
  // when k == 0 or k > size().
  Neighborhood knn(const Vec3& query, std::size_t k) const;

  // Same as knn but reuses the output buffers; the hot path for callers that
  // issue many queries.
  void knn_into(const Vec3& query, std::size_t k, Neighborhood& out) const;

  // Distance to the nearest point (knn with k = 1).
  double nearest_distance(const Vec3& query) const;

  // Distance from point `self` to its nearest *other* point. Requires
  // size() >= 2.
  double nearest_distance_excluding(std::size_t self) const;

 private:
  struct Node {
    // axis >= 0: interior node splitting on `axis` at coordinate `split`,
    // children at left/right. axis == -1: leaf covering order_[begin, end).
    double split = 0.0;
    std::int32_t axis = -1;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
  };

  std::uint32_t build(std::uint32_t begin, std::uint32_t end);

  const PointCloud* cloud_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> order_;
  std::uint32_t root_ = 0;
};

// Batch nearest distances; an empty query batch yields an empty result.
std::vector<double> nearest_distances(const SpatialIndex& index,
                                      std::span<const Vec3> queries);

}  // namespace clgd
