#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace clgd {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;

// Ordered list of 3D positions. Index i refers to the same point for the
// lifetime of the object; all coordinates are 64-bit reals.
struct PointCloud {
  std::vector<Vec3> points;

  PointCloud() = default;
  explicit PointCloud(std::vector<Vec3> pts) : points(std::move(pts)) {}

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  const Vec3& operator[](std::size_t i) const { return points[i]; }
  Vec3& operator[](std::size_t i) { return points[i]; }

  // Throws std::invalid_argument if the cloud is empty or any coordinate is
  // non-finite.
  void validate() const;

  // FNV-1a over the raw coordinate bytes. Identifies the exact contents, so
  // downstream code can check which cloud a derived structure came from.
  std::uint64_t fingerprint() const;
};

// A metric value together with its gradient with respect to the moving
// cloud's point positions (one 3-vector per point).
struct MetricGradient {
  double value = 0.0;
  std::vector<Vec3> gradient;
};

// R * p + t applied to every point.
PointCloud transformed(const PointCloud& cloud, const Mat3& rotation,
                       const Vec3& translation);

PointCloud translated(const PointCloud& cloud, const Vec3& offset);

}  // namespace clgd
