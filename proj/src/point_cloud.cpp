#include "clgd/point_cloud.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

namespace clgd {

void PointCloud::validate() const {
  if (points.empty()) {
    throw std::invalid_argument("point cloud is empty");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec3& p = points[i];
    if (!std::isfinite(p.x()) || !std::isfinite(p.y()) ||
        !std::isfinite(p.z())) {
      throw std::invalid_argument("point cloud has non-finite coordinate at index " +
                                  std::to_string(i));
    }
  }
}

std::uint64_t PointCloud::fingerprint() const {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  auto mix = [&hash](const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      hash ^= bytes[i];
      hash *= 0x100000001b3ull;
    }
  };
  const std::uint64_t n = points.size();
  mix(&n, sizeof(n));
  for (const Vec3& p : points) {
    double coords[3] = {p.x(), p.y(), p.z()};
    mix(coords, sizeof(coords));
  }
  return hash;
}

PointCloud transformed(const PointCloud& cloud, const Mat3& rotation,
                       const Vec3& translation) {
  PointCloud out;
  out.points.reserve(cloud.size());
  for (const Vec3& p : cloud.points) {
    out.points.push_back(rotation * p + translation);
  }
  return out;
}

PointCloud translated(const PointCloud& cloud, const Vec3& offset) {
  PointCloud out;
  out.points.reserve(cloud.size());
  for (const Vec3& p : cloud.points) {
    out.points.push_back(p + offset);
  }
  return out;
}

}  // namespace clgd
