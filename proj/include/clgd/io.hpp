#pragma once

#include <string>

#include "clgd/point_cloud.hpp"

namespace clgd {

enum class CloudFormat {
  kAuto,  // by extension: .ply is PLY, anything else XYZ text
  kXyz,   // one point per line, three reals; blank lines and # comments ok
  kPly,   // ascii PLY, vertex element with x/y/z properties
};

CloudFormat cloud_format_from_name(const std::string& name);

// Throws std::runtime_error naming the file and the 1-based line of the
// first malformed entry; a file with zero points is an error.
PointCloud load_cloud(const std::string& path,
                      CloudFormat format = CloudFormat::kAuto);

// Writes with 17 significant digits, so load(save(c)) reproduces the cloud
// bit for bit. Refuses empty clouds.
void save_cloud(const PointCloud& cloud, const std::string& path,
                CloudFormat format = CloudFormat::kAuto);

}  // namespace clgd
