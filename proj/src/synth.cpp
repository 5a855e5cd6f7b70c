#include "clgd/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "clgd/rng.hpp"

namespace clgd {
namespace {

// Sub-stream tags: one RNG stream per (purpose, point index) so the sampled
// scene does not depend on evaluation order.
constexpr uint64_t kSrcStream = 1;
constexpr uint64_t kTgtStream = 2;
constexpr uint64_t kCropStream = 3;
constexpr uint64_t kNoiseStream = 4;
constexpr uint64_t kMotionStream = 5;

Vec3 random_unit(SplitMix64& rng) {
  for (;;) {
    const Vec3 v(rng.next_normal(), rng.next_normal(), rng.next_normal());
    const double norm = v.norm();
    if (norm > 1e-12) return v / norm;
  }
}

Vec3 sample_sphere(SplitMix64& rng, double radius, const Vec3& center) {
  return center + radius * random_unit(rng);
}

Vec3 sample_plane(SplitMix64& rng) {
  return Vec3(2.0 * rng.next_double() - 1.0, 2.0 * rng.next_double() - 1.0,
              0.0);
}

Vec3 sample_torus(SplitMix64& rng) {
  constexpr double kMajor = 1.0;
  constexpr double kMinor = 0.3;
  for (;;) {
    const double phi = 2.0 * M_PI * rng.next_double();
    const double psi = 2.0 * M_PI * rng.next_double();
    // Rejection keeps the sampling uniform in surface area.
    const double accept =
        (1.0 + (kMinor / kMajor) * std::cos(psi)) / (1.0 + kMinor / kMajor);
    if (rng.next_double() > accept) continue;
    const double ring = kMajor + kMinor * std::cos(psi);
    return Vec3(ring * std::cos(phi), ring * std::sin(phi),
                kMinor * std::sin(psi));
  }
}

// Two well-separated spheres of different sizes; the first ceil(n/2) points
// belong to object 0.
Vec3 sample_two_objects(SplitMix64& rng, std::size_t index, std::size_t n) {
  const std::size_t n0 = (n + 1) / 2;
  if (index < n0) {
    return sample_sphere(rng, 0.5, Vec3(-1.0, 0.0, 0.0));
  }
  return sample_sphere(rng, 0.3, Vec3(1.0, 0.0, 0.0));
}

std::size_t object_of_index(SceneKind kind, std::size_t index, std::size_t n) {
  if (kind != SceneKind::kTwoObjects) return 0;
  return index < (n + 1) / 2 ? 0 : 1;
}

PointCloud sample_cloud(SceneKind kind, std::size_t n, uint64_t seed,
                        uint64_t stream) {
  PointCloud cloud;
  cloud.points.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    SplitMix64 rng(mix_stream(seed, stream, i));
    switch (kind) {
      case SceneKind::kSphere:
        cloud.points[i] = sample_sphere(rng, 1.0, Vec3::Zero());
        break;
      case SceneKind::kPlane:
        cloud.points[i] = sample_plane(rng);
        break;
      case SceneKind::kTorus:
        cloud.points[i] = sample_torus(rng);
        break;
      case SceneKind::kTwoObjects:
        cloud.points[i] = sample_two_objects(rng, i, n);
        break;
    }
  }
  return cloud;
}

void check_spec(const SceneSpec& spec) {
  if (spec.n < 8) {
    throw std::invalid_argument("n must be at least 8");
  }
  if (spec.crop_fraction < 0.0 || spec.crop_fraction >= 1.0) {
    throw std::invalid_argument("crop fraction must be in [0, 1)");
  }
  if (spec.noise_sigma < 0.0) {
    throw std::invalid_argument("noise sigma must be non-negative");
  }
  if (spec.kind == SceneKind::kTwoObjects) {
    if (spec.xi.squaredNorm() != 0.0) {
      throw std::invalid_argument(
          "two-objects scenes move by per-object flows, not a rigid motion");
    }
    if (!spec.object_flows.empty() && spec.object_flows.size() != 2) {
      throw std::invalid_argument(
          "two-objects scenes need exactly 2 object flows");
    }
  } else if (!spec.object_flows.empty()) {
    throw std::invalid_argument("object flows require the two-objects kind");
  }
}

// Keeps the ceil((1-c)*n) points with the largest projection onto a seeded
// random direction, preserving the original point order.
void crop_cloud(PointCloud& cloud, double fraction, uint64_t seed) {
  if (fraction <= 0.0) return;
  const std::size_t n = cloud.size();
  const std::size_t keep = static_cast<std::size_t>(
      std::ceil((1.0 - fraction) * static_cast<double>(n)));
  if (keep < 1) {
    throw std::invalid_argument("crop fraction leaves no points");
  }
  SplitMix64 rng(mix_stream(seed, kCropStream, 0));
  const Vec3 direction = random_unit(rng);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double pa = direction.dot(cloud[a]);
    const double pb = direction.dot(cloud[b]);
    if (pa != pb) return pa > pb;
    return a < b;
  });
  std::vector<char> kept(n, 0);
  for (std::size_t i = 0; i < keep; ++i) kept[order[i]] = 1;

  PointCloud cropped;
  cropped.points.reserve(keep);
  for (std::size_t i = 0; i < n; ++i) {
    if (kept[i]) cropped.points.push_back(cloud[i]);
  }
  cloud = std::move(cropped);
}

void add_noise(PointCloud& cloud, double sigma, uint64_t seed) {
  if (sigma <= 0.0) return;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    SplitMix64 rng(mix_stream(seed, kNoiseStream, i));
    cloud[i] += sigma * Vec3(rng.next_normal(), rng.next_normal(),
                             rng.next_normal());
  }
}

}  // namespace

SceneKind scene_kind_from_name(std::string_view name) {
  if (name == "sphere") return SceneKind::kSphere;
  if (name == "plane") return SceneKind::kPlane;
  if (name == "torus") return SceneKind::kTorus;
  if (name == "two-objects") return SceneKind::kTwoObjects;
  throw std::invalid_argument(
      "unknown scene kind: " + std::string(name) +
      " (expected sphere, plane, torus, or two-objects)");
}

std::string scene_kind_name(SceneKind kind) {
  switch (kind) {
    case SceneKind::kSphere: return "sphere";
    case SceneKind::kPlane: return "plane";
    case SceneKind::kTorus: return "torus";
    case SceneKind::kTwoObjects: return "two-objects";
  }
  throw std::logic_error("unhandled scene kind");
}

Scene synth_scene(const SceneSpec& spec) {
  check_spec(spec);
  const std::size_t n = static_cast<std::size_t>(spec.n);

  Scene scene;
  scene.src = sample_cloud(spec.kind, n, spec.seed, kSrcStream);
  scene.object_of.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    scene.object_of[i] =
        static_cast<int>(object_of_index(spec.kind, i, n));
  }

  std::vector<Vec3> flows = spec.object_flows;
  if (spec.kind == SceneKind::kTwoObjects && flows.empty()) {
    flows.assign(2, Vec3::Zero());
  }

  const RigidTransform motion = se3_exp(spec.xi);
  scene.rotation_gt = motion.rotation;
  scene.translation_gt = motion.translation;
  scene.flow_gt.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (spec.kind == SceneKind::kTwoObjects) {
      scene.flow_gt[i] = flows[static_cast<std::size_t>(scene.object_of[i])];
    } else {
      scene.flow_gt[i] = apply(motion, scene.src[i]) - scene.src[i];
    }
  }

  PointCloud samples = spec.resample_target
                           ? sample_cloud(spec.kind, n, spec.seed, kTgtStream)
                           : scene.src;
  scene.tgt.points.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (spec.kind == SceneKind::kTwoObjects) {
      scene.tgt[i] =
          samples[i] + flows[object_of_index(spec.kind, i, n)];
    } else {
      scene.tgt[i] = apply(motion, samples[i]);
    }
  }
  crop_cloud(scene.tgt, spec.crop_fraction, spec.seed);
  add_noise(scene.tgt, spec.noise_sigma, spec.seed);
  return scene;
}

Vec6 random_rigid_motion(uint64_t seed, double angle_deg,
                         double translation_norm) {
  SplitMix64 axis_rng(mix_stream(seed, kMotionStream, 0));
  SplitMix64 dir_rng(mix_stream(seed, kMotionStream, 1));
  const Vec3 axis = random_unit(axis_rng);
  const Vec3 direction = random_unit(dir_rng);

  Vec6 rotation_only = Vec6::Zero();
  rotation_only.head<3>() = axis * (angle_deg * M_PI / 180.0);
  RigidTransform t = se3_exp(rotation_only);
  t.translation = translation_norm * direction;
  return se3_log(t);
}

}  // namespace clgd
