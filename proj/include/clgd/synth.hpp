#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "clgd/point_cloud.hpp"
#include "clgd/se3.hpp"

namespace clgd {

enum class SceneKind { kSphere, kPlane, kTorus, kTwoObjects };

SceneKind scene_kind_from_name(std::string_view name);
std::string scene_kind_name(SceneKind kind);

// Recipe for a deterministic synthetic src/tgt pair with ground truth.
// tgt is built from surface samples (the src samples, or fresh ones when
// resample_target is set), moved by the rigid motion or per-object flows,
// then cropped and perturbed by noise.
struct SceneSpec {
  SceneKind kind = SceneKind::kSphere;
  int n = 1024;       // source point count, >= 8
  uint64_t seed = 0;
  Vec6 xi = Vec6::Zero();          // ground-truth rigid motion (src -> tgt)
  double crop_fraction = 0.0;      // fraction of tgt dropped along a random
                                   // direction; keeps ceil((1-c)*n) points
  double noise_sigma = 0.0;        // additive per-axis Gaussian noise on tgt
  std::vector<Vec3> object_flows;  // two-objects only: one offset per object
  bool resample_target = false;    // independent target surface sampling
};

struct Scene {
  PointCloud src;
  PointCloud tgt;
  Mat3 rotation_gt = Mat3::Identity();
  Vec3 translation_gt = Vec3::Zero();
  std::vector<Vec3> flow_gt;    // per src point
  std::vector<int> object_of;   // per src point; all 0 except two-objects
};

Scene synth_scene(const SceneSpec& spec);

// Rotation by `angle_deg` about a seeded random axis plus a translation of
// norm `translation_norm` in a seeded random direction.
Vec6 random_rigid_motion(uint64_t seed, double angle_deg,
                         double translation_norm);

}  // namespace clgd
