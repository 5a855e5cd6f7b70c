#pragma once

#include <cstdint>
#include <vector>

#include "clgd/point_cloud.hpp"

namespace clgd {

// Controls how the reference-point set is produced: each point of the
// selected cloud is jittered `repetitions` times with isotropic Gaussian
// noise whose per-axis standard deviation is `noise_scale` times that
// point's distance to its nearest other point.
struct ReferenceParams {
  int repetitions = 10;        // R
  double noise_scale = 3.0;    // T
  bool include_other = true;   // append the non-selected cloud verbatim
  std::uint64_t seed = 0;
  // Solvers only: draw a fresh set every iteration instead of once per solve.
  bool resample_each_iteration = false;
};

// Reference points plus provenance. `selected_fingerprint` records which
// cloud seeded the noise so consumers can verify they are pairing the set
// with the clouds it was built from.
struct ReferenceSet {
  std::vector<Vec3> points;
  std::uint64_t selected_fingerprint = 0;
  ReferenceParams params;

  std::size_t size() const { return points.size(); }
  bool seeded_by(const PointCloud& cloud) const {
    return cloud.fingerprint() == selected_fingerprint;
  }
};

// Generates R * |selected| jittered points (plus `other` appended verbatim
// when requested). Deterministic in (inputs, seed); per-point streams are
// derived from (seed, point index, repetition index).
//
// Throws std::invalid_argument when `selected` violates its invariants, when
// parameters are out of range, or when noise_scale > 0 and `selected` has a
// single point (the nearest-other-point distance does not exist).
ReferenceSet generate_references(const PointCloud& selected,
                                 const PointCloud* other,
                                 const ReferenceParams& params);

}  // namespace clgd
