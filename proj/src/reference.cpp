#include "clgd/reference.hpp"

#include <stdexcept>

#include "clgd/rng.hpp"
#include "clgd/spatial_index.hpp"

namespace clgd {

ReferenceSet generate_references(const PointCloud& selected,
                                 const PointCloud* other,
                                 const ReferenceParams& params) {
  selected.validate();
  if (params.repetitions < 1) {
    throw std::invalid_argument("reference repetitions must be >= 1");
  }
  if (params.noise_scale < 0.0) {
    throw std::invalid_argument("reference noise scale must be >= 0");
  }
  if (params.noise_scale > 0.0 && selected.size() < 2) {
    throw std::invalid_argument(
        "noise generation needs >= 2 selected points (nearest-neighbor "
        "distance undefined for a single point)");
  }

  const std::size_t n = selected.size();
  const std::size_t reps = static_cast<std::size_t>(params.repetitions);

  ReferenceSet refs;
  refs.params = params;
  refs.selected_fingerprint = selected.fingerprint();
  refs.points.reserve(n * reps +
                      (params.include_other && other ? other->size() : 0));

  if (params.noise_scale == 0.0) {
    // Zero noise: every sample coincides with its seed point exactly.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t r = 0; r < reps; ++r) {
        refs.points.push_back(selected[i]);
      }
    }
  } else {
    const SpatialIndex index(selected);
    for (std::size_t i = 0; i < n; ++i) {
      const double sigma =
          params.noise_scale * index.nearest_distance_excluding(i);
      for (std::size_t r = 0; r < reps; ++r) {
        SplitMix64 stream(mix_stream(params.seed, i, r));
        const Vec3 noise(sigma * stream.next_normal(),
                         sigma * stream.next_normal(),
                         sigma * stream.next_normal());
        refs.points.push_back(selected[i] + noise);
      }
    }
  }

  if (params.include_other && other != nullptr) {
    other->validate();
    refs.points.insert(refs.points.end(), other->points.begin(),
                       other->points.end());
  }
  return refs;
}

}  // namespace clgd
