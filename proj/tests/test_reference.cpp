#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "clgd/reference.hpp"
#include "clgd/spatial_index.hpp"
#include "oracles.hpp"

using clgd::PointCloud;
using clgd::ReferenceParams;
using clgd::ReferenceSet;
using clgd::Vec3;

TEST_CASE("reference counts follow R * N plus the appended cloud") {
  clgd::SplitMix64 rng(1);
  const PointCloud sel = clgd::testing::random_cloud(rng, 37);
  const PointCloud oth = clgd::testing::random_cloud(rng, 21);

  ReferenceParams p;
  p.repetitions = 4;
  p.noise_scale = 0.5;
  p.include_other = true;
  const ReferenceSet with = clgd::generate_references(sel, &oth, p);
  CHECK(with.size() == 37 * 4 + 21);

  p.include_other = false;
  const ReferenceSet without = clgd::generate_references(sel, &oth, p);
  CHECK(without.size() == 37 * 4);

  p.include_other = true;  // requested but no other cloud supplied
  const ReferenceSet no_other = clgd::generate_references(sel, nullptr, p);
  CHECK(no_other.size() == 37 * 4);

  // The appended tail is the other cloud verbatim, in order.
  for (std::size_t i = 0; i < oth.size(); ++i) {
    CHECK(with.points[37 * 4 + i] == oth[i]);
  }
}

TEST_CASE("zero noise scale duplicates the selected points exactly") {
  clgd::SplitMix64 rng(2);
  const PointCloud sel = clgd::testing::random_cloud(rng, 10);
  ReferenceParams p;
  p.repetitions = 3;
  p.noise_scale = 0.0;
  p.include_other = false;
  const ReferenceSet refs = clgd::generate_references(sel, nullptr, p);
  REQUIRE(refs.size() == 30);
  for (std::size_t i = 0; i < 10; ++i) {
    for (std::size_t r = 0; r < 3; ++r) {
      CHECK(refs.points[i * 3 + r] == sel[i]);
    }
  }
}

TEST_CASE("same seed reproduces bitwise; different seed differs") {
  clgd::SplitMix64 rng(3);
  const PointCloud sel = clgd::testing::random_cloud(rng, 25);
  ReferenceParams p;
  p.repetitions = 5;
  p.noise_scale = 1.0;
  p.include_other = false;
  p.seed = 123;
  const ReferenceSet a = clgd::generate_references(sel, nullptr, p);
  const ReferenceSet b = clgd::generate_references(sel, nullptr, p);
  REQUIRE(a.size() == b.size());
  bool identical = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    identical = identical && a.points[i] == b.points[i];
  }
  CHECK(identical);

  p.seed = 124;
  const ReferenceSet c = clgd::generate_references(sel, nullptr, p);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    any_diff = any_diff || a.points[i] != c.points[i];
  }
  CHECK(any_diff);
}

TEST_CASE("noise spread tracks T times the nearest-neighbor distance") {
  // A few well-separated points with known nearest-neighbor distances; with
  // R = 10^4 draws the per-axis sample sigma should land within ~5%.
  PointCloud sel;
  sel.points = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 10, 0), Vec3(0, 10, 2)};
  const clgd::SpatialIndex index(sel);

  ReferenceParams p;
  p.repetitions = 10000;
  p.noise_scale = 3.0;
  p.include_other = false;
  p.seed = 9;
  const ReferenceSet refs = clgd::generate_references(sel, nullptr, p);
  REQUIRE(refs.size() == 4 * 10000);

  for (std::size_t i = 0; i < sel.size(); ++i) {
    const double sigma_want = 3.0 * index.nearest_distance_excluding(i);
    double sum2 = 0.0;
    for (std::size_t r = 0; r < 10000; ++r) {
      const Vec3 dev = refs.points[i * 10000 + r] - sel[i];
      sum2 += dev.squaredNorm();
    }
    const double sigma_got = std::sqrt(sum2 / (3.0 * 10000.0));
    CHECK(std::abs(sigma_got - sigma_want) / sigma_want < 0.05);
  }
}

TEST_CASE("seeded_by matches the seeding cloud only") {
  clgd::SplitMix64 rng(4);
  const PointCloud sel = clgd::testing::random_cloud(rng, 12);
  const PointCloud oth = clgd::testing::random_cloud(rng, 12);
  ReferenceParams p;
  p.repetitions = 2;
  p.noise_scale = 0.1;
  const ReferenceSet refs = clgd::generate_references(sel, &oth, p);
  CHECK(refs.seeded_by(sel));
  CHECK_FALSE(refs.seeded_by(oth));
}

TEST_CASE("invalid reference parameters throw") {
  PointCloud one;
  one.points = {Vec3(0, 0, 0)};
  ReferenceParams p;
  p.noise_scale = 1.0;
  CHECK_THROWS_AS(clgd::generate_references(one, nullptr, p),
                  std::invalid_argument);

  p.noise_scale = 0.0;  // fine with a single point when no noise is drawn
  CHECK_NOTHROW(clgd::generate_references(one, nullptr, p));

  clgd::SplitMix64 rng(5);
  const PointCloud sel = clgd::testing::random_cloud(rng, 8);
  ReferenceParams bad_reps;
  bad_reps.repetitions = 0;
  CHECK_THROWS_AS(clgd::generate_references(sel, nullptr, bad_reps),
                  std::invalid_argument);
  ReferenceParams bad_scale;
  bad_scale.noise_scale = -0.5;
  CHECK_THROWS_AS(clgd::generate_references(sel, nullptr, bad_scale),
                  std::invalid_argument);

  PointCloud empty;
  CHECK_THROWS_AS(clgd::generate_references(empty, nullptr, ReferenceParams{}),
                  std::invalid_argument);
}
