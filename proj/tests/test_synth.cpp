#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "clgd/eval.hpp"
#include "clgd/se3.hpp"
#include "clgd/synth.hpp"

using clgd::Scene;
using clgd::SceneKind;
using clgd::SceneSpec;
using clgd::Vec3;
using clgd::Vec6;

TEST_CASE("scene kind names round trip") {
  for (SceneKind kind : {SceneKind::kSphere, SceneKind::kPlane,
                         SceneKind::kTorus, SceneKind::kTwoObjects}) {
    CHECK(clgd::scene_kind_from_name(clgd::scene_kind_name(kind)) == kind);
  }
  CHECK_THROWS_AS(clgd::scene_kind_from_name("cube"), std::invalid_argument);
}

TEST_CASE("identity spec gives tgt equal to src, zero ground truth") {
  SceneSpec spec;
  spec.kind = SceneKind::kTorus;
  spec.n = 64;
  spec.seed = 5;
  const Scene scene = clgd::synth_scene(spec);
  REQUIRE(scene.src.size() == 64);
  REQUIRE(scene.tgt.size() == 64);
  for (std::size_t i = 0; i < 64; ++i) {
    CHECK(scene.src[i] == scene.tgt[i]);
    CHECK(scene.flow_gt[i].norm() == 0.0);
    CHECK(scene.object_of[i] == 0);
  }
  CHECK((scene.rotation_gt - clgd::Mat3::Identity()).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK(scene.translation_gt.norm() == 0.0);
}

TEST_CASE("shapes land on their surfaces") {
  SceneSpec spec;
  spec.n = 200;
  spec.seed = 9;

  spec.kind = SceneKind::kSphere;
  for (const Vec3& p : clgd::synth_scene(spec).src.points) {
    CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }

  spec.kind = SceneKind::kPlane;
  for (const Vec3& p : clgd::synth_scene(spec).src.points) {
    CHECK(p.z() == 0.0);
    CHECK(std::abs(p.x()) <= 1.0);
    CHECK(std::abs(p.y()) <= 1.0);
  }

  spec.kind = SceneKind::kTorus;
  for (const Vec3& p : clgd::synth_scene(spec).src.points) {
    // Implicit torus equation with R0 = 1, r = 0.3.
    const double ring = std::hypot(p.x(), p.y()) - 1.0;
    CHECK(std::hypot(ring, p.z()) == doctest::Approx(0.3).epsilon(1e-9));
  }

  spec.kind = SceneKind::kTwoObjects;
  const Scene two = clgd::synth_scene(spec);
  for (std::size_t i = 0; i < two.src.size(); ++i) {
    if (two.object_of[i] == 0) {
      CHECK((two.src[i] - Vec3(-1, 0, 0)).norm() ==
            doctest::Approx(0.5).epsilon(1e-12));
      CHECK(i < 100);
    } else {
      CHECK((two.src[i] - Vec3(1, 0, 0)).norm() ==
            doctest::Approx(0.3).epsilon(1e-12));
      CHECK(i >= 100);
    }
  }
}

TEST_CASE("rigid motion moves tgt and fills flow ground truth") {
  SceneSpec spec;
  spec.kind = SceneKind::kSphere;
  spec.n = 32;
  spec.seed = 3;
  spec.xi = clgd::random_rigid_motion(17, 25.0, 0.4);
  const Scene scene = clgd::synth_scene(spec);
  const clgd::RigidTransform motion = clgd::se3_exp(spec.xi);
  CHECK((scene.rotation_gt - motion.rotation).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((scene.translation_gt - motion.translation).norm() < 1e-15);
  for (std::size_t i = 0; i < 32; ++i) {
    CHECK((scene.tgt[i] - clgd::apply(motion, scene.src[i])).norm() <
          1e-15);
    CHECK((scene.src[i] + scene.flow_gt[i] - scene.tgt[i]).norm() < 1e-12);
  }
}

TEST_CASE("random_rigid_motion has the requested magnitudes") {
  for (uint64_t seed : {0ull, 1ull, 99ull}) {
    const Vec6 xi = clgd::random_rigid_motion(seed, 30.0, 0.25);
    const clgd::RigidTransform t = clgd::se3_exp(xi);
    const clgd::RegistrationError err = clgd::registration_error(
        t.rotation, Vec3::Zero(), clgd::Mat3::Identity(), Vec3::Zero());
    CHECK(err.re_degrees == doctest::Approx(30.0).epsilon(1e-9));
    CHECK(t.translation.norm() == doctest::Approx(0.25).epsilon(1e-9));
  }
  // Angle zero with pure translation is valid and exact.
  const Vec6 xi = clgd::random_rigid_motion(4, 0.0, 0.5);
  const clgd::RigidTransform t = clgd::se3_exp(xi);
  CHECK((t.rotation - clgd::Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(t.translation.norm() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("crop keeps ceil((1-c)n) points in original order") {
  SceneSpec spec;
  spec.kind = SceneKind::kSphere;
  spec.n = 1024;
  spec.seed = 12;
  spec.crop_fraction = 0.4;
  const Scene scene = clgd::synth_scene(spec);
  CHECK(scene.src.size() == 1024);
  CHECK(scene.tgt.size() == 615);  // ceil(0.6 * 1024)

  // Every kept point is one of the source points (identity motion), and the
  // kept subsequence preserves the source order.
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < scene.tgt.size(); ++i) {
    while (cursor < scene.src.size() && scene.src[cursor] != scene.tgt[i]) {
      ++cursor;
    }
    REQUIRE(cursor < scene.src.size());
    ++cursor;
  }

  // The crop is a half-space cut: kept and dropped projections separate.
  // Recover the direction by comparing the centroid shift.
  Vec3 kept_centroid = Vec3::Zero();
  for (const Vec3& p : scene.tgt.points) kept_centroid += p;
  kept_centroid /= static_cast<double>(scene.tgt.size());
  CHECK(kept_centroid.norm() > 0.05);  // noticeably off-center for a sphere
}

TEST_CASE("noise perturbs the target with the requested scale") {
  SceneSpec spec;
  spec.kind = SceneKind::kSphere;
  spec.n = 4096;
  spec.seed = 8;
  spec.noise_sigma = 0.01;
  const Scene scene = clgd::synth_scene(spec);
  double sum2 = 0.0;
  for (std::size_t i = 0; i < scene.tgt.size(); ++i) {
    sum2 += (scene.tgt[i] - scene.src[i]).squaredNorm();
  }
  const double sigma = std::sqrt(sum2 / (3.0 * 4096.0));
  CHECK(sigma == doctest::Approx(0.01).epsilon(0.05));
}

TEST_CASE("two-objects scenes move per object") {
  SceneSpec spec;
  spec.kind = SceneKind::kTwoObjects;
  spec.n = 63;  // odd: 32 points in object 0, 31 in object 1
  spec.seed = 2;
  spec.object_flows = {Vec3(0.2, 0, 0), Vec3(0, -0.1, 0)};
  const Scene scene = clgd::synth_scene(spec);
  for (std::size_t i = 0; i < scene.src.size(); ++i) {
    const Vec3& want =
        spec.object_flows[static_cast<std::size_t>(scene.object_of[i])];
    CHECK(scene.flow_gt[i] == want);
    CHECK((scene.tgt[i] - (scene.src[i] + want)).norm() == 0.0);
  }
  CHECK(scene.object_of[0] == 0);
  CHECK(scene.object_of[31] == 0);
  CHECK(scene.object_of[32] == 1);
}

TEST_CASE("resampled target shares the surface but not the samples") {
  SceneSpec spec;
  spec.kind = SceneKind::kSphere;
  spec.n = 128;
  spec.seed = 6;
  spec.resample_target = true;
  const Scene scene = clgd::synth_scene(spec);
  bool any_same = false;
  for (std::size_t i = 0; i < 128; ++i) {
    any_same = any_same || scene.src[i] == scene.tgt[i];
    CHECK(scene.tgt[i].norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_FALSE(any_same);
}

TEST_CASE("scenes are deterministic in the seed") {
  SceneSpec spec;
  spec.kind = SceneKind::kTorus;
  spec.n = 100;
  spec.seed = 33;
  spec.crop_fraction = 0.25;
  spec.noise_sigma = 0.005;
  spec.xi = clgd::random_rigid_motion(1, 10.0, 0.1);
  const Scene a = clgd::synth_scene(spec);
  const Scene b = clgd::synth_scene(spec);
  REQUIRE(a.tgt.size() == b.tgt.size());
  for (std::size_t i = 0; i < a.tgt.size(); ++i) {
    CHECK(a.tgt[i] == b.tgt[i]);
  }
  spec.seed = 34;
  const Scene c = clgd::synth_scene(spec);
  bool any_diff = a.src.size() != c.src.size();
  for (std::size_t i = 0; !any_diff && i < a.src.size(); ++i) {
    any_diff = a.src[i] != c.src[i];
  }
  CHECK(any_diff);
}

TEST_CASE("spec validation errors") {
  SceneSpec spec;
  spec.n = 7;
  CHECK_THROWS_WITH_AS(clgd::synth_scene(spec), "n must be at least 8",
                       std::invalid_argument);
  spec.n = 64;
  spec.crop_fraction = 1.0;
  CHECK_THROWS_WITH_AS(clgd::synth_scene(spec),
                       "crop fraction must be in [0, 1)",
                       std::invalid_argument);
  spec.crop_fraction = 0.0;
  spec.noise_sigma = -0.1;
  CHECK_THROWS_WITH_AS(clgd::synth_scene(spec),
                       "noise sigma must be non-negative",
                       std::invalid_argument);
  spec.noise_sigma = 0.0;

  spec.kind = SceneKind::kTwoObjects;
  spec.xi[0] = 0.3;
  CHECK_THROWS_WITH_AS(
      clgd::synth_scene(spec),
      "two-objects scenes move by per-object flows, not a rigid motion",
      std::invalid_argument);
  spec.xi = Vec6::Zero();
  spec.object_flows = {Vec3(1, 0, 0)};
  CHECK_THROWS_WITH_AS(clgd::synth_scene(spec),
                       "two-objects scenes need exactly 2 object flows",
                       std::invalid_argument);
  spec.object_flows = {Vec3(1, 0, 0), Vec3(0, 1, 0)};
  CHECK_NOTHROW(clgd::synth_scene(spec));

  spec.kind = SceneKind::kSphere;
  CHECK_THROWS_WITH_AS(clgd::synth_scene(spec),
                       "object flows require the two-objects kind",
                       std::invalid_argument);
}
