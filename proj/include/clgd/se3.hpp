#pragma once

#include "clgd/point_cloud.hpp"

namespace clgd {

// Rigid motion p -> R * p + t. The Lie-algebra coordinates xi = (omega, rho),
// rotation part first, are available through se3_exp / se3_log.
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec6 xi() const;
};

Mat3 skew(const Vec3& w);

// Closed-form exponential: Rodrigues for the rotation, V-matrix for the
// translation; Taylor series below ||omega|| = 1e-6.
RigidTransform se3_exp(const Vec6& xi);

// Inverse of se3_exp; the rotation angle is recovered through the quaternion
// form, which stays accurate near pi. ||omega|| <= pi always.
Vec6 se3_log(const RigidTransform& t);

// a then b composed as one motion: (a o b)(p) = a(b(p)).
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);

Vec3 apply(const RigidTransform& t, const Vec3& p);

PointCloud transformed(const PointCloud& cloud, const RigidTransform& t);

// True when R^T R = I and det R = 1 within `tolerance`.
bool is_rotation(const Mat3& r, double tolerance);

}  // namespace clgd
