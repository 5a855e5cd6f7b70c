#include "clgd/se3.hpp"

#include <Eigen/Geometry>
#include <cmath>

namespace clgd {
namespace {

constexpr double kSmallAngle = 1e-6;

}  // namespace

Mat3 skew(const Vec3& w) {
  Mat3 m;
  m << 0.0, -w.z(), w.y(), w.z(), 0.0, -w.x(), -w.y(), w.x(), 0.0;
  return m;
}

RigidTransform se3_exp(const Vec6& xi) {
  const Vec3 omega = xi.head<3>();
  const Vec3 rho = xi.tail<3>();
  const double theta2 = omega.squaredNorm();
  const double theta = std::sqrt(theta2);

  // R = I + a K + b K^2, V = I + b K + c K^2 with K = skew(omega).
  double a, b, c;
  if (theta < kSmallAngle) {
    a = 1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0;
    b = 0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0;
    c = 1.0 / 6.0 - theta2 / 120.0 + theta2 * theta2 / 5040.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta2;
    c = (theta - std::sin(theta)) / (theta2 * theta);
  }
  const Mat3 k = skew(omega);
  const Mat3 k2 = k * k;
  RigidTransform t;
  t.rotation = Mat3::Identity() + a * k + b * k2;
  t.translation = (Mat3::Identity() + b * k + c * k2) * rho;
  return t;
}

Vec6 se3_log(const RigidTransform& t) {
  // Angle and axis through the unit quaternion; atan keeps full precision
  // where acos of the trace loses digits (theta near 0 and pi).
  const Eigen::Quaterniond q(t.rotation);
  const Vec3 vec(q.x(), q.y(), q.z());
  const double w = q.w();
  const double squared_n = vec.squaredNorm();
  double coef;  // omega = coef * vec
  if (squared_n < 1e-14) {
    coef = 2.0 / w - 2.0 * squared_n / (3.0 * w * w * w);
  } else {
    const double n = std::sqrt(squared_n);
    if (std::abs(w) < 1e-10) {
      coef = (w >= 0.0 ? M_PI : -M_PI) / n;
    } else {
      coef = 2.0 * std::atan(n / w) / n;
    }
  }
  const Vec3 omega = coef * vec;

  const double theta2 = omega.squaredNorm();
  const double theta = std::sqrt(theta2);
  double c;  // V^{-1} = I - K/2 + c K^2
  if (theta < kSmallAngle) {
    c = 1.0 / 12.0 + theta2 / 720.0;
  } else {
    const double a = std::sin(theta) / theta;
    const double b = (1.0 - std::cos(theta)) / theta2;
    c = (1.0 - a / (2.0 * b)) / theta2;
  }
  const Mat3 k = skew(omega);
  const Mat3 v_inv = Mat3::Identity() - 0.5 * k + c * (k * k);

  Vec6 xi;
  xi.head<3>() = omega;
  xi.tail<3>() = v_inv * t.translation;
  return xi;
}

Vec6 RigidTransform::xi() const { return se3_log(*this); }

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  RigidTransform out;
  out.rotation = a.rotation * b.rotation;
  out.translation = a.rotation * b.translation + a.translation;
  return out;
}

Vec3 apply(const RigidTransform& t, const Vec3& p) {
  return t.rotation * p + t.translation;
}

PointCloud transformed(const PointCloud& cloud, const RigidTransform& t) {
  return transformed(cloud, t.rotation, t.translation);
}

bool is_rotation(const Mat3& r, double tolerance) {
  const Mat3 residual = r.transpose() * r - Mat3::Identity();
  return residual.cwiseAbs().maxCoeff() <= tolerance &&
         std::abs(r.determinant() - 1.0) <= tolerance;
}

}  // namespace clgd
