#pragma once

#include <vector>

#include "clgd/point_cloud.hpp"

namespace clgd {

struct RegistrationError {
  double re_degrees = 0.0;  // angle of R_gt^-1 * R_hat, in degrees
  double te = 0.0;          // ||t_hat - t_gt||
};

// Throws std::invalid_argument when either matrix is not a rotation within
// 1e-6.
RegistrationError registration_error(const Mat3& r_hat, const Vec3& t_hat,
                                     const Mat3& r_gt, const Vec3& t_gt);

// Accuracy fractions use the absolute-or-relative convention: a point counts
// as accurate when its error is below the threshold absolutely, or relative
// to the ground-truth magnitude. Rows with zero ground truth use the
// absolute criterion only.
struct FlowError {
  double epe3d = 0.0;
  double acc_005 = 0.0;  // error < 0.05 or relative < 0.05
  double acc_01 = 0.0;   // error < 0.1 or relative < 0.1
  double outliers = 0.0; // error > 0.3 or relative > 0.1
};

FlowError flow_error(const std::vector<Vec3>& predicted,
                     const std::vector<Vec3>& ground_truth);

}  // namespace clgd
