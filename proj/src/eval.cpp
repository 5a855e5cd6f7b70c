#include "clgd/eval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "clgd/se3.hpp"

namespace clgd {

RegistrationError registration_error(const Mat3& r_hat, const Vec3& t_hat,
                                     const Mat3& r_gt, const Vec3& t_gt) {
  constexpr double kTol = 1e-6;
  if (!is_rotation(r_hat, kTol)) {
    throw std::invalid_argument(
        "estimated rotation is not orthonormal within 1e-6");
  }
  if (!is_rotation(r_gt, kTol)) {
    throw std::invalid_argument(
        "ground-truth rotation is not orthonormal within 1e-6");
  }
  const double cos_angle =
      std::clamp(((r_gt.transpose() * r_hat).trace() - 1.0) / 2.0, -1.0, 1.0);
  RegistrationError err;
  err.re_degrees = std::acos(cos_angle) * 180.0 / M_PI;
  err.te = (t_hat - t_gt).norm();
  return err;
}

FlowError flow_error(const std::vector<Vec3>& predicted,
                     const std::vector<Vec3>& ground_truth) {
  if (predicted.size() != ground_truth.size()) {
    throw std::invalid_argument(
        "flow fields have different row counts: " +
        std::to_string(predicted.size()) + " vs " +
        std::to_string(ground_truth.size()));
  }
  if (predicted.empty()) {
    throw std::invalid_argument("flow fields are empty");
  }
  const std::size_t n = predicted.size();
  double epe_sum = 0.0;
  std::size_t acc005 = 0, acc01 = 0, outliers = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = (predicted[i] - ground_truth[i]).norm();
    const double gt_norm = ground_truth[i].norm();
    const bool has_relative = gt_norm > 0.0;
    const double rel = has_relative ? e / gt_norm : 0.0;
    epe_sum += e;
    if (e < 0.05 || (has_relative && rel < 0.05)) ++acc005;
    if (e < 0.1 || (has_relative && rel < 0.1)) ++acc01;
    if (e > 0.3 || (has_relative && rel > 0.1)) ++outliers;
  }
  FlowError err;
  err.epe3d = epe_sum / static_cast<double>(n);
  err.acc_005 = static_cast<double>(acc005) / static_cast<double>(n);
  err.acc_01 = static_cast<double>(acc01) / static_cast<double>(n);
  err.outliers = static_cast<double>(outliers) / static_cast<double>(n);
  return err;
}

}  // namespace clgd
