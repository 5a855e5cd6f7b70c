#pragma once

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>

namespace clgd {

struct AdamConfig {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void check() const {
    if (!(learning_rate > 0.0)) {
      throw std::invalid_argument("learning rate must be positive");
    }
    if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0)) {
      throw std::invalid_argument("adam betas must lie in (0, 1)");
    }
    if (!(epsilon > 0.0)) {
      throw std::invalid_argument("adam epsilon must be positive");
    }
  }
};

// Standard bias-corrected first/second-moment state. Deterministic: the
// update is a pure function of the state and the gradient.
struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  int step_count = 0;

  explicit AdamState(Eigen::Index dim)
      : m(Eigen::VectorXd::Zero(dim)), v(Eigen::VectorXd::Zero(dim)) {}
};

// Advances the state by one step and returns the parameter increment
// (already negated: new_param = param + increment).
inline Eigen::VectorXd adam_step(AdamState& state, const Eigen::VectorXd& grad,
                                 const AdamConfig& config) {
  if (grad.size() != state.m.size()) {
    throw std::invalid_argument("adam gradient dimension mismatch");
  }
  state.step_count += 1;
  state.m = config.beta1 * state.m + (1.0 - config.beta1) * grad;
  state.v =
      config.beta2 * state.v + (1.0 - config.beta2) * grad.cwiseProduct(grad);
  const double bc1 = 1.0 - std::pow(config.beta1, state.step_count);
  const double bc2 = 1.0 - std::pow(config.beta2, state.step_count);
  const Eigen::VectorXd m_hat = state.m / bc1;
  const Eigen::VectorXd v_hat = state.v / bc2;
  const Eigen::VectorXd denom =
      (v_hat.cwiseSqrt().array() + config.epsilon).matrix();
  return (-config.learning_rate) * m_hat.cwiseQuotient(denom);
}

}  // namespace clgd
