#include "followme/adam.hpp"

#include <cmath>

#include "followme/errors.hpp"

namespace followme {

AdamState AdamState::init(Eigen::Index n, double lr) {
  AdamState s;
  s.m = Eigen::VectorXd::Zero(n);
  s.v = Eigen::VectorXd::Zero(n);
  s.lr = lr;
  return s;
}

void adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& grads, AdamState& state) {
  if (params.size() != grads.size() || params.size() != state.m.size()) {
    throw ShapeMismatch("adam_step: parameter/gradient/state sizes disagree");
  }
  ++state.step_count;
  state.m = state.beta1 * state.m + (1.0 - state.beta1) * grads;
  state.v = state.beta2 * state.v + (1.0 - state.beta2) * grads.cwiseProduct(grads);
  const double m_corr = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
  const double v_corr = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));
  params.array() -= state.lr * (state.m.array() / m_corr) /
                    ((state.v.array() / v_corr).sqrt() + state.eps);
}

}  // namespace followme
