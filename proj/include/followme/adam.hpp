#pragma once

#include <Eigen/Dense>

namespace followme {

/// ADAM accumulator state over a flat parameter vector.
struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  long step_count = 0;
  double lr = 0.1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  static AdamState init(Eigen::Index n, double lr = 0.1);
};

/// One ADAM update in place:
///   m <- b1*m + (1-b1)*g,  v <- b2*v + (1-b2)*g^2,
///   theta <- theta - lr * m_hat / (sqrt(v_hat) + eps)
/// with bias correction using the incremented step count.
void adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& grads, AdamState& state);

}  // namespace followme
