#pragma once

#include <Eigen/Dense>

#include "followme/rng.hpp"

namespace followme {

/// Single-hidden-layer perceptron with tanh activation and two linear
/// outputs (v, omega). Parameters live in one flat vector so the optimizer
/// and the finite-difference checks can treat them uniformly; W1/b1/W2/b2
/// are views into that storage.
struct MlpParams {
  int input_dim = 0;
  int hidden = 32;
  Eigen::VectorXd theta;

  static MlpParams zeros(int input_dim, int hidden = 32);
  /// Uniform(-s, s) with s = 1/sqrt(fan_in) per layer.
  static MlpParams random_init(int input_dim, int hidden, RngStream& rng);

  Eigen::Index size() const { return theta.size(); }
  static Eigen::Index param_count(int input_dim, int hidden);

  Eigen::Map<const Eigen::MatrixXd> w1() const;  // hidden x input_dim
  Eigen::Map<const Eigen::VectorXd> b1() const;  // hidden
  Eigen::Map<const Eigen::MatrixXd> w2() const;  // 2 x hidden
  Eigen::Map<const Eigen::VectorXd> b2() const;  // 2
  Eigen::Map<Eigen::MatrixXd> w1();
  Eigen::Map<Eigen::VectorXd> b1();
  Eigen::Map<Eigen::MatrixXd> w2();
  Eigen::Map<Eigen::VectorXd> b2();
};

/// y = W2 * tanh(W1 x + b1) + b2. No output clamping here.
Eigen::Vector2d mlp_forward(const MlpParams& params, const Eigen::VectorXd& x);

/// Column-per-sample batched forward.
Eigen::Matrix2Xd mlp_forward_batch(const MlpParams& params, const Eigen::MatrixXd& inputs);

/// Exact gradient of the batch MSE (mean over samples and both output
/// dimensions) with respect to every parameter, shaped like the parameters.
MlpParams mlp_gradient(const MlpParams& params, const Eigen::MatrixXd& inputs,
                       const Eigen::Matrix2Xd& targets);

}  // namespace followme
