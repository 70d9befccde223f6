#include "followme/mlp.hpp"

#include "followme/errors.hpp"

namespace followme {

namespace {

// theta layout offsets: W1 (H*D), b1 (H), W2 (2*H), b2 (2)
struct Layout {
  Eigen::Index w1, b1, w2, b2, total;
};

Layout layout_of(int input_dim, int hidden) {
  Layout l{};
  l.w1 = 0;
  l.b1 = l.w1 + static_cast<Eigen::Index>(hidden) * input_dim;
  l.w2 = l.b1 + hidden;
  l.b2 = l.w2 + 2LL * hidden;
  l.total = l.b2 + 2;
  return l;
}

}  // namespace

Eigen::Index MlpParams::param_count(int input_dim, int hidden) {
  return layout_of(input_dim, hidden).total;
}

MlpParams MlpParams::zeros(int input_dim, int hidden) {
  if (input_dim < 1 || hidden < 1) {
    throw ShapeMismatch("MlpParams: input_dim and hidden must be >= 1");
  }
  MlpParams p;
  p.input_dim = input_dim;
  p.hidden = hidden;
  p.theta = Eigen::VectorXd::Zero(param_count(input_dim, hidden));
  return p;
}

MlpParams MlpParams::random_init(int input_dim, int hidden, RngStream& rng) {
  MlpParams p = zeros(input_dim, hidden);
  const double s1 = 1.0 / std::sqrt(static_cast<double>(input_dim));
  const double s2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  auto w1 = p.w1();
  for (Eigen::Index i = 0; i < w1.size(); ++i) w1.data()[i] = rng.uniform(-s1, s1);
  auto w2 = p.w2();
  for (Eigen::Index i = 0; i < w2.size(); ++i) w2.data()[i] = rng.uniform(-s2, s2);
  return p;
}

Eigen::Map<const Eigen::MatrixXd> MlpParams::w1() const {
  const Layout l = layout_of(input_dim, hidden);
  return {theta.data() + l.w1, hidden, input_dim};
}
Eigen::Map<const Eigen::VectorXd> MlpParams::b1() const {
  const Layout l = layout_of(input_dim, hidden);
  return {theta.data() + l.b1, hidden};
}
Eigen::Map<const Eigen::MatrixXd> MlpParams::w2() const {
  const Layout l = layout_of(input_dim, hidden);
  return {theta.data() + l.w2, 2, hidden};
}
Eigen::Map<const Eigen::VectorXd> MlpParams::b2() const {
  const Layout l = layout_of(input_dim, hidden);
  return {theta.data() + l.b2, 2};
}
Eigen::Map<Eigen::MatrixXd> MlpParams::w1() {
  const Layout l = layout_of(input_dim, hidden);
  return {theta.data() + l.w1, hidden, input_dim};
}
Eigen::Map<Eigen::VectorXd> MlpParams::b1() {
  const Layout l = layout_of(input_dim, hidden);
  return {theta.data() + l.b1, hidden};
}
Eigen::Map<Eigen::MatrixXd> MlpParams::w2() {
  const Layout l = layout_of(input_dim, hidden);
  return {theta.data() + l.w2, 2, hidden};
}
Eigen::Map<Eigen::VectorXd> MlpParams::b2() {
  const Layout l = layout_of(input_dim, hidden);
  return {theta.data() + l.b2, 2};
}

Eigen::Vector2d mlp_forward(const MlpParams& params, const Eigen::VectorXd& x) {
  if (x.size() != params.input_dim) {
    throw ShapeMismatch("mlp_forward: input dimension mismatch");
  }
  const Eigen::VectorXd h = (params.w1() * x + params.b1()).array().tanh();
  return params.w2() * h + params.b2();
}

Eigen::Matrix2Xd mlp_forward_batch(const MlpParams& params, const Eigen::MatrixXd& inputs) {
  if (inputs.rows() != params.input_dim) {
    throw ShapeMismatch("mlp_forward_batch: input dimension mismatch");
  }
  const Eigen::MatrixXd h =
      ((params.w1() * inputs).colwise() + params.b1()).array().tanh();
  return (params.w2() * h).colwise() + params.b2();
}

MlpParams mlp_gradient(const MlpParams& params, const Eigen::MatrixXd& inputs,
                       const Eigen::Matrix2Xd& targets) {
  const Eigen::Index n = inputs.cols();
  if (n == 0) {
    throw ShapeMismatch("mlp_gradient: empty batch");
  }
  if (inputs.rows() != params.input_dim || targets.cols() != n) {
    throw ShapeMismatch("mlp_gradient: batch shape mismatch");
  }

  const Eigen::MatrixXd h = ((params.w1() * inputs).colwise() + params.b1()).array().tanh();
  const Eigen::Matrix2Xd pred = (params.w2() * h).colwise() + params.b2();

  // L = sum ||pred - target||^2 / (2n)  =>  dL/dpred = (pred - target)/n
  const Eigen::Matrix2Xd dy = (pred - targets) / static_cast<double>(n);
  MlpParams grad = MlpParams::zeros(params.input_dim, params.hidden);
  grad.w2() = dy * h.transpose();
  grad.b2() = dy.rowwise().sum();
  const Eigen::MatrixXd dh =
      (params.w2().transpose() * dy).array() * (1.0 - h.array().square());
  grad.w1() = dh * inputs.transpose();
  grad.b1() = dh.rowwise().sum();
  return grad;
}

}  // namespace followme
