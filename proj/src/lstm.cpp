#include "followme/lstm.hpp"

#include "followme/errors.hpp"

namespace followme {

namespace {

// theta layout offsets: Wx (4H*D), Wh (4H*H), b (4H), Wy (2*H), by (2)
struct Layout {
  Eigen::Index wx, wh, b, wy, by, total;
};

Layout layout_of(int input_dim, int hidden) {
  const Eigen::Index h4 = 4LL * hidden;
  Layout l{};
  l.wx = 0;
  l.wh = l.wx + h4 * input_dim;
  l.b = l.wh + h4 * hidden;
  l.wy = l.b + h4;
  l.by = l.wy + 2LL * hidden;
  l.total = l.by + 2;
  return l;
}

}  // namespace

Eigen::Index LstmParams::param_count(int input_dim, int hidden) {
  return layout_of(input_dim, hidden).total;
}

LstmParams LstmParams::zeros(int input_dim, int hidden) {
  if (input_dim < 1 || hidden < 1) {
    throw ShapeMismatch("LstmParams: input_dim and hidden must be >= 1");
  }
  LstmParams p;
  p.input_dim = input_dim;
  p.hidden = hidden;
  p.theta = Eigen::VectorXd::Zero(param_count(input_dim, hidden));
  return p;
}

LstmParams LstmParams::random_init(int input_dim, int hidden, RngStream& rng) {
  LstmParams p = zeros(input_dim, hidden);
  const double sx = 1.0 / std::sqrt(static_cast<double>(input_dim));
  const double sh = 1.0 / std::sqrt(static_cast<double>(hidden));
  auto wx = p.wx();
  for (Eigen::Index i = 0; i < wx.size(); ++i) wx.data()[i] = rng.uniform(-sx, sx);
  auto wh = p.wh();
  for (Eigen::Index i = 0; i < wh.size(); ++i) wh.data()[i] = rng.uniform(-sh, sh);
  auto wy = p.wy();
  for (Eigen::Index i = 0; i < wy.size(); ++i) wy.data()[i] = rng.uniform(-sh, sh);
  p.b().segment(hidden, hidden).setOnes();  // forget-gate bias stabilizer
  return p;
}

Eigen::Map<const Eigen::MatrixXd> LstmParams::wx() const {
  const Layout l = layout_of(input_dim, hidden);
  return {theta.data() + l.wx, 4LL * hidden, input_dim};
}
Eigen::Map<const Eigen::MatrixXd> LstmParams::wh() const {
  const Layout l = layout_of(input_dim, hidden);
  return {theta.data() + l.wh, 4LL * hidden, hidden};
}
Eigen::Map<const Eigen::VectorXd> LstmParams::b() const {
  const Layout l = layout_of(input_dim, hidden);
  return {theta.data() + l.b, 4LL * hidden};
}
Eigen::Map<const Eigen::MatrixXd> LstmParams::wy() const {
  const Layout l = layout_of(input_dim, hidden);
  return {theta.data() + l.wy, 2, hidden};
}
Eigen::Map<const Eigen::VectorXd> LstmParams::by() const {
  const Layout l = layout_of(input_dim, hidden);
  return {theta.data() + l.by, 2};
}
Eigen::Map<Eigen::MatrixXd> LstmParams::wx() {
  const Layout l = layout_of(input_dim, hidden);
  return {theta.data() + l.wx, 4LL * hidden, input_dim};
}
Eigen::Map<Eigen::MatrixXd> LstmParams::wh() {
  const Layout l = layout_of(input_dim, hidden);
  return {theta.data() + l.wh, 4LL * hidden, hidden};
}
Eigen::Map<Eigen::VectorXd> LstmParams::b() {
  const Layout l = layout_of(input_dim, hidden);
  return {theta.data() + l.b, 4LL * hidden};
}
Eigen::Map<Eigen::MatrixXd> LstmParams::wy() {
  const Layout l = layout_of(input_dim, hidden);
  return {theta.data() + l.wy, 2, hidden};
}
Eigen::Map<Eigen::VectorXd> LstmParams::by() {
  const Layout l = layout_of(input_dim, hidden);
  return {theta.data() + l.by, 2};
}

void LstmWorkspace::resize(int window_len, int input_dim, int hidden, int batch) {
  const auto alloc = [&](std::vector<Eigen::MatrixXd>& v, Eigen::Index rows) {
    v.resize(window_len);
    for (auto& m : v) m.resize(rows, batch);
  };
  alloc(x, input_dim);
  alloc(gi, hidden);
  alloc(gf, hidden);
  alloc(go, hidden);
  alloc(gg, hidden);
  alloc(c, hidden);
  alloc(tanh_c, hidden);
  alloc(h, hidden);
  h_state.resize(hidden, batch);
  c_state.resize(hidden, batch);
  gates.resize(4LL * hidden, batch);
}

Eigen::Matrix2Xd lstm_forward_batch(const LstmParams& params,
                                    const std::vector<const Eigen::MatrixXd*>& windows,
                                    LstmWorkspace& ws) {
  const int batch = static_cast<int>(windows.size());
  if (batch == 0) {
    throw ShapeMismatch("lstm_forward_batch: empty batch");
  }
  const int window_len = static_cast<int>(windows[0]->rows());
  const int dim = params.input_dim;
  const int hidden = params.hidden;
  for (const auto* w : windows) {
    if (w->rows() != window_len || w->cols() != dim) {
      throw ShapeMismatch("lstm_forward_batch: window shape mismatch");
    }
  }
  ws.resize(window_len, dim, hidden, batch);

  ws.h_state.setZero();
  ws.c_state.setZero();
  for (int t = 0; t < window_len; ++t) {
    for (int col = 0; col < batch; ++col) {
      ws.x[t].col(col) = windows[col]->row(t).transpose();
    }
    ws.gates.noalias() = params.wx() * ws.x[t];
    ws.gates.noalias() += params.wh() * ws.h_state;
    ws.gates.colwise() += params.b();
    ws.gi[t] = ws.gates.topRows(hidden).array().logistic();
    ws.gf[t] = ws.gates.middleRows(hidden, hidden).array().logistic();
    ws.go[t] = ws.gates.middleRows(2 * hidden, hidden).array().logistic();
    ws.gg[t] = ws.gates.bottomRows(hidden).array().tanh();
    ws.c_state = ws.gf[t].cwiseProduct(ws.c_state) + ws.gi[t].cwiseProduct(ws.gg[t]);
    ws.c[t] = ws.c_state;
    ws.tanh_c[t] = ws.c_state.array().tanh();
    ws.h_state = ws.go[t].cwiseProduct(ws.tanh_c[t]);
    ws.h[t] = ws.h_state;
  }
  return (params.wy() * ws.h_state).colwise() + params.by();
}

Eigen::Vector2d lstm_forward(const LstmParams& params, const Eigen::MatrixXd& window) {
  LstmWorkspace ws;
  const std::vector<const Eigen::MatrixXd*> batch{&window};
  return lstm_forward_batch(params, batch, ws).col(0);
}

LstmParams lstm_gradient(const LstmParams& params,
                         const std::vector<const Eigen::MatrixXd*>& windows,
                         const Eigen::Matrix2Xd& targets) {
  LstmWorkspace ws;
  return lstm_gradient(params, windows, targets, ws);
}

LstmParams lstm_gradient(const LstmParams& params,
                         const std::vector<const Eigen::MatrixXd*>& windows,
                         const Eigen::Matrix2Xd& targets, LstmWorkspace& ws) {
  const auto batch = static_cast<Eigen::Index>(windows.size());
  if (targets.cols() != batch) {
    throw ShapeMismatch("lstm_gradient: targets do not match batch size");
  }
  const Eigen::Matrix2Xd pred = lstm_forward_batch(params, windows, ws);
  const int window_len = static_cast<int>(windows[0]->rows());
  const int hidden = params.hidden;

  LstmParams grad = LstmParams::zeros(params.input_dim, hidden);
  // L = sum ||pred - target||^2 / (2B)  =>  dL/dpred = (pred - target)/B
  const Eigen::Matrix2Xd dy = (pred - targets) / static_cast<double>(batch);
  grad.wy() = dy * ws.h[window_len - 1].transpose();
  grad.by() = dy.rowwise().sum();

  Eigen::MatrixXd dh = params.wy().transpose() * dy;  // H x B
  Eigen::MatrixXd dc = Eigen::MatrixXd::Zero(hidden, batch);
  Eigen::MatrixXd da(4LL * hidden, batch);
  for (int t = window_len - 1; t >= 0; --t) {
    const auto& i = ws.gi[t];
    const auto& f = ws.gf[t];
    const auto& o = ws.go[t];
    const auto& g = ws.gg[t];
    const auto& tc = ws.tanh_c[t];
    dc.array() += dh.array() * o.array() * (1.0 - tc.array().square());
    const Eigen::MatrixXd do_ = dh.cwiseProduct(tc);
    da.topRows(hidden) = (dc.cwiseProduct(g)).array() * i.array() * (1.0 - i.array());
    if (t > 0) {
      da.middleRows(hidden, hidden) =
          (dc.cwiseProduct(ws.c[t - 1])).array() * f.array() * (1.0 - f.array());
    } else {
      da.middleRows(hidden, hidden).setZero();
    }
    da.middleRows(2 * hidden, hidden) = do_.array() * o.array() * (1.0 - o.array());
    da.bottomRows(hidden) = (dc.cwiseProduct(i)).array() * (1.0 - g.array().square());

    grad.wx().noalias() += da * ws.x[t].transpose();
    if (t > 0) {
      grad.wh().noalias() += da * ws.h[t - 1].transpose();
    }
    grad.b() += da.rowwise().sum();

    dh.noalias() = params.wh().transpose() * da;
    dc = dc.cwiseProduct(f);
  }
  return grad;
}

}  // namespace followme
