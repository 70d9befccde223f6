#pragma once

#include <Eigen/Dense>
#include <vector>

#include "followme/rng.hpp"

namespace followme {

/// Single-layer LSTM with a linear two-output readout from the final hidden
/// state. Gate order in the fused storage is i, f, o, g; per-gate matrices
/// are views into the flat parameter vector.
struct LstmParams {
  int input_dim = 0;
  int hidden = 32;
  Eigen::VectorXd theta;

  static LstmParams zeros(int input_dim, int hidden = 32);
  /// Uniform(-s, s) with s = 1/sqrt(fan_in); forget-gate bias set to 1.
  static LstmParams random_init(int input_dim, int hidden, RngStream& rng);

  Eigen::Index size() const { return theta.size(); }
  static Eigen::Index param_count(int input_dim, int hidden);

  Eigen::Map<const Eigen::MatrixXd> wx() const;  // 4*hidden x input_dim
  Eigen::Map<const Eigen::MatrixXd> wh() const;  // 4*hidden x hidden
  Eigen::Map<const Eigen::VectorXd> b() const;   // 4*hidden
  Eigen::Map<const Eigen::MatrixXd> wy() const;  // 2 x hidden
  Eigen::Map<const Eigen::VectorXd> by() const;  // 2
  Eigen::Map<Eigen::MatrixXd> wx();
  Eigen::Map<Eigen::MatrixXd> wh();
  Eigen::Map<Eigen::VectorXd> b();
  Eigen::Map<Eigen::MatrixXd> wy();
  Eigen::Map<Eigen::VectorXd> by();

  // Per-gate slices of the fused matrices (i, f, o, g from top to bottom).
  Eigen::MatrixXd w_gate(int gate) const { return wx().middleRows(gate * hidden, hidden); }
  Eigen::MatrixXd u_gate(int gate) const { return wh().middleRows(gate * hidden, hidden); }
  Eigen::VectorXd b_gate(int gate) const { return b().segment(gate * hidden, hidden); }
};

/// Reusable buffers for batched forward/backward over a fixed window length.
struct LstmWorkspace {
  std::vector<Eigen::MatrixXd> x, gi, gf, go, gg, c, tanh_c, h;
  Eigen::MatrixXd h_state, c_state, gates;

  void resize(int window_len, int input_dim, int hidden, int batch);
};

/// Run the cell over one window (rows = timesteps) from zero initial state
/// and read out from the final hidden state.
Eigen::Vector2d lstm_forward(const LstmParams& params, const Eigen::MatrixXd& window);

/// Batched forward over B windows; returns 2 x B predictions. The workspace
/// keeps every intermediate needed by lstm_gradient.
Eigen::Matrix2Xd lstm_forward_batch(const LstmParams& params,
                                    const std::vector<const Eigen::MatrixXd*>& windows,
                                    LstmWorkspace& ws);

/// Exact gradient of the batch MSE via backpropagation through time.
LstmParams lstm_gradient(const LstmParams& params,
                         const std::vector<const Eigen::MatrixXd*>& windows,
                         const Eigen::Matrix2Xd& targets);
LstmParams lstm_gradient(const LstmParams& params,
                         const std::vector<const Eigen::MatrixXd*>& windows,
                         const Eigen::Matrix2Xd& targets, LstmWorkspace& ws);

}  // namespace followme
