#include "followme/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "followme/adam.hpp"
#include "followme/errors.hpp"
#include "followme/rng.hpp"

namespace followme {

namespace {

Eigen::Matrix2Xd actions_matrix(const Dataset& ds) {
  Eigen::Matrix2Xd y(2, ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    y(0, static_cast<Eigen::Index>(i)) = ds.samples[i].action.v;
    y(1, static_cast<Eigen::Index>(i)) = ds.samples[i].action.omega;
  }
  return y;
}

Eigen::MatrixXd features_matrix(const Dataset& ds, InputConfig cfg) {
  Eigen::MatrixXd x(feature_dim(cfg), ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    x.col(static_cast<Eigen::Index>(i)) = select_inputs(ds.samples[i].obs, cfg);
  }
  return x;
}

void shuffle_indices(std::vector<std::size_t>& idx, RngStream& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    const std::size_t j = rng.uniform_int(0, i - 1);
    std::swap(idx[i - 1], idx[j]);
  }
}

void check_finite(double loss, int epoch, const char* kind) {
  if (!std::isfinite(loss)) {
    throw TrainingDiverged(std::string(kind) + " training diverged (non-finite loss) at epoch " +
                               std::to_string(epoch),
                           epoch);
  }
}

TrainResult train_mlp(const Dataset& train, const Dataset& test, InputConfig cfg,
                      const TrainConfig& tc) {
  Eigen::MatrixXd x_train = features_matrix(train, cfg);
  Eigen::MatrixXd x_test = features_matrix(test, cfg);
  const Eigen::Matrix2Xd y_train = actions_matrix(train);
  const Eigen::Matrix2Xd y_test = actions_matrix(test);

  Model model;
  model.kind = ModelKind::kMlp;
  model.input_config = cfg;
  model.window_len = tc.window_len;
  if (tc.normalize) {
    model.scaler = FeatureScaler::fit(x_train.transpose());
    x_train = model.scaler->apply_rows(x_train.transpose()).transpose();
    x_test = model.scaler->apply_rows(x_test.transpose()).transpose();
  }

  RngStream rng = RngStream::derive(tc.seed, "mlp-train");
  MlpParams params = MlpParams::random_init(feature_dim(cfg), tc.hidden, rng);
  AdamState adam = AdamState::init(params.size(), tc.lr);

  const auto n = static_cast<std::size_t>(x_train.cols());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  double best_test = std::numeric_limits<double>::infinity();
  MlpParams best_params = params;
  int best_epoch = 0;
  int epochs_run = 0;
  for (int epoch = 1; epoch <= tc.epochs; ++epoch) {
    epochs_run = epoch;
    shuffle_indices(order, rng);
    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(tc.batch_size)) {
      const std::size_t count = std::min(static_cast<std::size_t>(tc.batch_size), n - start);
      Eigen::MatrixXd xb(x_train.rows(), count);
      Eigen::Matrix2Xd yb(2, count);
      for (std::size_t k = 0; k < count; ++k) {
        xb.col(static_cast<Eigen::Index>(k)) =
            x_train.col(static_cast<Eigen::Index>(order[start + k]));
        yb.col(static_cast<Eigen::Index>(k)) =
            y_train.col(static_cast<Eigen::Index>(order[start + k]));
      }
      const MlpParams grad = mlp_gradient(params, xb, yb);
      adam_step(params.theta, grad.theta, adam);
    }
    const double test_mse = mse(mlp_forward_batch(params, x_test), y_test);
    check_finite(test_mse, epoch, "MLP");
    if (test_mse < best_test) {
      best_test = test_mse;
      best_params = params;
      best_epoch = epoch;
    }
    if (tc.early_stop && epoch - best_epoch >= tc.patience) break;
  }

  model.params = std::move(best_params);
  TrainResult result;
  result.train_mse =
      mse(mlp_forward_batch(std::get<MlpParams>(model.params), x_train), y_train);
  result.test_mse = best_test;
  result.epochs_run = epochs_run;
  result.model = std::move(model);
  return result;
}

struct WindowSet {
  std::vector<Eigen::MatrixXd> features;
  Eigen::Matrix2Xd targets;
};

WindowSet windows_to_set(std::vector<Window> windows, const FeatureScaler* scaler) {
  WindowSet set;
  set.features.reserve(windows.size());
  set.targets.resize(2, static_cast<Eigen::Index>(windows.size()));
  for (std::size_t i = 0; i < windows.size(); ++i) {
    set.features.push_back(scaler ? scaler->apply_rows(windows[i].features)
                                  : std::move(windows[i].features));
    set.targets(0, static_cast<Eigen::Index>(i)) = windows[i].target.v;
    set.targets(1, static_cast<Eigen::Index>(i)) = windows[i].target.omega;
  }
  return set;
}

double lstm_mse_batched(const LstmParams& params, const WindowSet& set, LstmWorkspace& ws,
                        int batch_size) {
  const auto n = static_cast<std::size_t>(set.features.size());
  double sq_sum = 0.0;
  std::vector<const Eigen::MatrixXd*> batch;
  for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(batch_size)) {
    const std::size_t count = std::min(static_cast<std::size_t>(batch_size), n - start);
    batch.clear();
    for (std::size_t k = 0; k < count; ++k) batch.push_back(&set.features[start + k]);
    const Eigen::Matrix2Xd pred = lstm_forward_batch(params, batch, ws);
    sq_sum += (pred - set.targets.middleCols(static_cast<Eigen::Index>(start),
                                             static_cast<Eigen::Index>(count)))
                  .squaredNorm();
  }
  return sq_sum / (2.0 * static_cast<double>(n));
}

TrainResult train_lstm(const Dataset& train, const Dataset& test, InputConfig cfg,
                       const TrainConfig& tc) {
  Model model;
  model.kind = ModelKind::kLstm;
  model.input_config = cfg;
  model.window_len = tc.window_len;
  if (tc.normalize) {
    model.scaler = FeatureScaler::fit(features_matrix(train, cfg).transpose());
  }
  const FeatureScaler* scaler = model.scaler ? &*model.scaler : nullptr;

  WindowSet train_set =
      windows_to_set(make_windows(train, cfg, tc.window_len, tc.window_stride), scaler);
  WindowSet test_set = windows_to_set(make_windows(test, cfg, tc.window_len, 1), scaler);

  RngStream rng = RngStream::derive(tc.seed, "lstm-train");
  LstmParams params = LstmParams::random_init(feature_dim(cfg), tc.hidden, rng);
  AdamState adam = AdamState::init(params.size(), tc.lr);

  const std::size_t n = train_set.features.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  LstmWorkspace ws;
  std::vector<const Eigen::MatrixXd*> batch;
  Eigen::Matrix2Xd targets;

  double best_test = std::numeric_limits<double>::infinity();
  LstmParams best_params = params;
  int best_epoch = 0;
  int epochs_run = 0;
  for (int epoch = 1; epoch <= tc.epochs; ++epoch) {
    epochs_run = epoch;
    shuffle_indices(order, rng);
    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(tc.batch_size)) {
      const std::size_t count = std::min(static_cast<std::size_t>(tc.batch_size), n - start);
      batch.clear();
      targets.resize(2, static_cast<Eigen::Index>(count));
      for (std::size_t k = 0; k < count; ++k) {
        batch.push_back(&train_set.features[order[start + k]]);
        targets.col(static_cast<Eigen::Index>(k)) =
            train_set.targets.col(static_cast<Eigen::Index>(order[start + k]));
      }
      const LstmParams grad = lstm_gradient(params, batch, targets, ws);
      adam_step(params.theta, grad.theta, adam);
    }
    const double test_mse = lstm_mse_batched(params, test_set, ws, tc.batch_size);
    check_finite(test_mse, epoch, "LSTM");
    if (test_mse < best_test) {
      best_test = test_mse;
      best_params = params;
      best_epoch = epoch;
    }
    if (tc.early_stop && epoch - best_epoch >= tc.patience) break;
  }

  model.params = std::move(best_params);
  TrainResult result;
  result.train_mse =
      lstm_mse_batched(std::get<LstmParams>(model.params), train_set, ws, tc.batch_size);
  result.test_mse = best_test;
  result.epochs_run = epochs_run;
  result.model = std::move(model);
  return result;
}

TrainResult train_svr(const Dataset& train, const Dataset& test, InputConfig cfg,
                      const TrainConfig& tc) {
  Model model;
  model.kind = ModelKind::kSvr;
  model.input_config = cfg;
  model.window_len = tc.window_len;

  Eigen::MatrixXd x_train = features_matrix(train, cfg);
  Eigen::MatrixXd x_test = features_matrix(test, cfg);
  if (tc.normalize) {
    model.scaler = FeatureScaler::fit(x_train.transpose());
    x_train = model.scaler->apply_rows(x_train.transpose()).transpose();
    x_test = model.scaler->apply_rows(x_test.transpose()).transpose();
  }
  const Eigen::Matrix2Xd y_train = actions_matrix(train);
  const Eigen::Matrix2Xd y_test = actions_matrix(test);

  SvrHyper hyper;  // RBF, gamma = 1/D, C = 10, epsilon = 0.01
  SvrParams params = svr_train(x_train.transpose(), y_train.transpose(), hyper);

  const auto batch_predict = [&](const Eigen::MatrixXd& x) {
    Eigen::Matrix2Xd pred(2, x.cols());
    for (Eigen::Index i = 0; i < x.cols(); ++i) {
      pred.col(i) = svr_predict(params, x.col(i));
    }
    return pred;
  };

  TrainResult result;
  result.train_mse = mse(batch_predict(x_train), y_train);
  result.test_mse = mse(batch_predict(x_test), y_test);
  result.epochs_run = 1;
  model.params = std::move(params);
  result.model = std::move(model);
  return result;
}

}  // namespace

double mse(const Eigen::Matrix2Xd& pred, const Eigen::Matrix2Xd& target) {
  if (pred.cols() != target.cols() || pred.cols() == 0) {
    throw ShapeMismatch("mse: sequences must be non-empty and of equal length");
  }
  return (pred - target).squaredNorm() / (2.0 * static_cast<double>(pred.cols()));
}

double mse(const std::vector<Twist>& pred, const std::vector<Twist>& target) {
  if (pred.size() != target.size() || pred.empty()) {
    throw ShapeMismatch("mse: sequences must be non-empty and of equal length");
  }
  double sq_sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double dv = pred[i].v - target[i].v;
    const double dw = pred[i].omega - target[i].omega;
    sq_sum += dv * dv + dw * dw;
  }
  return sq_sum / (2.0 * static_cast<double>(pred.size()));
}

TrainResult train_model(ModelKind kind, const Dataset& train, const Dataset& test,
                        InputConfig cfg, const TrainConfig& tc) {
  if (train.size() == 0 || test.size() == 0) {
    throw InsufficientData("train_model: empty train or test set");
  }
  switch (kind) {
    case ModelKind::kMlp: return train_mlp(train, test, cfg, tc);
    case ModelKind::kLstm: return train_lstm(train, test, cfg, tc);
    case ModelKind::kSvr: return train_svr(train, test, cfg, tc);
  }
  throw Error("train_model: unreachable");
}

}  // namespace followme
