#pragma once

#include <cstdint>
#include <vector>

#include "followme/dataset.hpp"
#include "followme/model.hpp"

namespace followme {

/// Knobs of one gradient-training run. The learning rate of 0.1 is the
/// protocol value; early stopping (on test MSE, returning the best epoch)
/// keeps it usable and can be disabled for strict fixed-epoch runs.
struct TrainConfig {
  int epochs = 40;
  int batch_size = 64;
  std::uint64_t seed = 0;
  int iterations = 10;     // independent repetitions of the whole study
  int patience = 10;       // early-stop patience in epochs
  bool early_stop = true;
  double lr = 0.1;
  int hidden = 32;
  int window_len = 100;    // LSTM history length (2 s at 50 Hz)
  int window_stride = 4;   // stride of the LSTM training windows
  bool normalize = false;  // optional z-score of inputs, off by default
};

/// Mean squared error over all samples and both output dimensions.
double mse(const std::vector<Twist>& pred, const std::vector<Twist>& target);
double mse(const Eigen::Matrix2Xd& pred, const Eigen::Matrix2Xd& target);

struct TrainResult {
  Model model;
  double train_mse = 0.0;
  double test_mse = 0.0;
  int epochs_run = 0;
};

/// Train one model of the given kind on the chronological train/test split.
/// MLP and SVR regress the action from the current observation; the LSTM
/// regresses it from a window_len observation window. Gradient models run
/// mini-batch ADAM; SVR solves its dual once (deterministic). Throws
/// TrainingDiverged if the loss goes non-finite.
TrainResult train_model(ModelKind kind, const Dataset& train, const Dataset& test,
                        InputConfig cfg, const TrainConfig& tc);

}  // namespace followme
