#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>

#include "followme/dataset.hpp"
#include "followme/lstm.hpp"
#include "followme/mlp.hpp"
#include "followme/svr.hpp"

namespace followme {

enum class ModelKind { kMlp, kLstm, kSvr };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

/// A trained controller: parameters plus the input configuration they were
/// trained for. The LSTM variant consumes a window_len-step history; MLP and
/// SVR consume only the latest observation.
struct Model {
  ModelKind kind = ModelKind::kMlp;
  InputConfig input_config = InputConfig::kRangesAndAngles;
  int window_len = 100;
  std::optional<FeatureScaler> scaler;
  std::variant<MlpParams, LstmParams, SvrParams> params;

  int feature_dim() const { return followme::feature_dim(input_config); }
};

/// Map an observation history to a command. MLP/SVR read the newest
/// observation; the LSTM reads the last window_len observations, left-padded
/// by repeating the oldest available one. Raw outputs are clamped to the
/// Twist bounds. `cfg` must match the model's input configuration.
Twist policy_predict(const Model& model, std::span<const UwbObservation> history,
                     InputConfig cfg);

/// Raw (unclamped) model output for the same history.
Eigen::Vector2d policy_raw_output(const Model& model, std::span<const UwbObservation> history);

/// Versioned JSON model file: header fields plus named parameter tensors at
/// full round-trip precision. save -> load -> save is byte-identical.
void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace followme
