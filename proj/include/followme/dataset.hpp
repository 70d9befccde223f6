#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "followme/geometry.hpp"
#include "followme/uwb.hpp"

namespace followme {

/// One demonstration pair: what the sensor saw and what the expert commanded.
struct DemoSample {
  UwbObservation obs;
  Twist action;
};

/// Provenance recorded alongside a dataset (sidecar JSON).
struct DatasetMeta {
  std::uint64_t seed = 0;
  std::string scenario;
  std::map<std::string, double> gains;
};

/// Ordered demonstration recording at a fixed rate. Timestamps must increase
/// strictly by 1/rate_hz.
struct Dataset {
  std::vector<DemoSample> samples;
  double rate_hz = 50.0;
  DatasetMeta meta;

  std::size_t size() const { return samples.size(); }

  /// Enforces the timestamp spacing invariant; throws ValidationError.
  void validate() const;
};

/// Which sensor channels feed the model (the ablation axis).
enum class InputConfig { kRangesOnly, kAnglesOnly, kRangesAndAngles };

int feature_dim(InputConfig cfg);
std::string to_string(InputConfig cfg);
InputConfig input_config_from_string(const std::string& name);

/// Project an observation onto the configured channels, in R-then-A order.
/// Raw physical units, no rescaling.
Eigen::VectorXd select_inputs(const UwbObservation& obs, InputConfig cfg);

/// Fixed-length observation window paired with the action at its final step.
struct Window {
  Eigen::MatrixXd features;  // window_len x feature_dim, row per timestep
  Twist target;
};

/// Slide a window of `window_len` steps over the dataset with the given
/// stride. Window k covers samples [k*stride, k*stride + window_len); its
/// target is the action of the last covered sample.
std::vector<Window> make_windows(const Dataset& ds, InputConfig cfg, int window_len = 100,
                                 int stride = 1);

/// Chronological split: the first round(train_fraction*N) samples become the
/// training set, the remainder the test set. Throws InsufficientData when a
/// partition ends up smaller than min_partition.
std::pair<Dataset, Dataset> split_dataset(const Dataset& ds, double train_fraction,
                                          std::size_t min_partition = 1);

/// CSV schema: header `t,r1,r2,a1,a2,v,omega`, one row per sample, shortest
/// round-trip decimal representation, LF line endings. A `<stem>.meta.json`
/// sidecar carries rate and provenance.
void write_csv(const Dataset& ds, const std::filesystem::path& path);
Dataset read_csv(const std::filesystem::path& path);

/// Optional per-feature z-score transform (experimentation only; acceptance
/// runs keep inputs raw).
struct FeatureScaler {
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;

  static FeatureScaler fit(const Eigen::MatrixXd& features_by_row);
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd apply_rows(const Eigen::MatrixXd& features_by_row) const;
};

}  // namespace followme
