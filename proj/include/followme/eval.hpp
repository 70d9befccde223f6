#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "followme/expert.hpp"
#include "followme/model.hpp"
#include "followme/scenario.hpp"
#include "followme/train.hpp"

namespace followme {

/// Bearing of the leader in the follower body frame; zero means the follower
/// points straight at the leader.
double angular_offset(const Pose2D& follower, const Vec2& leader);

/// Stiff unsmoothed proportional controller standing in for the manually
/// tuned baseline whose speed variance the learned policies must beat.
Twist baseline_policy(double distance, double bearing, double nominal_d = 2.0);

struct TraceStep {
  double t = 0.0;
  Pose2D follower;
  Vec2 leader;
  Twist cmd;
  double distance = 0.0;
  double offset = 0.0;  // rad
};

struct ClosedLoopTrace {
  std::vector<TraceStep> steps;
  double rate_hz = 50.0;
  bool truncated = false;  // collision cut the run short
};

/// What a controller sees each step. Learned policies read the observation
/// history; the scripted expert and the baseline read ground truth.
struct ControlContext {
  std::span<const UwbObservation> history;
  double true_distance = 0.0;
  double true_bearing = 0.0;
  double dt = 0.0;
};

using ControllerFn = std::function<Twist(const ControlContext&)>;

ControllerFn make_model_controller(const Model& model, InputConfig cfg);
ControllerFn make_expert_controller(const ExpertGains& gains);
ControllerFn make_baseline_controller(double nominal_d = 2.0);

/// Simulate the follower under `controller` at 50 Hz for the scenario
/// duration: observe (noisy) -> command -> integrate, with the leader on its
/// scripted path. Truncates (and flags) the trace if the follower comes
/// within 0.3 m of the leader.
ClosedLoopTrace closed_loop_run(const ControllerFn& controller, const Scenario& scenario,
                                const AnchorConfig& anchors, const NoiseSpec& noise,
                                double rate_hz = 50.0);
ClosedLoopTrace closed_loop_run(const Model& model, InputConfig cfg, const Scenario& scenario,
                                const AnchorConfig& anchors, const NoiseSpec& noise,
                                double rate_hz = 50.0);

/// Five-number-plus-whiskers summary of one channel.
struct BoxStats {
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
  double whisker_lo = 0.0, whisker_hi = 0.0;  // Tukey 1.5*IQR fences, clipped to data
  double mean = 0.0, stddev = 0.0;
};

BoxStats box_stats(std::vector<double> values);

struct MetricsReport {
  double mae_angle_deg = 0.0;
  double mean_distance_m = 0.0;
  double mae_distance_m = 0.0;  // vs the nominal following distance
  BoxStats speed_stats;         // commanded linear speed, m/s
  BoxStats angle_stats;         // angular offset, degrees
};

MetricsReport compute_metrics(const ClosedLoopTrace& trace, double nominal_d = 2.0);

/// One cell of the offline ablation study.
struct OfflineCell {
  ModelKind kind = ModelKind::kMlp;
  InputConfig cfg = InputConfig::kRangesAndAngles;
  std::vector<double> train_mses;
  std::vector<double> test_mses;
  double mean_train_mse = 0.0;
  double mean_test_mse = 0.0;
  int iterations = 0;
  bool diverged = false;  // every iteration failed
  std::string note;
};

struct CellSpec {
  ModelKind kind;
  InputConfig cfg;
};

/// The 3 MLP + 3 LSTM + 1 SVR grid of the ablation table.
std::vector<CellSpec> default_study_grid();

struct OfflineResult {
  std::vector<OfflineCell> cells;
  std::vector<Model> best_models;  // per cell, lowest test MSE iteration (empty if diverged)
  std::vector<bool> has_model;
  std::uint64_t base_seed = 0;
};

/// Run `tc.iterations` independent trainings per cell (seeds tc.seed + i);
/// the deterministic SVR runs once and replicates its value. Diverged
/// iterations are flagged in the cell note instead of aborting the study.
OfflineResult offline_eval(const Dataset& ds, const std::vector<CellSpec>& grid,
                           const TrainConfig& tc, double train_fraction = 0.8);

// --- artifact writers -------------------------------------------------------

void write_offline_csv(const OfflineResult& result, const std::filesystem::path& path);
void write_offline_json(const OfflineResult& result, const std::filesystem::path& path);
OfflineResult read_offline_json(const std::filesystem::path& path);

/// Trace CSV schema: t,fx,fy,ftheta,lx,ly,v,omega,distance,offset
void write_trace_csv(const ClosedLoopTrace& trace, const std::filesystem::path& path);

void write_metrics_json(const MetricsReport& report, const std::filesystem::path& path);
MetricsReport read_metrics_json(const std::filesystem::path& path);

struct BoxStatsRow {
  std::string model;
  std::string scenario;
  std::string channel;  // "speed" or "angle"
  BoxStats stats;
};

void write_boxstats_csv(const std::vector<BoxStatsRow>& rows, const std::filesystem::path& path);

}  // namespace followme
