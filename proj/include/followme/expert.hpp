#pragma once

#include <vector>

#include "followme/dataset.hpp"
#include "followme/geometry.hpp"
#include "followme/scenario.hpp"
#include "followme/uwb.hpp"

namespace followme {

/// Demonstration protocol envelope: the recorded leader distance must stay
/// inside this band for a recording to be accepted.
inline constexpr double kDemoMinDistance = 1.0;  // m
inline constexpr double kDemoMaxDistance = 3.4;  // m

/// Parameters of the scripted demonstrator standing in for the human
/// teleoperator: a proportional follow law with first-order command smoothing.
struct ExpertGains {
  double k_v = 1.2;            // 1/s, distance gain
  double k_w = 2.0;            // 1/s, bearing gain
  double d_nom = 2.0;          // m, following distance the demonstrations center on
  double smoothing_tau = 0.4;  // s, command low-pass time constant
  double v_max = kMaxLinearSpeed;

  void validate() const;
  std::map<std::string, double> as_map() const;
};

/// One control step of the scripted expert. The raw command is
/// v = clamp(k_v*(distance - d_nom), 0, v_max), omega = clamp(k_w*bearing),
/// low-pass filtered toward raw from prev_cmd with time constant smoothing_tau.
Twist expert_policy(double distance, double bearing, const ExpertGains& gains,
                    const Twist& prev_cmd, double dt);

/// A recording plus its ground-truth trace (the dataset alone carries only
/// sensor observations and commands).
struct Demonstration {
  Dataset dataset;
  std::vector<Pose2D> follower_poses;
  std::vector<Vec2> leader_positions;
  double min_distance = 0.0;
  double max_distance = 0.0;
};

/// Drive the scripted expert through `scenario` for `duration` seconds at
/// `rate_hz`, recording the (noisy) UWB observation and the issued command at
/// every step. The expert reads ground-truth distance/bearing -- the learner
/// only ever sees the UWB channels. Throws DemonstrationOutOfRange naming the
/// first timestep whose ground-truth leader distance leaves
/// [kDemoMinDistance, kDemoMaxDistance].
Demonstration record_demonstration(const Scenario& scenario, const ExpertGains& gains,
                                   const AnchorConfig& anchors, const NoiseSpec& noise,
                                   double rate_hz = 50.0, double duration = 110.0);

}  // namespace followme
