#include "followme/expert.hpp"

#include <cmath>
#include <limits>

#include "followme/errors.hpp"

namespace followme {

void ExpertGains::validate() const {
  if (!(k_v > 0.0) || !(k_w > 0.0) || !(smoothing_tau > 0.0) || !(v_max > 0.0)) {
    throw Error("ExpertGains: gains and time constant must be positive");
  }
  if (d_nom < kDemoMinDistance || d_nom > kDemoMaxDistance) {
    throw Error("ExpertGains: d_nom must lie inside the demonstration envelope [1.0, 3.4] m");
  }
}

std::map<std::string, double> ExpertGains::as_map() const {
  return {{"k_v", k_v},
          {"k_w", k_w},
          {"d_nom", d_nom},
          {"smoothing_tau", smoothing_tau},
          {"v_max", v_max}};
}

Twist expert_policy(double distance, double bearing, const ExpertGains& gains,
                    const Twist& prev_cmd, double dt) {
  if (!(distance > 0.0)) {
    throw Error("expert_policy: distance must be positive");
  }
  if (!(dt > 0.0)) {
    throw Error("expert_policy: dt must be positive");
  }
  const double v_raw = clamp(gains.k_v * (distance - gains.d_nom), 0.0, gains.v_max);
  const double w_raw = clamp(gains.k_w * bearing, -kMaxAngularSpeed, kMaxAngularSpeed);
  const double alpha = 1.0 - std::exp(-dt / gains.smoothing_tau);
  return {prev_cmd.v + alpha * (v_raw - prev_cmd.v),
          prev_cmd.omega + alpha * (w_raw - prev_cmd.omega)};
}

Demonstration record_demonstration(const Scenario& scenario, const ExpertGains& gains,
                                   const AnchorConfig& anchors, const NoiseSpec& noise,
                                   double rate_hz, double duration) {
  gains.validate();
  anchors.validate();
  noise.validate();
  if (!(rate_hz > 0.0) || !(duration > 0.0)) {
    throw Error("record_demonstration: rate_hz and duration must be positive");
  }
  if (duration > scenario.duration() + 1e-9) {
    throw Error("record_demonstration: scenario shorter than requested duration");
  }

  const double dt = 1.0 / rate_hz;
  const auto steps = static_cast<std::size_t>(std::llround(duration * rate_hz));
  RngStream rng = RngStream::derive(noise.seed, "uwb-noise");

  Demonstration demo;
  demo.dataset.rate_hz = rate_hz;
  demo.dataset.meta.seed = noise.seed;
  demo.dataset.meta.scenario = scenario.name();
  demo.dataset.meta.gains = gains.as_map();
  demo.dataset.samples.reserve(steps);
  demo.follower_poses.reserve(steps);
  demo.leader_positions.reserve(steps);
  demo.min_distance = std::numeric_limits<double>::infinity();
  demo.max_distance = 0.0;

  // Start trailing the leader at the nominal following distance.
  Pose2D follower(-gains.d_nom, 0.0, 0.0);
  Twist cmd{0.0, 0.0};
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const Vec2 leader = leader_position(scenario, t);
    const double dist = distance(follower.position(), leader);
    if (dist < kDemoMinDistance || dist > kDemoMaxDistance) {
      throw DemonstrationOutOfRange(
          "record_demonstration: leader distance " + std::to_string(dist) +
              " m left the [1.0, 3.4] m envelope at timestep " + std::to_string(k),
          k);
    }
    demo.min_distance = std::min(demo.min_distance, dist);
    demo.max_distance = std::max(demo.max_distance, dist);

    const Vec2 leader_body = world_to_body(follower, leader);
    const double bearing = std::atan2(leader_body.y, leader_body.x);
    cmd = expert_policy(dist, bearing, gains, cmd, dt);

    const UwbObservation obs = uwb_observe(t, follower, leader, anchors, noise, rng);
    demo.dataset.samples.push_back({obs, cmd});
    demo.follower_poses.push_back(follower);
    demo.leader_positions.push_back(leader);

    follower = step_unicycle(follower, cmd, dt);
  }
  return demo;
}

}  // namespace followme
