#pragma once

#include <cstdint>

#include "followme/geometry.hpp"
#include "followme/rng.hpp"

namespace followme {

/// Mounting geometry of the two ranging anchors, in the follower body frame.
/// Defaults put them at (0, +/-0.3) m, roughly armrest width.
struct AnchorConfig {
  Vec2 anchor1{0.0, 0.3};
  Vec2 anchor2{0.0, -0.3};
  double min_valid_range = 0.05;  // m

  void validate() const;
};

/// Additive per-channel gaussian noise. Sigmas of 0.05 m / 2 deg reflect
/// centimeter-level ranging hardware.
struct NoiseSpec {
  double sigma_range = 0.05;   // m
  double sigma_angle = 0.035;  // rad (~2 deg)
  std::uint64_t seed = 0;

  void validate() const;
};

/// One timestamped sensor reading: ranges r1, r2 (m) from each anchor to the
/// leader tag and angles of arrival a1, a2 (rad) in the follower body frame.
struct UwbObservation {
  double t = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
};

/// Simulate one UWB reading of the leader tag from the follower's anchors.
/// Angles are measured in the follower body frame (zero = straight ahead).
/// Noise is drawn from `rng` in channel order r1, r2, a1, a2; ranges are
/// clamped positive and angles re-normalized afterwards.
UwbObservation uwb_observe(double t, const Pose2D& follower, const Vec2& leader,
                           const AnchorConfig& anchors, const NoiseSpec& noise, RngStream& rng);

}  // namespace followme
