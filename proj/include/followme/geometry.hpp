#pragma once

#include <cmath>

namespace followme {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Command limits shared by the whole pipeline. The linear cap is the
/// demonstration protocol's hard limit; the angular cap is a configuration
/// default chosen for wheelchair-scale comfort.
inline constexpr double kMaxLinearSpeed = 1.2;    // m/s
inline constexpr double kMaxAngularSpeed = 1.5;   // rad/s

/// Wrap an angle into (-pi, pi]. Throws on non-finite input.
double normalize_angle(double phi);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Planar pose. Heading is kept normalized to (-pi, pi].
struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Pose2D() = default;
  Pose2D(double x, double y, double theta);

  Vec2 position() const { return {x, y}; }
};

/// Velocity command: forward speed v (m/s) and turn rate omega (rad/s).
struct Twist {
  double v = 0.0;
  double omega = 0.0;
};

inline double clamp(double x, double lo, double hi) {
  return x < lo ? lo : (x > hi ? hi : x);
}

inline Twist clamp_twist(const Twist& cmd, double v_max = kMaxLinearSpeed,
                         double omega_max = kMaxAngularSpeed) {
  return {clamp(cmd.v, 0.0, v_max), clamp(cmd.omega, -omega_max, omega_max)};
}

/// Integrate the unicycle model with a constant command over dt.
/// Uses the exact circular-arc solution; falls back to a straight-line
/// step when |omega| < 1e-9 rad/s.
Pose2D step_unicycle(const Pose2D& pose, const Twist& cmd, double dt);

/// Express a world-frame point in the body frame of `pose`.
Vec2 world_to_body(const Pose2D& pose, const Vec2& point_world);

/// Express a body-frame point in the world frame.
Vec2 body_to_world(const Pose2D& pose, const Vec2& point_body);

}  // namespace followme
