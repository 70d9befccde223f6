#include "followme/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "followme/errors.hpp"

namespace followme {

double normalize_angle(double phi) {
  if (!std::isfinite(phi)) {
    throw Error("normalize_angle: non-finite angle");
  }
  double r = std::fmod(phi + kPi, 2.0 * kPi);
  if (r <= 0.0) r += 2.0 * kPi;
  return r - kPi;
}

Pose2D::Pose2D(double x, double y, double theta_in) : x(x), y(y), theta(normalize_angle(theta_in)) {}

Pose2D step_unicycle(const Pose2D& pose, const Twist& cmd, double dt) {
  if (!(dt > 0.0)) {
    throw Error("step_unicycle: dt must be positive");
  }
  const double theta_next = pose.theta + cmd.omega * dt;
  if (std::abs(cmd.omega) < 1e-9) {
    return Pose2D(pose.x + cmd.v * std::cos(pose.theta) * dt,
                  pose.y + cmd.v * std::sin(pose.theta) * dt, theta_next);
  }
  const double radius = cmd.v / cmd.omega;
  return Pose2D(pose.x + radius * (std::sin(theta_next) - std::sin(pose.theta)),
                pose.y - radius * (std::cos(theta_next) - std::cos(pose.theta)), theta_next);
}

Vec2 world_to_body(const Pose2D& pose, const Vec2& point_world) {
  const double dx = point_world.x - pose.x;
  const double dy = point_world.y - pose.y;
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  return {c * dx + s * dy, -s * dx + c * dy};
}

Vec2 body_to_world(const Pose2D& pose, const Vec2& point_body) {
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  return {pose.x + c * point_body.x - s * point_body.y,
          pose.y + s * point_body.x + c * point_body.y};
}

}  // namespace followme
