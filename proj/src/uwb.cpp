#include "followme/uwb.hpp"

#include <cmath>

#include "followme/errors.hpp"

namespace followme {

void AnchorConfig::validate() const {
  if (!std::isfinite(anchor1.x) || !std::isfinite(anchor1.y) || !std::isfinite(anchor2.x) ||
      !std::isfinite(anchor2.y)) {
    throw Error("AnchorConfig: anchor positions must be finite");
  }
  if (anchor1.x == anchor2.x && anchor1.y == anchor2.y) {
    throw Error("AnchorConfig: anchors must be distinct");
  }
  if (!(min_valid_range > 0.0)) {
    throw Error("AnchorConfig: min_valid_range must be positive");
  }
}

void NoiseSpec::validate() const {
  if (sigma_range < 0.0 || sigma_angle < 0.0) {
    throw Error("NoiseSpec: sigmas must be non-negative");
  }
}

UwbObservation uwb_observe(double t, const Pose2D& follower, const Vec2& leader,
                           const AnchorConfig& anchors, const NoiseSpec& noise, RngStream& rng) {
  anchors.validate();
  noise.validate();

  const Vec2 leader_body = world_to_body(follower, leader);
  UwbObservation obs;
  obs.t = t;

  const Vec2 body_anchors[2] = {anchors.anchor1, anchors.anchor2};
  double r[2];
  double a[2];
  for (int i = 0; i < 2; ++i) {
    const double dx = leader_body.x - body_anchors[i].x;
    const double dy = leader_body.y - body_anchors[i].y;
    r[i] = std::hypot(dx, dy);
    if (r[i] < anchors.min_valid_range) {
      throw DegenerateGeometry("uwb_observe: leader within min_valid_range of anchor " +
                               std::to_string(i + 1));
    }
    a[i] = std::atan2(dy, dx);
  }

  obs.r1 = std::max(r[0] + rng.gaussian(noise.sigma_range), 1e-6);
  obs.r2 = std::max(r[1] + rng.gaussian(noise.sigma_range), 1e-6);
  obs.a1 = normalize_angle(a[0] + rng.gaussian(noise.sigma_angle));
  obs.a2 = normalize_angle(a[1] + rng.gaussian(noise.sigma_angle));
  return obs;
}

}  // namespace followme
