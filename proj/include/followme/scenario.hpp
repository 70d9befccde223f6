#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "followme/geometry.hpp"

namespace followme {

enum class ScenarioKind { kFigureEight, kSquare, kLine, kRandomWaypoints };

/// Leader trajectory description. Immutable after construction; the random
/// waypoint path is compiled from its seed at construction so that
/// leader_position stays a pure function.
class Scenario {
 public:
  /// Lissajous figure-eight (ax*sin(2*pi*t/T), ay*sin(4*pi*t/T)).
  static Scenario figure_eight(double amplitude_x, double amplitude_y, double period,
                               double duration);
  /// Axis-aligned square loop of the given side, walked counter-clockwise from the origin.
  static Scenario square(double side, double speed, double duration);
  /// Straight walk along +x.
  static Scenario line(double speed, double duration);
  /// Seeded waypoint walk with bounded turn angles, speed changes and pauses,
  /// confined to a square of the given half extent.
  static Scenario random_waypoints(std::uint64_t seed, double half_extent, double speed_lo,
                                   double speed_hi, double duration);

  /// Named CLI presets: "eight", "square", "line", "random".
  static Scenario preset(const std::string& name, std::uint64_t seed, double duration = 0.0);

  ScenarioKind kind() const { return kind_; }
  double duration() const { return duration_; }
  const std::string& name() const { return name_; }

  friend Vec2 leader_position(const Scenario& scenario, double t);

 private:
  Scenario() = default;

  ScenarioKind kind_ = ScenarioKind::kLine;
  double duration_ = 0.0;
  std::string name_;

  // figure-eight
  double amplitude_x_ = 0.0, amplitude_y_ = 0.0, period_ = 0.0;
  // square / line
  double side_ = 0.0, speed_ = 0.0;
  // compiled piecewise-linear waypoint path (random_waypoints)
  std::vector<double> knot_times_;
  std::vector<Vec2> knot_points_;
};

/// Leader world position at time t in [0, scenario.duration()].
Vec2 leader_position(const Scenario& scenario, double t);

}  // namespace followme
