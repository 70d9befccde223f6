#include "followme/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "followme/errors.hpp"
#include "followme/rng.hpp"

namespace followme {

namespace {

void check_positive(double value, const char* what) {
  if (!(value > 0.0)) {
    throw Error(std::string("Scenario: ") + what + " must be positive");
  }
}

void check_speed(double speed) {
  if (speed > kMaxLinearSpeed) {
    throw Error("Scenario: leader speed exceeds the 1.2 m/s cap");
  }
}

}  // namespace

Scenario Scenario::figure_eight(double amplitude_x, double amplitude_y, double period,
                                double duration) {
  check_positive(amplitude_x, "amplitude_x");
  check_positive(amplitude_y, "amplitude_y");
  check_positive(period, "period");
  check_positive(duration, "duration");
  Scenario s;
  s.kind_ = ScenarioKind::kFigureEight;
  s.amplitude_x_ = amplitude_x;
  s.amplitude_y_ = amplitude_y;
  s.period_ = period;
  s.duration_ = duration;
  s.name_ = "eight";
  // Peak path speed is reached somewhere along the Lissajous loop; sample one
  // full period densely to enforce the cap.
  const double wx = 2.0 * kPi / period;
  const double wy = 4.0 * kPi / period;
  double vmax = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    const double t = period * i / 4000.0;
    const double vx = amplitude_x * wx * std::cos(wx * t);
    const double vy = amplitude_y * wy * std::cos(wy * t);
    vmax = std::max(vmax, std::hypot(vx, vy));
  }
  check_speed(vmax);
  return s;
}

Scenario Scenario::square(double side, double speed, double duration) {
  check_positive(side, "side");
  check_positive(speed, "speed");
  check_positive(duration, "duration");
  check_speed(speed);
  Scenario s;
  s.kind_ = ScenarioKind::kSquare;
  s.side_ = side;
  s.speed_ = speed;
  s.duration_ = duration;
  s.name_ = "square";
  return s;
}

Scenario Scenario::line(double speed, double duration) {
  check_positive(speed, "speed");
  check_positive(duration, "duration");
  check_speed(speed);
  Scenario s;
  s.kind_ = ScenarioKind::kLine;
  s.speed_ = speed;
  s.duration_ = duration;
  s.name_ = "line";
  return s;
}

Scenario Scenario::random_waypoints(std::uint64_t seed, double half_extent, double speed_lo,
                                    double speed_hi, double duration) {
  check_positive(half_extent, "bounds half extent");
  check_positive(speed_lo, "speed range low");
  check_positive(speed_hi, "speed range high");
  check_positive(duration, "duration");
  if (speed_lo > speed_hi) {
    throw Error("Scenario: speed range is inverted");
  }
  check_speed(speed_hi);

  Scenario s;
  s.kind_ = ScenarioKind::kRandomWaypoints;
  s.duration_ = duration;
  s.name_ = "random";

  // Heading walk: straight segments with bounded turns, occasional pauses.
  // Turns are capped well below a U-turn so the leader never doubles back
  // through the follower trailing behind it.
  RngStream rng = RngStream::derive(seed, "leader-waypoints");
  Vec2 pos{0.0, 0.0};
  double heading = 0.0;
  double t = 0.0;
  s.knot_times_.push_back(0.0);
  s.knot_points_.push_back(pos);
  while (t < duration) {
    if (rng.bernoulli(0.25)) {
      const double pause = rng.uniform(1.0, 3.0);
      t += pause;
      s.knot_times_.push_back(t);
      s.knot_points_.push_back(pos);
      continue;
    }
    heading = normalize_angle(heading + rng.uniform(-1.4, 1.4));
    const double length = rng.uniform(2.0, 5.0);
    Vec2 next{pos.x + length * std::cos(heading), pos.y + length * std::sin(heading)};
    if (std::abs(next.x) > half_extent || std::abs(next.y) > half_extent) {
      // Re-aim toward the center with a small random slew and try again.
      heading = normalize_angle(std::atan2(-pos.y, -pos.x) + rng.uniform(-0.4, 0.4));
      next = {pos.x + length * std::cos(heading), pos.y + length * std::sin(heading)};
    }
    const double speed = rng.uniform(speed_lo, speed_hi);
    t += length / speed;
    pos = next;
    s.knot_times_.push_back(t);
    s.knot_points_.push_back(pos);
  }
  return s;
}

Scenario Scenario::preset(const std::string& name, std::uint64_t seed, double duration) {
  if (name == "eight") {
    return figure_eight(3.0, 1.5, 40.0, duration > 0.0 ? duration : 80.0);
  }
  if (name == "square") {
    return square(4.0, 0.5, duration > 0.0 ? duration : 64.0);
  }
  if (name == "line") {
    return line(0.4, duration > 0.0 ? duration : 60.0);
  }
  if (name == "random") {
    return random_waypoints(seed, 8.0, 0.3, 0.9, duration > 0.0 ? duration : 110.0);
  }
  throw Error("Scenario: unknown preset '" + name + "' (expected eight|square|line|random)");
}

Vec2 leader_position(const Scenario& scenario, double t) {
  if (!(t >= 0.0) || t > scenario.duration_ + 1e-12) {
    throw Error("leader_position: t outside [0, duration]");
  }
  switch (scenario.kind_) {
    case ScenarioKind::kFigureEight: {
      const double u = 2.0 * kPi * t / scenario.period_;
      return {scenario.amplitude_x_ * std::sin(u), scenario.amplitude_y_ * std::sin(2.0 * u)};
    }
    case ScenarioKind::kLine:
      return {scenario.speed_ * t, 0.0};
    case ScenarioKind::kSquare: {
      const double side_time = scenario.side_ / scenario.speed_;
      const double lap = std::fmod(t, 4.0 * side_time);
      const int edge = std::min(3, static_cast<int>(lap / side_time));
      const double d = scenario.speed_ * (lap - edge * side_time);
      switch (edge) {
        case 0: return {d, 0.0};
        case 1: return {scenario.side_, d};
        case 2: return {scenario.side_ - d, scenario.side_};
        default: return {0.0, scenario.side_ - d};
      }
    }
    case ScenarioKind::kRandomWaypoints: {
      const auto& times = scenario.knot_times_;
      const auto& points = scenario.knot_points_;
      if (t >= times.back()) return points.back();
      const auto it = std::upper_bound(times.begin(), times.end(), t);
      const std::size_t hi = static_cast<std::size_t>(it - times.begin());
      const std::size_t lo = hi - 1;
      const double span = times[hi] - times[lo];
      const double w = span > 0.0 ? (t - times[lo]) / span : 0.0;
      return {points[lo].x + w * (points[hi].x - points[lo].x),
              points[lo].y + w * (points[hi].y - points[lo].y)};
    }
  }
  throw Error("leader_position: unreachable");
}

}  // namespace followme
