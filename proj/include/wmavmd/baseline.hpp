#pragma once

#include <cstddef>
#include <vector>

#include "wmavmd/detector.hpp"
#include "wmavmd/frame.hpp"

namespace wmavmd {

/// Fixed thresholds of the velocity-difference and acceleration rules
/// currently used by anti-slip/slide systems. Velocities in km/h,
/// accelerations in km/h per second.
struct BaselineThresholds {
  double traction_velocity = 3.0;  // J^p_e
  double traction_accel = 5.0;     // J^p_a
  double braking_velocity = 3.0;   // J^b_e
  double braking_accel = 5.0;      // J^b_a
};

enum class BaselineRule { VelocityDifference, Acceleration };

struct BaselineAlarm {
  std::size_t timestamp = 0;
  std::size_t channel = 0;
  AlarmKind kind = AlarmKind::Slip;
  BaselineRule rule = BaselineRule::VelocityDifference;
  double value = 0.0;
};

/// Traction/coasting: slip if v_i - min(v) > J^p_e or a_i > J^p_a.
/// Braking: slide if max(v) - v_i > J^b_e or a_i < -J^b_a.
/// a_i is the backward difference over the sample interval; it is not
/// available on the first frame or right after a Stopped frame. Only the
/// first `channels` columns are examined (a virtual column is ignored).
std::vector<BaselineAlarm> baseline_criteria(const Trace& trace,
                                             const BaselineThresholds& thresholds,
                                             std::size_t channels = 0);

}  // namespace wmavmd
