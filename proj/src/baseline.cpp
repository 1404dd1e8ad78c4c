#include "wmavmd/baseline.hpp"

#include <algorithm>

#include "wmavmd/error.hpp"

namespace wmavmd {

std::vector<BaselineAlarm> baseline_criteria(const Trace& trace,
                                             const BaselineThresholds& th,
                                             std::size_t channels) {
  if (!(th.traction_velocity > 0 && th.traction_accel > 0 && th.braking_velocity > 0 &&
        th.braking_accel > 0)) {
    throw Error(ErrorKind::Config, "baseline thresholds must be positive");
  }
  std::vector<BaselineAlarm> out;
  const std::size_t p = channels == 0 ? trace.channels() : std::min(channels, trace.channels());
  const double dt = trace.sample_interval_s;
  for (std::size_t k = 0; k < trace.frames.size(); ++k) {
    const auto& f = trace.frames[k];
    const auto mc = mode_class(f.mode);
    if (!mc) continue;
    const auto first = f.velocities.begin();
    const auto last = first + static_cast<long>(p);
    const double lo = *std::min_element(first, last);
    const double hi = *std::max_element(first, last);
    const bool has_prev = k > 0 && trace.frames[k - 1].mode != Mode::Stopped;
    for (std::size_t i = 0; i < p; ++i) {
      const double v = f.velocities[i];
      const double accel = has_prev ? (v - trace.frames[k - 1].velocities[i]) / dt : 0.0;
      if (*mc == ModeClass::Slip) {
        if (v - lo > th.traction_velocity) {
          out.push_back({f.timestamp, i, AlarmKind::Slip, BaselineRule::VelocityDifference, v - lo});
        } else if (has_prev && accel > th.traction_accel) {
          out.push_back({f.timestamp, i, AlarmKind::Slip, BaselineRule::Acceleration, accel});
        }
      } else {
        if (hi - v > th.braking_velocity) {
          out.push_back({f.timestamp, i, AlarmKind::Slide, BaselineRule::VelocityDifference, hi - v});
        } else if (has_prev && accel < -th.braking_accel) {
          out.push_back({f.timestamp, i, AlarmKind::Slide, BaselineRule::Acceleration, accel});
        }
      }
    }
  }
  return out;
}

}  // namespace wmavmd
