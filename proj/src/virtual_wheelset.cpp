#include "wmavmd/virtual_wheelset.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "wmavmd/error.hpp"

namespace wmavmd {

namespace {

double median(std::vector<double> v) {
  const auto n = v.size();
  const auto mid = v.begin() + static_cast<long>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (n % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace

Trace virtual_wheelset(const Trace& trace, const VirtualChannelPolicy& policy,
                       std::span<const double> reference) {
  Trace out = trace;
  switch (policy.kind) {
    case VirtualChannelPolicy::Kind::None:
      throw Error(ErrorKind::InputDomain, "no virtual channel policy selected");

    case VirtualChannelPolicy::Kind::Reference:
      if (reference.size() != trace.size()) {
        throw Error(ErrorKind::InputDomain, "reference series has " +
                                                std::to_string(reference.size()) +
                                                " samples, trace has " +
                                                std::to_string(trace.size()));
      }
      for (std::size_t k = 0; k < out.frames.size(); ++k) {
        auto& f = out.frames[k];
        if (!std::isfinite(reference[k])) {
          throw Error(ErrorKind::InputDomain, "non-finite reference velocity");
        }
        f.velocities.push_back(f.mode == Mode::Stopped ? 0.0 : reference[k]);
      }
      return out;

    case VirtualChannelPolicy::Kind::Inertial: {
      const double step = policy.max_accel_kmh_per_s * trace.sample_interval_s;
      std::optional<double> state;
      for (auto& f : out.frames) {
        if (f.mode == Mode::Stopped) {
          state.reset();
          f.velocities.push_back(0.0);
          continue;
        }
        const double consensus = median(f.velocities);
        if (!state) {
          state = consensus;
        } else {
          const double change = consensus - *state;
          if (std::abs(change) <= step) {
            state = consensus;
          } else {
            state = *state + (change > 0 ? step : -step);
          }
        }
        f.velocities.push_back(*state);
      }
      return out;
    }
  }
  return out;
}

}  // namespace wmavmd
