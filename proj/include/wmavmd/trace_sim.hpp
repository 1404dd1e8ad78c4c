#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "wmavmd/detector.hpp"
#include "wmavmd/frame.hpp"

namespace wmavmd {

struct ProfileSegment {
  Mode mode = Mode::Traction;
  double duration_s = 0.0;
  double target_speed_kmh = 0.0;  // speed reached at the end of the segment
};

/// Piecewise-linear vehicle speed: each segment ramps from the previous
/// segment's target (or `initial_speed_kmh`) to its own target.
struct ProfileSpec {
  std::vector<ProfileSegment> segments;
  double sample_interval_s = 0.1;
  double initial_speed_kmh = 0.0;

  void validate() const;
  std::size_t total_samples() const;
};

/// Stationary per-channel perturbation: first-order autoregressive in
/// time with lag-1 correlation `rho`, equicorrelated across channels with
/// correlation `cross`, marginal standard deviation sigma[i] (km/h).
struct NoiseSpec {
  std::vector<double> sigma;
  double rho = 0.0;
  double cross = 0.0;
  std::uint64_t seed = 1;

  std::size_t channels() const noexcept { return sigma.size(); }
  void validate() const;
};

struct SimulatedTrace {
  Trace trace;
  std::vector<double> base_speed;  // noise-free vehicle speed per frame
};

/// Fault-free trace; deterministic in the seed. Stopped frames are exact zeros.
SimulatedTrace generate(const ProfileSpec& profile, const NoiseSpec& noise);

struct InjectionEvent {
  std::vector<std::size_t> channels;  // 0-based
  AlarmKind kind = AlarmKind::Slip;
  std::size_t start = 0;              // frame index of the first active sample
  std::size_t duration = 1;           // active samples per occurrence
  std::vector<double> magnitude{0.0}; // one value, or one per active sample (km/h, >= 0)
  std::size_t gap = 0;                // inactive samples between repeats
  std::size_t repeats = 1;

  double magnitude_at(std::size_t offset) const;
};

struct InjectionSpec {
  std::vector<InjectionEvent> events;
};

/// One contiguous active interval of one event, [begin, end).
struct FaultOccurrence {
  std::size_t event = 0;
  std::vector<std::size_t> channels;
  AlarmKind kind = AlarmKind::Slip;
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct FaultLabel {
  std::size_t frame = 0;
  std::size_t channel = 0;
  double offset = 0.0;  // signed: + for slip, - for slide
};

struct InjectionResult {
  Trace trace;
  std::vector<std::vector<double>> offsets;  // per frame, per channel
  std::vector<FaultLabel> labels;
  std::vector<FaultOccurrence> occurrences;
  std::vector<char> clamped;  // frames where a velocity was clamped at 0
  std::vector<std::string> warnings;
};

/// Adds the fault vectors to a fault-free trace: slip raises the listed
/// channels by f, slide lowers them. Throws Error(Spec) when an occurrence
/// leaves the trace or its legal mode (slip: traction/coasting, slide:
/// braking). Velocities pushed below zero are clamped and reported.
InjectionResult inject(const Trace& trace, const InjectionSpec& spec);

/// Per-frame offsets for `channels` input channels; extra channels (a
/// virtual wheelset) stay zero.
std::vector<std::vector<double>> widen_offsets(const std::vector<std::vector<double>>& offsets,
                                               std::size_t channels);

}  // namespace wmavmd
