#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wmavmd/frame.hpp"
#include "wmavmd/owv.hpp"
#include "wmavmd/stationary_stats.hpp"

namespace wmavmd {

/// Weighted moving average of a series at its newest position:
/// sum_j weights[j] * newest_back(j), accumulated in index order.
/// Shared by training and online detection: replaying the training data
/// reproduces the control limit bit for bit.
template <class Accessor>
double wma_at(std::span<const double> weights, Accessor&& newest_back) {
  double acc = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) acc += weights[j] * newest_back(j);
  return acc;
}

/// How the control limit is derived from training indices.
struct ClPolicy {
  enum class Kind { Max, Quantile };
  Kind kind = Kind::Max;
  double quantile = 1.0;

  static ClPolicy parse(const std::string& text);  // "max" or "quantile:q"
  std::string to_string() const;
  bool operator==(const ClPolicy&) const = default;
};

/// Extra reference channel appended after the real wheelsets.
struct VirtualChannelPolicy {
  enum class Kind { None, Reference, Inertial };
  Kind kind = Kind::None;
  double max_accel_kmh_per_s = 5.0;  // inertial estimate only

  bool enabled() const noexcept { return kind != Kind::None; }
  static VirtualChannelPolicy parse(const std::string& text);  // none | reference | inertial[:a]
  std::string to_string() const;
  bool operator==(const VirtualChannelPolicy&) const = default;
};

/// Trained parameters for one (channel, mode class, window).
struct ModelEntry {
  std::size_t channel = 0;
  ModeClass mode_class = ModeClass::Slip;
  WeightVector weights;
  double delta = 0.0;  // limit on the index of M*v
  double phi = 0.0;    // limit on the index of -M*v, same weights
  AutocovSequence acov;
  bool owv_positive = true;
  bool degenerate = false;
  bool ill_conditioned = false;

  std::size_t window() const noexcept { return weights.window(); }
  double isolability_threshold() const noexcept { return delta + phi; }
  bool operator==(const ModelEntry&) const = default;
};

struct DetectorModel {
  static constexpr int kFormatVersion = 1;

  int format_version = kFormatVersion;
  std::size_t channels = 0;  // real wheelsets; the virtual one is extra
  double sample_interval_s = 0.1;
  ClPolicy cl_policy;
  VirtualChannelPolicy virtual_channel;
  std::map<ModeClass, std::size_t> training_samples;
  std::vector<ModelEntry> entries;

  std::size_t input_channels() const noexcept {
    return channels + (virtual_channel.enabled() ? 1 : 0);
  }
  const ModelEntry* find(std::size_t channel, ModeClass mc, std::size_t window) const noexcept;
  std::vector<std::size_t> windows() const;
  bool operator==(const DetectorModel&) const = default;
};

struct TrainOptions {
  std::vector<std::size_t> windows{1};
  std::size_t max_lag = 10;  // raised to W_max - 1 if smaller
  ClPolicy cl_policy;
  VirtualChannelPolicy virtual_channel;  // recorded only; the trace must already carry it
};

/// Minimum frames of a mode class needed to train window W.
std::size_t required_training_frames(std::size_t window) noexcept;

/// Offline training of one entry. `trace` carries every input channel
/// (including a virtual one if present). Throws Error(InsufficientData)
/// when the mode class has too few frames and Error(DegenerateTrace) when
/// every frame is Stopped.
ModelEntry train(const Trace& trace, std::size_t window, std::size_t channel, ModeClass mc,
                 const ClPolicy& policy = {}, std::size_t max_lag = 10);

/// Trains every real channel for every mode class with enough frames and
/// every requested window. Mode classes with too few frames are skipped
/// and listed in `skipped`.
DetectorModel train_model(const Trace& trace, const TrainOptions& options,
                          std::vector<std::string>* skipped = nullptr);

enum class AlarmKind { Slip, Slide };
std::string_view to_string(AlarmKind kind) noexcept;

struct AlarmEvent {
  std::size_t timestamp = 0;
  std::size_t channel = 0;
  AlarmKind kind = AlarmKind::Slip;
  double index_value = 0.0;
  double control_limit = 0.0;
  Mode mode = Mode::Traction;

  bool operator==(const AlarmEvent&) const = default;
};

enum class DecisionStatus { Evaluated, Warmup, Excluded, NoModel };
std::string_view to_string(DecisionStatus status) noexcept;

struct Decision {
  DecisionStatus status = DecisionStatus::Excluded;
  double index_value = 0.0;
  double control_limit = 0.0;
  std::optional<AlarmEvent> alarm;
};

/// One online evaluation for `channel` given the most recent frames of a
/// single mode-class run (oldest first, newest last). Fewer than W frames
/// yields a Warmup decision.
Decision detect_step(const ModelEntry& entry, std::span<const VelocityFrame> recent,
                     std::size_t channel);

/// Window chosen for every (channel, mode class).
class WindowSelection {
 public:
  WindowSelection() = default;
  static WindowSelection uniform(const DetectorModel& model, std::size_t window);

  void set(std::size_t channel, ModeClass mc, std::size_t window);
  std::optional<std::size_t> get(std::size_t channel, ModeClass mc) const;
  std::size_t max_window() const noexcept;

 private:
  std::map<std::pair<std::size_t, ModeClass>, std::size_t> windows_;
};

struct StepResult {
  std::size_t timestamp = 0;
  Mode mode = Mode::Traction;
  std::vector<Decision> decisions;  // one per real channel
};

/// Streaming detector: one instance per stream, frames pushed in order.
/// Buffers reset whenever the mode class changes.
class OnlineDetector {
 public:
  OnlineDetector(const DetectorModel& model, WindowSelection selection);

  StepResult push(const VelocityFrame& frame);

 private:
  const DetectorModel* model_;
  WindowSelection selection_;
  std::size_t capacity_;
  std::optional<ModeClass> current_;
  std::vector<std::vector<double>> history_;  // newest last, per real channel
  std::size_t filled_ = 0;
  std::vector<double> scratch_;
};

struct DetectionResult {
  std::vector<StepResult> steps;
  std::vector<AlarmEvent> alarms;
  std::size_t evaluated_windows = 0;    // frames with at least one evaluated channel
  std::size_t alarmed_windows = 0;      // of those, frames with at least one alarm

  double false_alarm_rate() const noexcept {
    return evaluated_windows == 0 ? 0.0
                                  : static_cast<double>(alarmed_windows) /
                                        static_cast<double>(evaluated_windows);
  }
};

DetectionResult detect_trace(const DetectorModel& model, const Trace& trace,
                             const WindowSelection& selection);

}  // namespace wmavmd
