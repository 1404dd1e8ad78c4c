#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "wmavmd/detector.hpp"

namespace wmavmd {

struct IsolabilityRow {
  std::size_t channel = 0;
  ModeClass mode_class = ModeClass::Slip;
  std::size_t window = 1;
  double delta = 0.0;
  double phi = 0.0;
  double threshold = 0.0;  // delta + phi, km/h
  bool owv_positive = true;
};

/// Sufficient-isolability thresholds per (channel, mode class, window),
/// sorted by channel, mode class, then window.
struct IsolabilityTable {
  std::vector<IsolabilityRow> rows;

  std::vector<const IsolabilityRow*> column(std::size_t channel, ModeClass mc) const;
  /// True when the thresholds of every (channel, mode class) never rise with W.
  bool non_increasing() const;
  bool any_non_positive_owv() const;
};

IsolabilityTable isolability_table(const DetectorModel& model);

/// Outcome of choosing the smallest window whose threshold lies strictly
/// below the tolerable fault magnitude.
struct WindowChoice {
  std::optional<std::size_t> window;
  std::size_t closest_window = 1;  // smallest threshold - f_check when no solution
  double closest_gap = 0.0;        // threshold - f_check at closest_window
};

WindowChoice select_window(const DetectorModel& model, std::size_t channel, ModeClass mc,
                           double f_check);

/// Applies select_window to every (channel, mode class) in the model.
/// Pairs without a solution fall back to their closest window.
WindowSelection select_windows(const DetectorModel& model, std::span<const double> f_check,
                               std::map<std::pair<std::size_t, ModeClass>, WindowChoice>* report =
                                   nullptr);

/// Condition outcome for one channel at one window position.
struct ConditionPoint {
  std::size_t frame = 0;  // index into the trace of the newest sample
  std::size_t channel = 0;
  ModeClass mode_class = ModeClass::Slip;
  std::size_t window = 1;
  double fault_index = 0.0;  // weighted VMD of the fault vectors alone
  double threshold = 0.0;
  bool necessary_isolability = false;   // fault_index != 0
  bool necessary_detectability = false; // some fault vector in the window is not constant
  bool sufficient_isolability = false;  // fault_index > delta + phi
  bool conditional = false;             // weights not all positive: conditions not guaranteed

  /// Neither ruled out by a necessary condition nor guaranteed.
  bool indeterminate() const noexcept {
    return necessary_isolability && necessary_detectability && !sufficient_isolability;
  }
};

/// Evaluates the necessary and sufficient conditions over every complete
/// window that contains a nonzero fault vector. `offsets[k]` is the
/// additive fault vector of frame k in velocity units over all input
/// channels (the virtual channel, if any, included).
std::vector<ConditionPoint> check_conditions(const Trace& trace,
                                             std::span<const std::vector<double>> offsets,
                                             const DetectorModel& model,
                                             const WindowSelection& selection);

}  // namespace wmavmd
