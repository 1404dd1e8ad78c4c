#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace wmavmd {

enum class Mode { Traction, Coasting, Braking, Stopped };

/// Sign applied to velocities before the VMD index is taken: +1 for the
/// slip family (traction, coasting), -1 for the slide family (braking).
enum class ModeClass : int { Slip = 1, Slide = -1 };

std::string_view to_string(Mode mode) noexcept;
std::optional<Mode> parse_mode(std::string_view text) noexcept;

std::string_view to_string(ModeClass mc) noexcept;
std::optional<ModeClass> parse_mode_class(std::string_view text) noexcept;

/// Stopped frames belong to no class and are never monitored.
std::optional<ModeClass> mode_class(Mode mode) noexcept;

inline int sign_of(ModeClass mc) noexcept { return static_cast<int>(mc); }

/// Velocities within this band of zero count as standing still.
inline constexpr double kStoppedTolerance = 0.1;

struct VelocityFrame {
  std::size_t timestamp = 0;
  std::vector<double> velocities;  // km/h, one per channel
  Mode mode = Mode::Traction;
};

/// A validated sequence of frames with a common channel count.
struct Trace {
  double sample_interval_s = 0.1;
  std::vector<VelocityFrame> frames;

  std::size_t channels() const noexcept {
    return frames.empty() ? 0 : frames.front().velocities.size();
  }
  std::size_t size() const noexcept { return frames.size(); }
  bool empty() const noexcept { return frames.empty(); }
};

/// Checks the frame invariants (p >= 2 and constant, finite velocities,
/// Stopped frames at zero speed, monotone timestamps). Throws
/// Error(Ingestion) naming the offending row.
void validate_trace(const Trace& trace);

/// Half-open run [begin, end) of consecutive frames sharing one mode class.
struct Segment {
  ModeClass mode_class;
  std::size_t begin;
  std::size_t end;

  std::size_t size() const noexcept { return end - begin; }
};

/// Splits the trace at every mode-class change; Stopped runs are dropped.
std::vector<Segment> split_segments(const Trace& trace);

}  // namespace wmavmd
