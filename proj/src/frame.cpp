#include "wmavmd/frame.hpp"

#include <cmath>
#include <string>

#include "wmavmd/error.hpp"

namespace wmavmd {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InputDomain: return "input-domain error";
    case ErrorKind::Index: return "index error";
    case ErrorKind::InsufficientData: return "insufficient data";
    case ErrorKind::DegenerateTrace: return "degenerate trace";
    case ErrorKind::Spec: return "spec error";
    case ErrorKind::Ingestion: return "ingestion error";
    case ErrorKind::Config: return "config error";
    case ErrorKind::Compatibility: return "compatibility error";
    case ErrorKind::PropertyViolation: return "property violation";
    case ErrorKind::Io: return "i/o error";
  }
  return "error";
}

std::string_view to_string(Mode mode) noexcept {
  switch (mode) {
    case Mode::Traction: return "traction";
    case Mode::Coasting: return "coasting";
    case Mode::Braking: return "braking";
    case Mode::Stopped: return "stopped";
  }
  return "unknown";
}

std::optional<Mode> parse_mode(std::string_view text) noexcept {
  if (text == "traction") return Mode::Traction;
  if (text == "coasting") return Mode::Coasting;
  if (text == "braking") return Mode::Braking;
  if (text == "stopped") return Mode::Stopped;
  return std::nullopt;
}

std::string_view to_string(ModeClass mc) noexcept {
  return mc == ModeClass::Slip ? "slip" : "slide";
}

std::optional<ModeClass> parse_mode_class(std::string_view text) noexcept {
  if (text == "slip") return ModeClass::Slip;
  if (text == "slide") return ModeClass::Slide;
  return std::nullopt;
}

std::optional<ModeClass> mode_class(Mode mode) noexcept {
  switch (mode) {
    case Mode::Traction:
    case Mode::Coasting: return ModeClass::Slip;
    case Mode::Braking: return ModeClass::Slide;
    case Mode::Stopped: return std::nullopt;
  }
  return std::nullopt;
}

void validate_trace(const Trace& trace) {
  if (!(trace.sample_interval_s > 0.0) || !std::isfinite(trace.sample_interval_s)) {
    throw Error(ErrorKind::Ingestion, "sample interval must be positive and finite");
  }
  if (trace.empty()) return;
  const std::size_t p = trace.channels();
  if (p < 2) {
    throw Error(ErrorKind::Ingestion, "at least two velocity channels are required");
  }
  for (std::size_t r = 0; r < trace.frames.size(); ++r) {
    const auto& f = trace.frames[r];
    const auto where = " at row " + std::to_string(r + 1);
    if (f.velocities.size() != p) {
      throw Error(ErrorKind::Ingestion, "channel count changed" + where);
    }
    if (r > 0 && f.timestamp <= trace.frames[r - 1].timestamp) {
      throw Error(ErrorKind::Ingestion, "non-monotone timestamp" + where);
    }
    for (double v : f.velocities) {
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::Ingestion, "non-finite velocity" + where);
      }
      if (f.mode == Mode::Stopped && std::abs(v) > kStoppedTolerance) {
        throw Error(ErrorKind::Ingestion, "stopped frame with nonzero velocity" + where);
      }
    }
  }
}

std::vector<Segment> split_segments(const Trace& trace) {
  std::vector<Segment> out;
  std::size_t k = 0;
  const std::size_t n = trace.frames.size();
  while (k < n) {
    const auto mc = mode_class(trace.frames[k].mode);
    std::size_t end = k + 1;
    while (end < n && mode_class(trace.frames[end].mode) == mc) ++end;
    if (mc) out.push_back({*mc, k, end});
    k = end;
  }
  return out;
}

}  // namespace wmavmd
