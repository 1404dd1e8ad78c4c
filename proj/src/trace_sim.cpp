#include "wmavmd/trace_sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "wmavmd/error.hpp"

namespace wmavmd {

namespace {

std::size_t samples_for(double duration_s, double dt) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(duration_s / dt)));
}

}  // namespace

void ProfileSpec::validate() const {
  if (!(sample_interval_s > 0.0) || !std::isfinite(sample_interval_s)) {
    throw Error(ErrorKind::Spec, "sample interval must be positive");
  }
  if (segments.empty()) throw Error(ErrorKind::Spec, "profile has no segments");
  if (!(initial_speed_kmh >= 0.0) || !std::isfinite(initial_speed_kmh)) {
    throw Error(ErrorKind::Spec, "initial speed must be a finite value >= 0");
  }
  double prev = initial_speed_kmh;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const auto& seg = segments[s];
    const auto where = " in segment " + std::to_string(s + 1);
    if (!(seg.duration_s > 0.0) || !std::isfinite(seg.duration_s)) {
      throw Error(ErrorKind::Spec, "duration must be positive" + where);
    }
    if (!(seg.target_speed_kmh >= 0.0) || !std::isfinite(seg.target_speed_kmh)) {
      throw Error(ErrorKind::Spec, "target speed must be a finite value >= 0" + where);
    }
    if (seg.mode == Mode::Stopped && (seg.target_speed_kmh != 0.0 || prev != 0.0)) {
      throw Error(ErrorKind::Spec, "stopped segment must start and end at 0 km/h" + where);
    }
    prev = seg.target_speed_kmh;
  }
}

std::size_t ProfileSpec::total_samples() const {
  std::size_t n = 0;
  for (const auto& seg : segments) n += samples_for(seg.duration_s, sample_interval_s);
  return n;
}

void NoiseSpec::validate() const {
  if (sigma.size() < 2) throw Error(ErrorKind::Spec, "at least two channels are required");
  for (double s : sigma) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw Error(ErrorKind::Spec, "sigma must be >= 0");
  }
  if (!(rho >= 0.0 && rho < 1.0)) throw Error(ErrorKind::Spec, "rho must lie in [0, 1)");
  if (!(cross >= 0.0 && cross < 1.0)) throw Error(ErrorKind::Spec, "cross correlation must lie in [0, 1)");
}

SimulatedTrace generate(const ProfileSpec& profile, const NoiseSpec& noise) {
  profile.validate();
  noise.validate();
  const std::size_t p = noise.channels();
  const double dt = profile.sample_interval_s;

  SimulatedTrace out;
  out.trace.sample_interval_s = dt;
  out.trace.frames.reserve(profile.total_samples());
  out.base_speed.reserve(profile.total_samples());

  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double common_w = std::sqrt(noise.cross);
  const double own_w = std::sqrt(1.0 - noise.cross);
  const double innov_w = std::sqrt(1.0 - noise.rho * noise.rho);
  std::vector<double> state(p);
  auto draw = [&](std::vector<double>& shock) {
    const double common = normal(rng);
    for (std::size_t i = 0; i < p; ++i) shock[i] = common_w * common + own_w * normal(rng);
  };
  std::vector<double> shock(p);
  draw(shock);
  for (std::size_t i = 0; i < p; ++i) state[i] = shock[i];  // stationary start

  double start = profile.initial_speed_kmh;
  std::size_t k = 0;
  for (const auto& seg : profile.segments) {
    const std::size_t n = samples_for(seg.duration_s, dt);
    for (std::size_t s = 0; s < n; ++s, ++k) {
      if (k > 0) {
        draw(shock);
        for (std::size_t i = 0; i < p; ++i) state[i] = noise.rho * state[i] + innov_w * shock[i];
      }
      const double frac = static_cast<double>(s + 1) / static_cast<double>(n);
      const double base = start + (seg.target_speed_kmh - start) * frac;
      VelocityFrame f;
      f.timestamp = k;
      f.mode = seg.mode;
      f.velocities.resize(p);
      for (std::size_t i = 0; i < p; ++i) {
        f.velocities[i] = seg.mode == Mode::Stopped ? 0.0 : base + noise.sigma[i] * state[i];
      }
      out.base_speed.push_back(seg.mode == Mode::Stopped ? 0.0 : base);
      out.trace.frames.push_back(std::move(f));
    }
    start = seg.target_speed_kmh;
  }
  return out;
}

double InjectionEvent::magnitude_at(std::size_t offset) const {
  if (magnitude.size() == 1) return magnitude.front();
  return magnitude.at(offset);
}

InjectionResult inject(const Trace& trace, const InjectionSpec& spec) {
  const std::size_t n = trace.size();
  const std::size_t p = trace.channels();
  InjectionResult out;
  out.trace = trace;
  out.offsets.assign(n, std::vector<double>(p, 0.0));
  out.clamped.assign(n, 0);

  for (std::size_t e = 0; e < spec.events.size(); ++e) {
    const auto& ev = spec.events[e];
    const auto where = " in event " + std::to_string(e + 1);
    if (ev.channels.empty()) throw Error(ErrorKind::Spec, "no channels" + where);
    for (auto c : ev.channels) {
      if (c >= p) throw Error(ErrorKind::Spec, "channel out of range" + where);
    }
    if (ev.duration < 1) throw Error(ErrorKind::Spec, "duration must be at least 1 sample" + where);
    if (ev.repeats < 1) throw Error(ErrorKind::Spec, "repeats must be at least 1" + where);
    if (ev.magnitude.size() != 1 && ev.magnitude.size() != ev.duration) {
      throw Error(ErrorKind::Spec, "magnitude profile needs 1 or duration values" + where);
    }
    for (double m : ev.magnitude) {
      if (!(m >= 0.0) || !std::isfinite(m)) {
        throw Error(ErrorKind::Spec, "magnitudes must be finite and >= 0" + where);
      }
    }
    const ModeClass legal = ev.kind == AlarmKind::Slip ? ModeClass::Slip : ModeClass::Slide;
    const double sign = ev.kind == AlarmKind::Slip ? 1.0 : -1.0;
    for (std::size_t r = 0; r < ev.repeats; ++r) {
      const std::size_t begin = ev.start + r * (ev.duration + ev.gap);
      const std::size_t end = begin + ev.duration;
      if (end > n) throw Error(ErrorKind::Spec, "occurrence runs past the trace end" + where);
      for (std::size_t k = begin; k < end; ++k) {
        if (mode_class(trace.frames[k].mode) != legal) {
          throw Error(ErrorKind::Spec, std::string(to_string(ev.kind)) + " outside " +
                                           (legal == ModeClass::Slip ? "traction/coasting"
                                                                     : "braking") +
                                           " at frame " + std::to_string(k) + where);
        }
      }
      out.occurrences.push_back({e, ev.channels, ev.kind, begin, end});
      for (std::size_t k = begin; k < end; ++k) {
        const double f = ev.magnitude_at(k - begin);
        for (auto c : ev.channels) out.offsets[k][c] += sign * f;
      }
    }
  }

  for (std::size_t k = 0; k < n; ++k) {
    auto& v = out.trace.frames[k].velocities;
    for (std::size_t c = 0; c < p; ++c) {
      const double off = out.offsets[k][c];
      if (off == 0.0) continue;
      out.labels.push_back({k, c, off});
      v[c] += off;
      if (v[c] < 0.0) {
        v[c] = 0.0;
        out.clamped[k] = 1;
        out.warnings.push_back("velocity clamped at 0 on channel " + std::to_string(c + 1) +
                               " at frame " + std::to_string(k));
      }
    }
  }
  return out;
}

std::vector<std::vector<double>> widen_offsets(const std::vector<std::vector<double>>& offsets,
                                               std::size_t channels) {
  auto out = offsets;
  for (auto& o : out) o.resize(channels, 0.0);
  return out;
}

}  // namespace wmavmd
