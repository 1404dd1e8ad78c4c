#include "wmavmd/detector.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "wmavmd/error.hpp"
#include "wmavmd/vmd.hpp"

namespace wmavmd {

namespace {

/// VMD values of every frame in every run of one mode class, with the
/// class sign (`sign`) applied.
struct ClassSeries {
  std::vector<Segment> segments;
  std::size_t frames = 0;
  // per segment, per channel, per frame
  std::vector<std::vector<std::vector<double>>> values;
};

ClassSeries collect(const Trace& trace, ModeClass mc, int sign) {
  ClassSeries out;
  const std::size_t p = trace.channels();
  std::vector<double> buf(p);
  for (const auto& seg : split_segments(trace)) {
    if (seg.mode_class != mc) continue;
    out.segments.push_back(seg);
    std::vector<std::vector<double>> per_channel(p, std::vector<double>(seg.size()));
    for (std::size_t k = seg.begin; k < seg.end; ++k) {
      vmd_all(trace.frames[k].velocities, sign, buf);
      for (std::size_t i = 0; i < p; ++i) per_channel[i][k - seg.begin] = buf[i];
    }
    out.frames += seg.size();
    out.values.push_back(std::move(per_channel));
  }
  return out;
}

double control_limit(const ClassSeries& series, std::size_t channel, const WeightVector& w,
                     const ClPolicy& policy) {
  const std::span<const double> a(w.weights);
  const std::size_t W = w.window();
  std::vector<double> indices;
  double best = 0.0;
  bool any = false;
  for (const auto& seg : series.values) {
    const auto& s = seg[channel];
    for (std::size_t k = W - 1; k < s.size(); ++k) {
      const double idx = wma_at(a, [&](std::size_t j) { return s[k - j]; });
      if (policy.kind == ClPolicy::Kind::Quantile) indices.push_back(idx);
      if (!any || idx > best) best = idx;
      any = true;
    }
  }
  if (!any) throw Error(ErrorKind::InsufficientData, "no complete window inside any mode run");
  if (policy.kind == ClPolicy::Kind::Max) return best;
  const auto n = indices.size();
  auto rank = static_cast<std::size_t>(std::ceil(policy.quantile * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  std::nth_element(indices.begin(), indices.begin() + static_cast<long>(rank - 1), indices.end());
  return indices[rank - 1];
}

std::vector<double> concatenated(const ClassSeries& series, std::size_t channel) {
  std::vector<double> out;
  out.reserve(series.frames);
  for (const auto& seg : series.values) {
    out.insert(out.end(), seg[channel].begin(), seg[channel].end());
  }
  return out;
}

ModelEntry train_from(const ClassSeries& own, const ClassSeries& opposite, std::size_t window,
                      std::size_t channel, ModeClass mc, const ClPolicy& policy,
                      std::size_t max_lag) {
  if (own.frames < required_training_frames(window)) {
    throw Error(ErrorKind::InsufficientData,
                std::string(to_string(mc)) + " training needs " +
                    std::to_string(required_training_frames(window)) + " frames for W=" +
                    std::to_string(window) + ", have " + std::to_string(own.frames));
  }
  const auto series = concatenated(own, channel);
  const std::size_t lag = std::min(std::max(max_lag, window - 1), series.size() - 1);

  ModelEntry e;
  e.channel = channel;
  e.mode_class = mc;
  e.acov = estimate_autocov(series, lag);
  e.acov.channel = channel;
  auto sol = solve_owv(e.acov, window);
  e.weights = std::move(sol.weights);
  e.owv_positive = sol.diagnostics.owv_positive();
  e.degenerate = sol.diagnostics.degenerate;
  e.ill_conditioned = sol.diagnostics.ill_conditioned;
  e.delta = control_limit(own, channel, e.weights, policy);
  e.phi = control_limit(opposite, channel, e.weights, policy);
  return e;
}

void require_trainable(const Trace& trace, std::size_t channel) {
  if (trace.empty()) throw Error(ErrorKind::InsufficientData, "empty training trace");
  if (std::all_of(trace.frames.begin(), trace.frames.end(),
                  [](const auto& f) { return f.mode == Mode::Stopped; })) {
    throw Error(ErrorKind::DegenerateTrace, "every training frame is Stopped");
  }
  if (channel >= trace.channels()) throw Error(ErrorKind::Index, "channel out of range");
}

}  // namespace

ClPolicy ClPolicy::parse(const std::string& text) {
  if (text == "max") return {};
  const std::string prefix = "quantile:";
  if (text.rfind(prefix, 0) == 0) {
    try {
      std::size_t used = 0;
      const std::string rest = text.substr(prefix.size());
      const double q = std::stod(rest, &used);
      if (used == rest.size() && q > 0.0 && q <= 1.0) return {Kind::Quantile, q};
    } catch (const std::exception&) {
    }
  }
  throw Error(ErrorKind::Config, "CL policy must be 'max' or 'quantile:q' with 0<q<=1, got '" +
                                     text + "'");
}

std::string ClPolicy::to_string() const {
  if (kind == Kind::Max) return "max";
  char buf[64];
  std::snprintf(buf, sizeof buf, "quantile:%.17g", quantile);
  return buf;
}

VirtualChannelPolicy VirtualChannelPolicy::parse(const std::string& text) {
  if (text == "none" || text.empty()) return {};
  if (text == "reference") return {Kind::Reference, 5.0};
  if (text == "inertial") return {Kind::Inertial, 5.0};
  const std::string prefix = "inertial:";
  if (text.rfind(prefix, 0) == 0) {
    try {
      std::size_t used = 0;
      const std::string rest = text.substr(prefix.size());
      const double a = std::stod(rest, &used);
      if (used == rest.size() && a > 0.0 && std::isfinite(a)) return {Kind::Inertial, a};
    } catch (const std::exception&) {
    }
  }
  throw Error(ErrorKind::Config,
              "virtual channel policy must be none, reference or inertial[:a], got '" + text + "'");
}

std::string VirtualChannelPolicy::to_string() const {
  switch (kind) {
    case Kind::None: return "none";
    case Kind::Reference: return "reference";
    case Kind::Inertial: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "inertial:%.17g", max_accel_kmh_per_s);
      return buf;
    }
  }
  return "none";
}

const ModelEntry* DetectorModel::find(std::size_t channel, ModeClass mc,
                                      std::size_t window) const noexcept {
  for (const auto& e : entries) {
    if (e.channel == channel && e.mode_class == mc && e.window() == window) return &e;
  }
  return nullptr;
}

std::vector<std::size_t> DetectorModel::windows() const {
  std::set<std::size_t> ws;
  for (const auto& e : entries) ws.insert(e.window());
  return {ws.begin(), ws.end()};
}

std::size_t required_training_frames(std::size_t window) noexcept {
  return std::max<std::size_t>(100 * window, 1000);
}

ModelEntry train(const Trace& trace, std::size_t window, std::size_t channel, ModeClass mc,
                 const ClPolicy& policy, std::size_t max_lag) {
  require_trainable(trace, channel);
  if (window == 0) throw Error(ErrorKind::InputDomain, "window length must be at least 1");
  const int sign = sign_of(mc);
  const auto own = collect(trace, mc, sign);
  const auto opposite = collect(trace, mc, -sign);
  return train_from(own, opposite, window, channel, mc, policy, max_lag);
}

DetectorModel train_model(const Trace& trace, const TrainOptions& options,
                          std::vector<std::string>* skipped) {
  require_trainable(trace, 0);
  if (options.windows.empty()) throw Error(ErrorKind::Config, "no window lengths requested");
  for (auto w : options.windows) {
    if (w == 0) throw Error(ErrorKind::Config, "window length must be at least 1");
  }
  DetectorModel model;
  model.sample_interval_s = trace.sample_interval_s;
  model.cl_policy = options.cl_policy;
  model.virtual_channel = options.virtual_channel;
  const std::size_t p = trace.channels();
  model.channels = options.virtual_channel.enabled() ? p - 1 : p;

  std::vector<std::size_t> windows = options.windows;
  std::sort(windows.begin(), windows.end());
  windows.erase(std::unique(windows.begin(), windows.end()), windows.end());
  const std::size_t max_lag = std::max(options.max_lag, windows.back() - 1);

  for (ModeClass mc : {ModeClass::Slip, ModeClass::Slide}) {
    const int sign = sign_of(mc);
    const auto own = collect(trace, mc, sign);
    model.training_samples[mc] = own.frames;
    if (own.frames < required_training_frames(windows.back())) {
      if (skipped) {
        skipped->push_back(std::string(to_string(mc)) + ": " + std::to_string(own.frames) +
                           " frames, need " +
                           std::to_string(required_training_frames(windows.back())));
      }
      continue;
    }
    const auto opposite = collect(trace, mc, -sign);
    for (std::size_t i = 0; i < model.channels; ++i) {
      for (auto w : windows) {
        model.entries.push_back(train_from(own, opposite, w, i, mc, options.cl_policy, max_lag));
      }
    }
  }
  if (model.entries.empty()) {
    throw Error(ErrorKind::InsufficientData, "no mode class has enough frames to train");
  }
  return model;
}

std::string_view to_string(AlarmKind kind) noexcept {
  return kind == AlarmKind::Slip ? "slip" : "slide";
}

std::string_view to_string(DecisionStatus status) noexcept {
  switch (status) {
    case DecisionStatus::Evaluated: return "evaluated";
    case DecisionStatus::Warmup: return "warmup";
    case DecisionStatus::Excluded: return "excluded";
    case DecisionStatus::NoModel: return "no-model";
  }
  return "excluded";
}

Decision detect_step(const ModelEntry& entry, std::span<const VelocityFrame> recent,
                     std::size_t channel) {
  Decision d;
  if (recent.empty()) return d;
  const auto& newest = recent.back();
  const auto mc = mode_class(newest.mode);
  if (!mc) return d;
  if (*mc != entry.mode_class) {
    throw Error(ErrorKind::InputDomain, "window mode class does not match the model entry");
  }
  const std::size_t W = entry.window();
  if (recent.size() < W) {
    d.status = DecisionStatus::Warmup;
    return d;
  }
  const auto window = recent.last(W);
  for (const auto& f : window) {
    if (mode_class(f.mode) != mc) {
      throw Error(ErrorKind::InputDomain, "window straddles a mode-class change");
    }
  }
  const int sign = sign_of(*mc);
  std::vector<double> vmds(W);
  std::vector<double> buf(newest.velocities.size());
  for (std::size_t j = 0; j < W; ++j) {
    vmd_all(window[W - 1 - j].velocities, sign, buf);
    vmds[j] = buf.at(channel);
  }
  d.status = DecisionStatus::Evaluated;
  d.index_value = wma_at(std::span<const double>(entry.weights.weights),
                         [&](std::size_t j) { return vmds[j]; });
  d.control_limit = entry.delta;
  if (d.index_value > d.control_limit) {
    d.alarm = AlarmEvent{newest.timestamp,
                         channel,
                         *mc == ModeClass::Slip ? AlarmKind::Slip : AlarmKind::Slide,
                         d.index_value,
                         d.control_limit,
                         newest.mode};
  }
  return d;
}

WindowSelection WindowSelection::uniform(const DetectorModel& model, std::size_t window) {
  WindowSelection sel;
  for (const auto& e : model.entries) {
    if (e.window() == window) sel.set(e.channel, e.mode_class, window);
  }
  return sel;
}

void WindowSelection::set(std::size_t channel, ModeClass mc, std::size_t window) {
  windows_[{channel, mc}] = window;
}

std::optional<std::size_t> WindowSelection::get(std::size_t channel, ModeClass mc) const {
  const auto it = windows_.find({channel, mc});
  if (it == windows_.end()) return std::nullopt;
  return it->second;
}

std::size_t WindowSelection::max_window() const noexcept {
  std::size_t m = 0;
  for (const auto& [key, w] : windows_) m = std::max(m, w);
  return m;
}

OnlineDetector::OnlineDetector(const DetectorModel& model, WindowSelection selection)
    : model_(&model),
      selection_(std::move(selection)),
      capacity_(std::max<std::size_t>(selection_.max_window(), 1)),
      history_(model.channels, std::vector<double>(capacity_, 0.0)),
      scratch_(model.input_channels()) {}

StepResult OnlineDetector::push(const VelocityFrame& frame) {
  StepResult out;
  out.timestamp = frame.timestamp;
  out.mode = frame.mode;
  out.decisions.resize(model_->channels);

  const auto mc = mode_class(frame.mode);
  if (!mc) {
    current_.reset();
    filled_ = 0;
    return out;
  }
  if (frame.velocities.size() != model_->input_channels()) {
    throw Error(ErrorKind::Compatibility, "frame has " + std::to_string(frame.velocities.size()) +
                                              " channels, model expects " +
                                              std::to_string(model_->input_channels()));
  }
  if (current_ != mc) {
    current_ = mc;
    filled_ = 0;
  }
  vmd_all(frame.velocities, sign_of(*mc), scratch_);
  // Ring position of the newest sample is filled_ % capacity_ after the push.
  const std::size_t head = filled_ % capacity_;
  for (std::size_t i = 0; i < model_->channels; ++i) history_[i][head] = scratch_[i];
  ++filled_;

  for (std::size_t i = 0; i < model_->channels; ++i) {
    auto& d = out.decisions[i];
    const auto w = selection_.get(i, *mc);
    const ModelEntry* entry = w ? model_->find(i, *mc, *w) : nullptr;
    if (!entry) {
      d.status = DecisionStatus::NoModel;
      continue;
    }
    const std::size_t W = entry->window();
    if (filled_ < W) {
      d.status = DecisionStatus::Warmup;
      continue;
    }
    const auto& hist = history_[i];
    d.status = DecisionStatus::Evaluated;
    d.index_value = wma_at(std::span<const double>(entry->weights.weights), [&](std::size_t j) {
      return hist[(head + capacity_ - j) % capacity_];
    });
    d.control_limit = entry->delta;
    if (d.index_value > d.control_limit) {
      d.alarm = AlarmEvent{frame.timestamp,
                           i,
                           *mc == ModeClass::Slip ? AlarmKind::Slip : AlarmKind::Slide,
                           d.index_value,
                           d.control_limit,
                           frame.mode};
    }
  }
  return out;
}

DetectionResult detect_trace(const DetectorModel& model, const Trace& trace,
                             const WindowSelection& selection) {
  if (!trace.empty() && trace.channels() != model.input_channels()) {
    throw Error(ErrorKind::Compatibility,
                "trace has " + std::to_string(trace.channels()) + " channels, model expects " +
                    std::to_string(model.input_channels()));
  }
  DetectionResult result;
  OnlineDetector det(model, selection);
  result.steps.reserve(trace.size());
  for (const auto& f : trace.frames) {
    auto step = det.push(f);
    bool evaluated = false;
    bool alarmed = false;
    for (const auto& d : step.decisions) {
      if (d.status == DecisionStatus::Evaluated) evaluated = true;
      if (d.alarm) {
        alarmed = true;
        result.alarms.push_back(*d.alarm);
      }
    }
    result.evaluated_windows += evaluated ? 1 : 0;
    result.alarmed_windows += alarmed ? 1 : 0;
    result.steps.push_back(std::move(step));
  }
  return result;
}

}  // namespace wmavmd
