#include "wmavmd/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "wmavmd/error.hpp"

namespace wmavmd::io {

using nlohmann::json;

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                     : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

[[noreturn]] void ingest_fail(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::Ingestion, "line " + std::to_string(line) + ": " + what);
}

double parse_real(std::string_view s, std::size_t line, const char* field) {
  s = trim(s);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    ingest_fail(line, std::string("cannot parse ") + field + " '" + std::string(s) + "'");
  }
  if (!std::isfinite(x)) ingest_fail(line, std::string("non-finite ") + field);
  return x;
}

std::size_t parse_index(std::string_view s, std::size_t line, const char* field) {
  s = trim(s);
  std::size_t x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    ingest_fail(line, std::string("cannot parse ") + field + " '" + std::string(s) + "'");
  }
  return x;
}

/// Reads the header line and returns the data lines with their numbers.
std::vector<std::pair<std::size_t, std::string>> data_lines(std::istream& in,
                                                            std::string& header) {
  std::vector<std::pair<std::size_t, std::string>> out;
  std::string line;
  std::size_t number = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++number;
    const auto t = trim(line);
    if (t.empty()) continue;
    if (!have_header) {
      header = std::string(t);
      have_header = true;
      continue;
    }
    out.emplace_back(number, std::string(t));
  }
  if (!have_header) ingest_fail(1, "missing header");
  return out;
}

const char* mode_name(ModeClass mc) { return mc == ModeClass::Slip ? "slip" : "slide"; }

ModeClass mode_class_from(const json& j) {
  const auto mc = parse_mode_class(j.get<std::string>());
  if (!mc) throw Error(ErrorKind::Ingestion, "unknown mode class '" + j.get<std::string>() + "'");
  return *mc;
}

}  // namespace

std::string format_real(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

void write_trace(std::ostream& out, const Trace& trace) {
  const std::size_t p = trace.channels();
  out << "t";
  for (std::size_t i = 0; i < p; ++i) out << ",v" << (i + 1);
  out << ",mode\n";
  for (const auto& f : trace.frames) {
    out << format_real(static_cast<double>(f.timestamp) * trace.sample_interval_s);
    for (double v : f.velocities) out << ',' << format_real(v);
    out << ',' << to_string(f.mode) << '\n';
  }
}

Trace read_trace(std::istream& in, double fallback_interval) {
  std::string header;
  const auto rows = data_lines(in, header);
  const auto cols = split_csv(header);
  if (cols.size() < 4 || trim(cols.front()) != "t" || trim(cols.back()) != "mode") {
    ingest_fail(1, "header must be t,v1,...,vp,mode with p >= 2");
  }
  const std::size_t p = cols.size() - 2;
  for (std::size_t i = 0; i < p; ++i) {
    if (trim(cols[i + 1]) != "v" + std::to_string(i + 1)) {
      ingest_fail(1, "expected column v" + std::to_string(i + 1));
    }
  }
  Trace trace;
  trace.frames.reserve(rows.size());
  std::vector<double> times;
  times.reserve(rows.size());
  for (const auto& [number, text] : rows) {
    const auto fields = split_csv(text);
    if (fields.size() != p + 2) {
      ingest_fail(number, "expected " + std::to_string(p + 2) + " columns, found " +
                              std::to_string(fields.size()));
    }
    const double t = parse_real(fields[0], number, "t");
    if (!times.empty() && !(t > times.back())) ingest_fail(number, "non-monotone timestamp");
    times.push_back(t);
    VelocityFrame f;
    f.timestamp = trace.frames.size();
    f.velocities.resize(p);
    for (std::size_t i = 0; i < p; ++i) f.velocities[i] = parse_real(fields[i + 1], number, "velocity");
    const auto mode = parse_mode(trim(fields[p + 1]));
    if (!mode) ingest_fail(number, "unknown mode '" + std::string(trim(fields[p + 1])) + "'");
    f.mode = *mode;
    for (double v : f.velocities) {
      if (f.mode == Mode::Stopped && std::abs(v) > kStoppedTolerance) {
        ingest_fail(number, "stopped frame with nonzero velocity");
      }
    }
    trace.frames.push_back(std::move(f));
  }
  trace.sample_interval_s =
      times.size() >= 2 ? (times.back() - times.front()) / static_cast<double>(times.size() - 1)
                        : fallback_interval;
  validate_trace(trace);
  return trace;
}

void write_labels(std::ostream& out, const std::vector<FaultLabel>& labels, double dt) {
  out << "t,channel,f_value\n";
  for (const auto& l : labels) {
    out << format_real(static_cast<double>(l.frame) * dt) << ',' << (l.channel + 1) << ','
        << format_real(l.offset) << '\n';
  }
}

std::vector<FaultLabel> read_labels(std::istream& in, double dt) {
  std::string header;
  const auto rows = data_lines(in, header);
  if (trim(header) != "t,channel,f_value") ingest_fail(1, "header must be t,channel,f_value");
  std::vector<FaultLabel> out;
  for (const auto& [number, text] : rows) {
    const auto fields = split_csv(text);
    if (fields.size() != 3) ingest_fail(number, "expected 3 columns");
    const double t = parse_real(fields[0], number, "t");
    const auto channel = parse_index(fields[1], number, "channel");
    if (channel < 1) ingest_fail(number, "channels are 1-based");
    out.push_back({static_cast<std::size_t>(std::llround(t / dt)), channel - 1,
                   parse_real(fields[2], number, "f_value")});
  }
  return out;
}

void write_reference(std::ostream& out, const std::vector<double>& speed, double dt) {
  out << "t,v_ref\n";
  for (std::size_t k = 0; k < speed.size(); ++k) {
    out << format_real(static_cast<double>(k) * dt) << ',' << format_real(speed[k]) << '\n';
  }
}

std::vector<double> read_reference(std::istream& in) {
  std::string header;
  const auto rows = data_lines(in, header);
  if (trim(header) != "t,v_ref") ingest_fail(1, "header must be t,v_ref");
  std::vector<double> out;
  for (const auto& [number, text] : rows) {
    const auto fields = split_csv(text);
    if (fields.size() != 2) ingest_fail(number, "expected 2 columns");
    out.push_back(parse_real(fields[1], number, "v_ref"));
  }
  return out;
}

std::string model_to_json(const DetectorModel& model) {
  json j;
  j["format_version"] = model.format_version;
  j["p"] = model.channels;
  j["sample_interval_s"] = model.sample_interval_s;
  j["cl_policy"] = model.cl_policy.to_string();
  j["virtual_channel"] = model.virtual_channel.to_string();
  json samples = json::object();
  for (const auto& [mc, n] : model.training_samples) samples[mode_name(mc)] = n;
  j["training_samples"] = samples;
  json records = json::array();
  for (const auto& e : model.entries) {
    json r;
    r["channel"] = e.channel + 1;
    r["mode"] = mode_name(e.mode_class);
    r["window"] = e.window();
    r["weights"] = e.weights.weights;
    r["delta"] = e.delta;
    r["phi"] = e.phi;
    r["acov"] = {{"mean", e.acov.mean},
                 {"lags", e.acov.lags},
                 {"sample_count", e.acov.sample_count}};
    r["owv_positive"] = e.owv_positive;
    r["degenerate"] = e.degenerate;
    r["ill_conditioned"] = e.ill_conditioned;
    records.push_back(std::move(r));
  }
  j["records"] = std::move(records);
  return j.dump(2) + "\n";
}

DetectorModel model_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    DetectorModel m;
    m.format_version = j.at("format_version").get<int>();
    if (m.format_version != DetectorModel::kFormatVersion) {
      throw Error(ErrorKind::Compatibility,
                  "unsupported model format version " + std::to_string(m.format_version));
    }
    m.channels = j.at("p").get<std::size_t>();
    m.sample_interval_s = j.at("sample_interval_s").get<double>();
    m.cl_policy = ClPolicy::parse(j.at("cl_policy").get<std::string>());
    m.virtual_channel = VirtualChannelPolicy::parse(j.at("virtual_channel").get<std::string>());
    for (const auto& [key, n] : j.at("training_samples").items()) {
      m.training_samples[mode_class_from(json(key))] = n.get<std::size_t>();
    }
    for (const auto& r : j.at("records")) {
      ModelEntry e;
      const auto channel = r.at("channel").get<std::size_t>();
      if (channel < 1 || channel > m.channels) {
        throw Error(ErrorKind::Ingestion, "record channel out of range");
      }
      e.channel = channel - 1;
      e.mode_class = mode_class_from(r.at("mode"));
      e.weights.weights = r.at("weights").get<std::vector<double>>();
      if (e.weights.weights.size() != r.at("window").get<std::size_t>()) {
        throw Error(ErrorKind::Ingestion, "weights do not match window length");
      }
      e.delta = r.at("delta").get<double>();
      e.phi = r.at("phi").get<double>();
      const auto& a = r.at("acov");
      e.acov.channel = e.channel;
      e.acov.mean = a.at("mean").get<double>();
      e.acov.lags = a.at("lags").get<std::vector<double>>();
      e.acov.sample_count = a.at("sample_count").get<std::size_t>();
      e.owv_positive = r.at("owv_positive").get<bool>();
      e.degenerate = r.value("degenerate", false);
      e.ill_conditioned = r.value("ill_conditioned", false);
      m.entries.push_back(std::move(e));
    }
    return m;
  } catch (const json::exception& ex) {
    throw Error(ErrorKind::Ingestion, std::string("model file: ") + ex.what());
  }
}

void write_alarms(std::ostream& out, const std::vector<AlarmEvent>& alarms) {
  out << "timestamp,channel,kind,index_value,control_limit,mode\n";
  for (const auto& a : alarms) {
    out << a.timestamp << ',' << (a.channel + 1) << ',' << to_string(a.kind) << ','
        << format_real(a.index_value) << ',' << format_real(a.control_limit) << ','
        << to_string(a.mode) << '\n';
  }
}

std::vector<AlarmEvent> read_alarms(std::istream& in) {
  std::string header;
  const auto rows = data_lines(in, header);
  if (trim(header) != "timestamp,channel,kind,index_value,control_limit,mode") {
    ingest_fail(1, "unexpected alarm log header");
  }
  std::vector<AlarmEvent> out;
  for (const auto& [number, text] : rows) {
    const auto f = split_csv(text);
    if (f.size() != 6) ingest_fail(number, "expected 6 columns");
    AlarmEvent a;
    a.timestamp = parse_index(f[0], number, "timestamp");
    a.channel = parse_index(f[1], number, "channel") - 1;
    const auto kind = trim(f[2]);
    if (kind != "slip" && kind != "slide") ingest_fail(number, "unknown alarm kind");
    a.kind = kind == "slip" ? AlarmKind::Slip : AlarmKind::Slide;
    a.index_value = parse_real(f[3], number, "index_value");
    a.control_limit = parse_real(f[4], number, "control_limit");
    const auto mode = parse_mode(trim(f[5]));
    if (!mode) ingest_fail(number, "unknown mode");
    a.mode = *mode;
    out.push_back(a);
  }
  return out;
}

void write_index_series(std::ostream& out, const DetectionResult& result, std::size_t channels,
                        double dt) {
  out << "t,mode";
  for (std::size_t i = 1; i <= channels; ++i) out << ",idx" << i << ",cl" << i << ",status" << i;
  out << '\n';
  for (const auto& s : result.steps) {
    out << format_real(static_cast<double>(s.timestamp) * dt) << ',' << to_string(s.mode);
    for (std::size_t i = 0; i < channels; ++i) {
      const auto& d = s.decisions.at(i);
      if (d.status == DecisionStatus::Evaluated) {
        out << ',' << format_real(d.index_value) << ',' << format_real(d.control_limit);
      } else {
        out << ",,";
      }
      out << ',' << (d.alarm ? "alarm" : to_string(d.status));
    }
    out << '\n';
  }
}

void write_baseline_alarms(std::ostream& out, const std::vector<BaselineAlarm>& alarms) {
  out << "timestamp,channel,kind,rule,value\n";
  for (const auto& a : alarms) {
    out << a.timestamp << ',' << (a.channel + 1) << ',' << to_string(a.kind) << ','
        << (a.rule == BaselineRule::VelocityDifference ? "velocity_difference" : "acceleration")
        << ',' << format_real(a.value) << '\n';
  }
}

Scenario scenario_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& ex) {
    throw Error(ErrorKind::Ingestion, std::string("scenario: ") + ex.what());
  }
  try {
    Scenario s;
    const auto& prof = j.at("profile");
    s.profile.sample_interval_s = prof.value("sample_interval_s", 0.1);
    s.profile.initial_speed_kmh = prof.value("initial_speed_kmh", 0.0);
    const auto repeat = prof.value("repeat", std::size_t{1});
    for (std::size_t r = 0; r < repeat; ++r) {
      for (const auto& seg : prof.at("segments")) {
        ProfileSegment ps;
        const auto mode = parse_mode(seg.at("mode").get<std::string>());
        if (!mode) throw Error(ErrorKind::Spec, "unknown segment mode");
        ps.mode = *mode;
        ps.duration_s = seg.at("duration_s").get<double>();
        ps.target_speed_kmh = seg.at("target_speed_kmh").get<double>();
        s.profile.segments.push_back(ps);
      }
    }
    const auto& noise = j.at("noise");
    if (noise.at("sigma").is_array()) {
      s.noise.sigma = noise.at("sigma").get<std::vector<double>>();
    } else {
      s.noise.sigma.assign(noise.at("channels").get<std::size_t>(), noise.at("sigma").get<double>());
    }
    s.noise.rho = noise.value("rho", 0.0);
    s.noise.cross = noise.value("cross", 0.0);
    s.noise.seed = noise.value("seed", std::uint64_t{1});
    if (j.contains("injection")) {
      for (const auto& ev : j.at("injection").at("events")) {
        InjectionEvent e;
        for (auto c : ev.at("channels").get<std::vector<std::size_t>>()) {
          if (c < 1) throw Error(ErrorKind::Spec, "event channels are 1-based");
          e.channels.push_back(c - 1);
        }
        const auto kind = ev.at("kind").get<std::string>();
        if (kind != "slip" && kind != "slide") throw Error(ErrorKind::Spec, "unknown event kind");
        e.kind = kind == "slip" ? AlarmKind::Slip : AlarmKind::Slide;
        e.start = ev.at("start").get<std::size_t>();
        e.duration = ev.at("duration").get<std::size_t>();
        const auto& mag = ev.at("magnitude");
        e.magnitude = mag.is_array() ? mag.get<std::vector<double>>()
                                     : std::vector<double>{mag.get<double>()};
        e.gap = ev.value("gap", std::size_t{0});
        e.repeats = ev.value("repeats", std::size_t{1});
        s.injection.events.push_back(std::move(e));
      }
    }
    s.profile.validate();
    s.noise.validate();
    return s;
  } catch (const json::exception& ex) {
    throw Error(ErrorKind::Spec, std::string("scenario: ") + ex.what());
  }
}

std::string scenario_to_json(const Scenario& s) {
  json j;
  json segs = json::array();
  for (const auto& seg : s.profile.segments) {
    segs.push_back({{"mode", std::string(to_string(seg.mode))},
                    {"duration_s", seg.duration_s},
                    {"target_speed_kmh", seg.target_speed_kmh}});
  }
  j["profile"] = {{"sample_interval_s", s.profile.sample_interval_s},
                  {"initial_speed_kmh", s.profile.initial_speed_kmh},
                  {"segments", segs}};
  j["noise"] = {{"sigma", s.noise.sigma},
                {"rho", s.noise.rho},
                {"cross", s.noise.cross},
                {"seed", s.noise.seed}};
  json events = json::array();
  for (const auto& e : s.injection.events) {
    std::vector<std::size_t> channels;
    for (auto c : e.channels) channels.push_back(c + 1);
    events.push_back({{"channels", channels},
                      {"kind", std::string(to_string(e.kind))},
                      {"start", e.start},
                      {"duration", e.duration},
                      {"magnitude", e.magnitude},
                      {"gap", e.gap},
                      {"repeats", e.repeats}});
  }
  j["injection"] = {{"events", events}};
  return j.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << contents;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace wmavmd::io
