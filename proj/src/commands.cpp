#include "wmavmd/commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "wmavmd/fuzz.hpp"
#include "wmavmd/io.hpp"
#include "wmavmd/isolability.hpp"
#include "wmavmd/trace_sim.hpp"
#include "wmavmd/virtual_wheelset.hpp"

namespace wmavmd {

namespace fs = std::filesystem;

namespace {

fs::path sibling(const fs::path& base, const std::string& suffix) {
  fs::path p = base;
  p.replace_extension();
  p += suffix;
  return p;
}

void require_path(const fs::path& p, const char* flag) {
  if (p.empty()) throw Error(ErrorKind::Config, std::string("missing ") + flag);
}

void require_distinct(const fs::path& read, const fs::path& write) {
  if (read.empty() || write.empty()) return;
  std::error_code ec;
  const bool same = fs::exists(read) && fs::exists(write) ? fs::equivalent(read, write, ec)
                                                          : fs::absolute(read) == fs::absolute(write);
  if (same) {
    throw Error(ErrorKind::Config, "input and output paths must differ: " + read.string());
  }
}

Trace load_trace(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return io::read_trace(in);
}

Trace with_virtual_channel(const Trace& trace, const VirtualChannelPolicy& policy,
                           const fs::path& reference) {
  if (!policy.enabled()) return trace;
  std::vector<double> ref;
  if (policy.kind == VirtualChannelPolicy::Kind::Reference) {
    require_path(reference, "--reference (reference velocity file)");
    std::ifstream in(reference);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + reference.string());
    ref = io::read_reference(in);
  }
  return virtual_wheelset(trace, policy, ref);
}

std::string fixed(double x, int digits = 4) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(digits) << x;
  return ss.str();
}

void print_table(std::ostream& out, const IsolabilityTable& table, std::size_t channels) {
  for (ModeClass mc : {ModeClass::Slip, ModeClass::Slide}) {
    std::vector<std::size_t> windows;
    for (const auto& r : table.rows) {
      if (r.mode_class == mc && r.channel == 0) windows.push_back(r.window);
    }
    if (windows.empty()) continue;
    out << (mc == ModeClass::Slip ? "Slip (km/h)" : "Slide (km/h)");
    for (std::size_t i = 0; i < channels; ++i) out << ",i=" << (i + 1);
    out << '\n';
    for (auto w : windows) {
      out << "W=" << w;
      for (std::size_t i = 0; i < channels; ++i) {
        const IsolabilityRow* row = nullptr;
        for (const auto* r : table.column(i, mc)) {
          if (r->window == w) row = r;
        }
        out << ',' << (row ? fixed(row->threshold) + (row->owv_positive ? "" : "*") : "");
      }
      out << '\n';
    }
  }
  if (table.any_non_positive_owv()) {
    out << "* weights not all positive: threshold is conditional\n";
  }
}

}  // namespace

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Ingestion: return kExitIngestion;
    case ErrorKind::Config:
    case ErrorKind::Spec: return kExitConfig;
    case ErrorKind::Compatibility: return kExitCompatibility;
    case ErrorKind::PropertyViolation: return kExitPropertyViolation;
    case ErrorKind::Io: return kExitIo;
    case ErrorKind::InsufficientData:
    case ErrorKind::DegenerateTrace: return kExitData;
    case ErrorKind::InputDomain:
    case ErrorKind::Index: return kExitFailure;
  }
  return kExitFailure;
}

void RunConfig::validate() const {
  for (auto w : windows) {
    if (w < 1) throw Error(ErrorKind::Config, "window length must be at least 1");
  }
  for (double f : f_check) {
    if (!(f > 0.0) || !std::isfinite(f)) throw Error(ErrorKind::Config, "--f-check must be > 0");
  }
  const std::vector<fs::path> outputs{output, labels, index_output, baseline_output};
  for (const auto& o : outputs) {
    require_distinct(input, o);
    require_distinct(model, o);
  }
  if (command == Command::Train) require_distinct(input, model);
  if (command == Command::Simulate) require_distinct(input, reference);
}

std::vector<std::size_t> parse_window_range(const std::string& text) {
  auto parse_one = [&](const std::string& s) -> std::size_t {
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty() || v < 1) {
      throw Error(ErrorKind::Config, "bad window length '" + s + "'");
    }
    return static_cast<std::size_t>(v);
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) return {parse_one(text)};
  const auto lo = parse_one(text.substr(0, dots));
  const auto hi = parse_one(text.substr(dots + 2));
  if (hi < lo) throw Error(ErrorKind::Config, "empty window range '" + text + "'");
  std::vector<std::size_t> out;
  for (auto w = lo; w <= hi; ++w) out.push_back(w);
  return out;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_path(cfg.input, "--input (scenario JSON)");
  require_path(cfg.output, "--output (trace CSV)");
  auto scenario = io::scenario_from_json(io::read_file(cfg.input));
  if (cfg.seed) scenario.noise.seed = *cfg.seed;

  const auto sim = generate(scenario.profile, scenario.noise);
  const auto injected = inject(sim.trace, scenario.injection);
  for (const auto& w : injected.warnings) err << "warning: " << w << '\n';

  const double dt = sim.trace.sample_interval_s;
  {
    std::ostringstream ss;
    io::write_trace(ss, injected.trace);
    io::write_file(cfg.output, ss.str());
  }
  const fs::path labels = cfg.labels.empty() ? sibling(cfg.output, ".labels.csv") : cfg.labels;
  {
    std::ostringstream ss;
    io::write_labels(ss, injected.labels, dt);
    io::write_file(labels, ss.str());
  }
  if (!cfg.reference.empty()) {
    std::ostringstream ss;
    io::write_reference(ss, sim.base_speed, dt);
    io::write_file(cfg.reference, ss.str());
  }
  out << "simulated " << injected.trace.size() << " frames x " << injected.trace.channels()
      << " channels, " << injected.occurrences.size() << " fault occurrences\n";
  out << "trace: " << cfg.output.string() << "\nlabels: " << labels.string() << '\n';
  return kExitOk;
}

int cmd_train(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_path(cfg.input, "--input (trace CSV)");
  const fs::path model_path = cfg.output.empty() ? cfg.model : cfg.output;
  require_path(model_path, "--output or --model (model JSON)");
  require_distinct(cfg.input, model_path);

  const auto trace = with_virtual_channel(load_trace(cfg.input), cfg.virtual_channel, cfg.reference);
  TrainOptions opts;
  opts.windows = cfg.windows.empty() ? std::vector<std::size_t>{1} : cfg.windows;
  opts.max_lag = cfg.max_lag;
  opts.cl_policy = cfg.cl_policy;
  opts.virtual_channel = cfg.virtual_channel;
  std::vector<std::string> skipped;
  const auto model = train_model(trace, opts, &skipped);
  for (const auto& s : skipped) err << "warning: mode class skipped (" << s << ")\n";

  io::write_file(model_path, io::model_to_json(model));

  for (const auto& e : model.entries) {
    out << "channel " << (e.channel + 1) << ' ' << to_string(e.mode_class) << " W=" << e.window()
        << " weights=[";
    for (std::size_t m = 0; m < e.window(); ++m) {
      out << (m ? " " : "") << fixed(e.weights.weights[m], 6);
    }
    out << "] delta=" << fixed(e.delta) << " phi=" << fixed(e.phi)
        << " positive=" << (e.owv_positive ? "yes" : "no");
    if (e.degenerate) out << " degenerate-data(equal weights)";
    if (e.ill_conditioned) out << " ill-conditioned(equal weights)";
    out << '\n';
    if (e.degenerate) {
      err << "warning: channel " << (e.channel + 1) << ' ' << to_string(e.mode_class)
          << ": zero variance, equal weights used\n";
    }
    if (e.ill_conditioned) {
      err << "warning: channel " << (e.channel + 1) << ' ' << to_string(e.mode_class)
          << ": ill-conditioned weight system, equal weights used\n";
    }
  }
  out << "model: " << model_path.string() << '\n';
  return kExitOk;
}

int cmd_detect(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_path(cfg.input, "--input (trace CSV)");
  require_path(cfg.model, "--model (model JSON)");
  require_path(cfg.output, "--output (alarm CSV)");
  const auto model = io::model_from_json(io::read_file(cfg.model));
  const auto raw = load_trace(cfg.input);

  if (!raw.empty()) {
    if (raw.channels() != model.channels) {
      throw Error(ErrorKind::Compatibility, "trace has " + std::to_string(raw.channels()) +
                                                " channels, model was trained on " +
                                                std::to_string(model.channels));
    }
    if (raw.size() >= 2 &&
        std::abs(raw.sample_interval_s - model.sample_interval_s) > 0.01 * model.sample_interval_s) {
      throw Error(ErrorKind::Compatibility, "sample interval differs from the model by more than 1%");
    }
  }

  WindowSelection selection;
  if (cfg.windows.size() > 1) throw Error(ErrorKind::Config, "detect takes a single --window");
  if (!cfg.windows.empty()) {
    if (model.find(0, ModeClass::Slip, cfg.windows[0]) == nullptr &&
        model.find(0, ModeClass::Slide, cfg.windows[0]) == nullptr) {
      throw Error(ErrorKind::Config, "model has no entries for W=" + std::to_string(cfg.windows[0]));
    }
    selection = WindowSelection::uniform(model, cfg.windows[0]);
  } else if (!cfg.f_check.empty()) {
    std::map<std::pair<std::size_t, ModeClass>, WindowChoice> report;
    selection = select_windows(model, cfg.f_check, &report);
    for (const auto& [key, choice] : report) {
      if (!choice.window) {
        err << "warning: channel " << (key.first + 1) << ' ' << to_string(key.second)
            << ": no window isolates f_check, using W=" << choice.closest_window << " (gap "
            << fixed(choice.closest_gap) << " km/h)\n";
      }
    }
  } else {
    const auto ws = model.windows();
    if (ws.size() != 1) {
      throw Error(ErrorKind::Config, "model has several windows; pass --window or --f-check");
    }
    selection = WindowSelection::uniform(model, ws[0]);
  }

  DetectionResult result;
  std::vector<BaselineAlarm> baseline;
  if (raw.empty()) {
    err << "warning: empty trace, nothing to detect\n";
  } else {
    const auto trace = with_virtual_channel(raw, model.virtual_channel, cfg.reference);
    result = detect_trace(model, trace, selection);
    if (!cfg.baseline_output.empty()) baseline = baseline_criteria(trace, cfg.baseline, model.channels);
  }

  {
    std::ostringstream ss;
    io::write_alarms(ss, result.alarms);
    io::write_file(cfg.output, ss.str());
  }
  const fs::path index_path =
      cfg.index_output.empty() ? sibling(cfg.output, ".index.csv") : cfg.index_output;
  {
    std::ostringstream ss;
    io::write_index_series(ss, result, model.channels, raw.sample_interval_s);
    io::write_file(index_path, ss.str());
  }
  if (!cfg.baseline_output.empty()) {
    std::ostringstream ss;
    io::write_baseline_alarms(ss, baseline);
    io::write_file(cfg.baseline_output, ss.str());
  }

  out << "frames=" << raw.size() << " evaluated_windows=" << result.evaluated_windows
      << " alarms=" << result.alarms.size() << " alarmed_windows=" << result.alarmed_windows
      << " alarm_rate=" << fixed(result.false_alarm_rate(), 6) << '\n';
  if (!cfg.baseline_output.empty()) out << "baseline_alarms=" << baseline.size() << '\n';
  out << "alarms: " << cfg.output.string() << "\nindex series: " << index_path.string() << '\n';
  return kExitOk;
}

int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  require_path(cfg.model, "--model (model JSON)");
  const auto model = io::model_from_json(io::read_file(cfg.model));
  if (model.windows().size() < 2) {
    throw Error(ErrorKind::Config, "analyze needs a model trained over a window range");
  }
  const auto table = isolability_table(model);
  std::ostringstream report;
  print_table(report, table, model.channels);

  if (!cfg.f_check.empty()) {
    if (cfg.f_check.size() != 1 && cfg.f_check.size() != model.channels) {
      throw Error(ErrorKind::Config, "--f-check needs one value or one per channel");
    }
    report << "selection (f_check):\n";
    for (std::size_t i = 0; i < model.channels; ++i) {
      const double f = cfg.f_check.size() == 1 ? cfg.f_check[0] : cfg.f_check[i];
      for (ModeClass mc : {ModeClass::Slip, ModeClass::Slide}) {
        if (table.column(i, mc).empty()) continue;
        const auto choice = select_window(model, i, mc, f);
        report << "channel " << (i + 1) << ' ' << to_string(mc) << " f_check=" << fixed(f) << ' ';
        if (choice.window) {
          report << "W*=" << *choice.window << '\n';
        } else {
          report << "W*=none closest W=" << choice.closest_window
                 << " gap=" << fixed(choice.closest_gap) << '\n';
        }
      }
    }
  }
  out << report.str();
  if (!cfg.output.empty()) io::write_file(cfg.output, report.str());
  return kExitOk;
}

int cmd_fuzz(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  fuzz::FuzzConfig fc;
  fc.iterations = cfg.iterations;
  fc.solver_iterations = cfg.solver_iterations;
  fc.seed = cfg.seed.value_or(1);
  if (cfg.inject_solver_defect) fc.builder = fuzz::corrupted_system_matrix;
  const auto report = fuzz::run_all(fc);
  out << report.to_text();
  if (!cfg.output.empty()) io::write_file(cfg.output, report.to_text());
  return report.passed() ? kExitOk : kExitPropertyViolation;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    switch (cfg.command) {
      case Command::Simulate: return cmd_simulate(cfg, out, err);
      case Command::Train: return cmd_train(cfg, out, err);
      case Command::Detect: return cmd_detect(cfg, out, err);
      case Command::Analyze: return cmd_analyze(cfg, out, err);
      case Command::Fuzz: return cmd_fuzz(cfg, out, err);
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace wmavmd
