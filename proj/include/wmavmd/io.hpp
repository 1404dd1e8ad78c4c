#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "wmavmd/baseline.hpp"
#include "wmavmd/detector.hpp"
#include "wmavmd/isolability.hpp"
#include "wmavmd/trace_sim.hpp"

namespace wmavmd::io {

/// Shortest decimal text that parses back to the same double.
std::string format_real(double x);

// ---- traces -------------------------------------------------------------
// Header "t,v1,...,vp,mode"; t in seconds, one row per sample.

void write_trace(std::ostream& out, const Trace& trace);
/// Frames are numbered by row. The sample interval is the mean spacing of
/// t (or `fallback_interval` for fewer than two rows). Throws
/// Error(Ingestion) with the 1-based line number on any schema violation.
Trace read_trace(std::istream& in, double fallback_interval = 0.1);

/// Header "t,channel,f_value"; channel is 1-based, f_value signed (km/h).
void write_labels(std::ostream& out, const std::vector<FaultLabel>& labels, double dt);
std::vector<FaultLabel> read_labels(std::istream& in, double dt);

/// Header "t,v_ref".
void write_reference(std::ostream& out, const std::vector<double>& speed, double dt);
std::vector<double> read_reference(std::istream& in);

// ---- model --------------------------------------------------------------

std::string model_to_json(const DetectorModel& model);
DetectorModel model_from_json(const std::string& text);

// ---- detection outputs --------------------------------------------------

/// Header "timestamp,channel,kind,index_value,control_limit,mode".
void write_alarms(std::ostream& out, const std::vector<AlarmEvent>& alarms);
std::vector<AlarmEvent> read_alarms(std::istream& in);

/// Per-sample index and control limit for every channel, for plotting.
/// Header "t,mode,idx1,cl1,status1,...". Non-evaluated cells are empty.
void write_index_series(std::ostream& out, const DetectionResult& result, std::size_t channels,
                        double dt);

void write_baseline_alarms(std::ostream& out, const std::vector<BaselineAlarm>& alarms);

// ---- scenarios ----------------------------------------------------------

struct Scenario {
  ProfileSpec profile;
  NoiseSpec noise;
  InjectionSpec injection;
};

/// JSON document with "profile", "noise" and optional "injection" objects.
/// Channels in the document are 1-based. Throws Error(Spec) on invalid
/// content and Error(Ingestion) on malformed JSON.
Scenario scenario_from_json(const std::string& text);
std::string scenario_to_json(const Scenario& scenario);

// ---- files --------------------------------------------------------------

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace wmavmd::io
