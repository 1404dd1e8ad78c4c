#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wmavmd/baseline.hpp"
#include "wmavmd/detector.hpp"
#include "wmavmd/error.hpp"

namespace wmavmd {

enum class Command { Simulate, Train, Detect, Analyze, Fuzz };

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitIngestion = 2,
  kExitConfig = 3,
  kExitCompatibility = 4,
  kExitPropertyViolation = 5,
  kExitIo = 6,
  kExitData = 7,
};

int exit_code_for(ErrorKind kind) noexcept;

struct RunConfig {
  Command command = Command::Simulate;
  std::filesystem::path input;
  std::filesystem::path model;
  std::filesystem::path output;
  std::filesystem::path labels;       // simulate: labels output
  std::filesystem::path reference;    // simulate: output; train/detect: input
  std::filesystem::path index_output; // detect: per-sample index series
  std::filesystem::path baseline_output;
  std::vector<std::size_t> windows;   // train: W list; detect: at most one
  std::vector<double> f_check;
  ClPolicy cl_policy;
  VirtualChannelPolicy virtual_channel;
  BaselineThresholds baseline;
  std::optional<std::uint64_t> seed;
  std::size_t iterations = 100000;
  std::size_t solver_iterations = 2000;
  std::size_t max_lag = 10;
  bool inject_solver_defect = false;

  /// Checks the invariants that do not need file contents.
  void validate() const;
};

/// Parses "3" or "1..5" into a list of window lengths.
std::vector<std::size_t> parse_window_range(const std::string& text);

/// Each command writes its files, prints a summary to `out` and warnings
/// to `err`, and returns an exit code. Errors propagate as wmavmd::Error.
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_train(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_detect(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_analyze(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_fuzz(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Dispatches on config.command and converts errors into exit codes.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace wmavmd
