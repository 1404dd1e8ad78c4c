#pragma once

#include <stdexcept>
#include <string>

namespace wmavmd {

/// Failure categories. The CLI maps each one to a distinct exit code.
enum class ErrorKind {
  InputDomain,       // non-finite values, length mismatch, out-of-range arguments
  Index,             // channel index out of range
  InsufficientData,  // too few samples or lags for the request
  DegenerateTrace,   // nothing usable in the trace (e.g. all Stopped)
  Spec,              // scenario / injection spec violates a constraint
  Ingestion,         // malformed CSV / JSON input
  Config,            // bad command-line or config combination
  Compatibility,     // model and trace disagree (channel count, sample interval)
  PropertyViolation, // a randomized invariant suite found a counterexample
  Io,                // file could not be opened or written
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace wmavmd
