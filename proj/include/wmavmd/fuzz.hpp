#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wmavmd/owv.hpp"
#include "wmavmd/stationary_stats.hpp"

namespace wmavmd::fuzz {

/// Random autocovariance sequence that is PSD at every order: either a
/// positive mixture of cosines on a white-noise floor, or the biased
/// estimate of a short random AR(2) series. R_0 spans 1e-3..1e3.
AutocovSequence random_autocov(std::mt19937_64& rng, std::size_t max_lag);

struct PropertyStats {
  std::size_t cases = 0;
  std::size_t violations = 0;
  std::optional<std::string> reproducer;  // first failing case, shrunk
};

struct FuzzReport {
  std::map<std::string, PropertyStats> properties;

  std::size_t total_violations() const noexcept;
  bool passed() const noexcept { return total_violations() == 0; }
  std::string to_text() const;
};

struct FuzzConfig {
  std::size_t iterations = 100000;       // operator cases
  std::size_t solver_iterations = 2000;  // solver instances
  std::size_t max_window = 6;
  std::size_t optimality_samples = 200;  // random feasible points per instance
  std::uint64_t seed = 1;
  SystemBuilder builder = owv_system_matrix;
};

/// Scalar and vector min identities plus the VMD operator properties.
FuzzReport run_operator_suite(const FuzzConfig& config);

/// Optimal-weight properties: oracle agreement, unit sum, symmetry, KKT
/// residual, sign agreement with the determinant test, optimality against
/// random feasible weights, and non-increasing variance in W.
FuzzReport run_solver_suite(const FuzzConfig& config);

FuzzReport run_all(const FuzzConfig& config);

/// Builder that negates the (0,0) entry of the system matrix; used to
/// check that the suites notice a broken solver.
Eigen::MatrixXd corrupted_system_matrix(const AutocovSequence& acov, std::size_t window);

}  // namespace wmavmd::fuzz
