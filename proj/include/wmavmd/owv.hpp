#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "wmavmd/stationary_stats.hpp"

namespace wmavmd {

/// Window weights a_1..a_W. a_1 multiplies the newest sample in the window,
/// a_W the oldest.
struct WeightVector {
  std::vector<double> weights;

  std::size_t window() const noexcept { return weights.size(); }
  double sum() const noexcept;
  bool operator==(const WeightVector&) const = default;

  static WeightVector equal(std::size_t window);
};

/// Sign of each optimal weight predicted from det of the Toeplitz matrix
/// with column m replaced by ones (+1, 0 or -1 per index).
struct PositivityReport {
  std::vector<int> signs;
  std::vector<double> determinants;  // of the R_0-normalized matrices
  double zero_threshold = 0.0;

  bool all_positive() const noexcept;
};

struct OwvDiagnostics {
  bool is_unique = true;
  bool is_symmetric = true;
  bool degenerate = false;        // R_0 == 0, equal weights substituted
  bool ill_conditioned = false;   // system too close to singular, equal weights substituted
  double condition_estimate = 1.0;
  PositivityReport positivity;
  double variance = 0.0;          // a*^T Gamma a*

  bool owv_positive() const noexcept;
};

struct OwvSolution {
  WeightVector weights;
  OwvDiagnostics diagnostics;
};

/// Condition-number ceiling beyond which the optimality system is treated
/// as singular.
inline constexpr double kMaxOwvCondition = 1e12;

/// The W x W optimality system built from R_0-normalized lags: rows
/// l < W-1 hold R(l-j) - R(l+1-j), the last row is all ones.
Eigen::MatrixXd owv_system_matrix(const AutocovSequence& acov, std::size_t window);

/// Minimum-variance unit-sum weights for the given window.
OwvSolution solve_owv(const AutocovSequence& acov, std::size_t window);

/// solve_owv with a caller-supplied system matrix builder. Test harnesses
/// use it to plant defects in the solver.
using SystemBuilder = std::function<Eigen::MatrixXd(const AutocovSequence&, std::size_t)>;
OwvSolution solve_owv_with(const AutocovSequence& acov, std::size_t window,
                           const SystemBuilder& builder);

/// Independent route to the same minimizer: eliminates a_W through the
/// sum constraint and runs conjugate gradients with exact line search on
/// the reduced convex quadratic.
WeightVector qp_oracle(const AutocovSequence& acov, std::size_t window);

PositivityReport positivity_report(const AutocovSequence& acov, std::size_t window);

}  // namespace wmavmd
