#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace wmavmd {

struct WeightVector;

/// Sample mean and biased (1/N) autocovariances of a scalar series.
/// Only nonnegative lags are stored; R(-l) = R(l).
struct AutocovSequence {
  std::size_t channel = 0;
  double mean = 0.0;
  std::vector<double> lags;  // R_0 .. R_L
  std::size_t sample_count = 0;

  std::size_t max_lag() const noexcept { return lags.empty() ? 0 : lags.size() - 1; }
  double r0() const noexcept { return lags.empty() ? 0.0 : lags.front(); }
  /// R at a signed lag.
  double at(long lag) const;

  bool operator==(const AutocovSequence&) const = default;
};

/// mean = (1/N) sum x_j,  R_l = (1/N) sum_{j<N-l} (x_j - mean)(x_{j+l} - mean).
/// Throws Error(InsufficientData) for N < 2 and Error(InputDomain) for
/// max_lag > N-1 or non-finite entries.
AutocovSequence estimate_autocov(std::span<const double> series, std::size_t max_lag);

/// Symmetric Toeplitz matrix [l, j] = R(l - j) of order k.
struct ToeplitzGamma {
  Eigen::MatrixXd entries;
  double min_eigenvalue = 0.0;
  bool positive_semidefinite = true;

  std::size_t order() const noexcept { return static_cast<std::size_t>(entries.rows()); }
};

/// Builds the order-k matrix and checks PSD with the eigenvalue floor
/// -1e-10 * max(R_0, 1). Throws Error(InsufficientData) when k > L + 1.
ToeplitzGamma build_gamma(const AutocovSequence& acov, std::size_t k);

/// a^T Gamma^W a evaluated as the double sum over R(l - j).
double wma_variance(const AutocovSequence& acov, std::span<const double> weights);
double wma_variance(const AutocovSequence& acov, const WeightVector& weights);

}  // namespace wmavmd
