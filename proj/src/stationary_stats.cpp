#include "wmavmd/stationary_stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "wmavmd/error.hpp"
#include "wmavmd/owv.hpp"

namespace wmavmd {

double AutocovSequence::at(long lag) const {
  const auto l = static_cast<std::size_t>(std::labs(lag));
  if (l >= lags.size()) {
    throw Error(ErrorKind::InsufficientData, "lag " + std::to_string(l) + " not retained");
  }
  return lags[l];
}

AutocovSequence estimate_autocov(std::span<const double> series, std::size_t max_lag) {
  const std::size_t n = series.size();
  if (n < 2) throw Error(ErrorKind::InsufficientData, "autocovariance needs at least two samples");
  if (max_lag > n - 1) {
    throw Error(ErrorKind::InputDomain, "max lag " + std::to_string(max_lag) +
                                            " exceeds N-1 = " + std::to_string(n - 1));
  }
  double sum = 0.0;
  for (double x : series) {
    if (!std::isfinite(x)) throw Error(ErrorKind::InputDomain, "non-finite sample in series");
    sum += x;
  }
  AutocovSequence out;
  out.sample_count = n;
  out.mean = sum / static_cast<double>(n);
  out.lags.assign(max_lag + 1, 0.0);

  std::vector<double> centered(n);
  for (std::size_t j = 0; j < n; ++j) centered[j] = series[j] - out.mean;
  for (std::size_t l = 0; l <= max_lag; ++l) {
    double acc = 0.0;
    for (std::size_t j = 0; j + l < n; ++j) acc += centered[j] * centered[j + l];
    out.lags[l] = acc / static_cast<double>(n);
  }
  return out;
}

ToeplitzGamma build_gamma(const AutocovSequence& acov, std::size_t k) {
  if (k == 0 || k > acov.lags.size()) {
    throw Error(ErrorKind::InsufficientData, "gamma of order " + std::to_string(k) + " needs " +
                                                 std::to_string(k) + " lags, have " +
                                                 std::to_string(acov.lags.size()));
  }
  ToeplitzGamma g;
  const auto n = static_cast<Eigen::Index>(k);
  g.entries.resize(n, n);
  for (Eigen::Index l = 0; l < n; ++l) {
    for (Eigen::Index j = 0; j < n; ++j) {
      g.entries(l, j) = acov.lags[static_cast<std::size_t>(std::abs(l - j))];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g.entries, Eigen::EigenvaluesOnly);
  g.min_eigenvalue = eig.eigenvalues().minCoeff();
  g.positive_semidefinite = g.min_eigenvalue >= -1e-10 * std::max(acov.r0(), 1.0);
  return g;
}

double wma_variance(const AutocovSequence& acov, std::span<const double> weights) {
  const std::size_t w = weights.size();
  if (w == 0 || w > acov.lags.size()) {
    throw Error(ErrorKind::InsufficientData, "weight length exceeds retained lags");
  }
  double s = 0.0;
  for (std::size_t l = 0; l < w; ++l) {
    for (std::size_t j = 0; j < w; ++j) {
      s += weights[l] * weights[j] * acov.lags[l > j ? l - j : j - l];
    }
  }
  return std::max(s, 0.0);
}

double wma_variance(const AutocovSequence& acov, const WeightVector& weights) {
  return wma_variance(acov, std::span<const double>(weights.weights));
}

}  // namespace wmavmd
