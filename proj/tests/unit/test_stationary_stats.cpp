#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "wmavmd/error.hpp"
#include "wmavmd/owv.hpp"
#include "wmavmd/stationary_stats.hpp"

using namespace wmavmd;

namespace {

AutocovSequence from_lags(std::vector<double> lags) {
  AutocovSequence a;
  a.lags = std::move(lags);
  a.sample_count = 100;
  return a;
}

// Naive double loop kept separate from the library code path.
double naive_variance(const std::vector<double>& r, const std::vector<double>& w) {
  double s = 0.0;
  for (std::size_t l = 0; l < w.size(); ++l)
    for (std::size_t j = 0; j < w.size(); ++j) {
      const std::size_t lag = l > j ? l - j : j - l;
      s += w[l] * w[j] * r[lag];
    }
  return s;
}

}  // namespace

TEST_CASE("autocovariance of a constant series is zero") {
  const std::vector<double> c(20, 3.25);
  const auto a = estimate_autocov(c, 4);
  CHECK(a.mean == 3.25);
  REQUIRE(a.lags.size() == 5);
  for (double r : a.lags) CHECK(r == 0.0);
  CHECK(a.sample_count == 20);
}

TEST_CASE("autocovariance of an alternating series") {
  const std::vector<double> s{1, -1, 1, -1};
  // Hand evaluation with the 1/N normalization: products of centered
  // neighbours summed over N - l terms.
  const double n = 4.0;
  const std::vector<double> expected{4 / n, -3 / n, 2 / n, -1 / n};
  const auto a = estimate_autocov(s, 3);
  CHECK(a.mean == 0.0);
  for (std::size_t l = 0; l < 4; ++l) CHECK(a.lags[l] == doctest::Approx(expected[l]).epsilon(1e-15));
  CHECK(expected[1] == -0.75);
  CHECK(a.at(-2) == a.at(2));
}

TEST_CASE("white noise has near-zero lag covariances") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> nd;
  std::vector<double> s(1000000);
  for (auto& x : s) x = nd(rng);
  const auto a = estimate_autocov(s, 5);
  CHECK(std::abs(a.lags[0] - 1.0) <= 0.01);
  for (std::size_t l = 1; l <= 5; ++l) CHECK(std::abs(a.lags[l]) <= 0.01);
}

TEST_CASE("autocovariance error paths") {
  const std::vector<double> one{1.0};
  try {
    estimate_autocov(one, 0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InsufficientData);
  }
  const std::vector<double> three{1, 2, 3};
  try {
    estimate_autocov(three, 3);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InputDomain);
  }
  const std::vector<double> nan{1, std::numeric_limits<double>::quiet_NaN(), 2};
  CHECK_THROWS_AS(estimate_autocov(nan, 1), Error);
}

TEST_CASE("gamma of independent data is the identity") {
  const auto g = build_gamma(from_lags({1, 0, 0}), 3);
  CHECK(g.entries.isApprox(Eigen::MatrixXd::Identity(3, 3)));
  CHECK(g.positive_semidefinite);
  CHECK(g.min_eigenvalue == doctest::Approx(1.0));
}

TEST_CASE("gamma of a constant series is zero and singular") {
  const std::vector<double> c(10, 2.0);
  const auto g = build_gamma(estimate_autocov(c, 1), 2);
  CHECK(g.entries.isZero());
  CHECK(g.positive_semidefinite);
  CHECK(g.min_eigenvalue == 0.0);
}

TEST_CASE("gamma with geometric lags is positive definite") {
  const auto g = build_gamma(from_lags({1, 0.5, 0.25}), 3);
  CHECK(g.entries(0, 2) == 0.25);
  CHECK(g.entries(2, 1) == 0.5);
  // Eigenvalues of the symmetric 3x3 Toeplitz matrix [1 .5 .25; .5 1 .5; .25 .5 1]:
  // 0.75 for the antisymmetric vector, and (9 +- sqrt(33))/8 for the symmetric pair.
  const double smallest = (9.0 - std::sqrt(33.0)) / 8.0;
  CHECK(g.min_eigenvalue == doctest::Approx(std::min(0.75, smallest)));
  CHECK(g.min_eigenvalue > 0.0);
}

TEST_CASE("gamma order limited by stored lags") {
  try {
    build_gamma(from_lags({1, 0.5}), 3);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InsufficientData);
  }
}

TEST_CASE("wma variance special cases") {
  const auto iid = from_lags({2.5, 0, 0, 0, 0});
  for (std::size_t w = 1; w <= 5; ++w) {
    CHECK(wma_variance(iid, WeightVector::equal(w)) == doctest::Approx(2.5 / static_cast<double>(w)));
  }
  const std::vector<double> one{1.0};
  CHECK(wma_variance(iid, one) == 2.5);
}

TEST_CASE("wma variance with geometric lags") {
  const std::vector<double> r{1, 0.5, 0.25};
  const std::vector<double> w(3, 1.0 / 3.0);
  const double expected = naive_variance(r, w);
  CHECK(expected == doctest::Approx((3 * 1.0 + 4 * 0.5 + 2 * 0.25) / 9.0));
  CHECK(wma_variance(from_lags(r), w) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(wma_variance(from_lags(r), w) == doctest::Approx(0.6111111111111111));
}
