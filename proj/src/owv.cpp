#include "wmavmd/owv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wmavmd/error.hpp"

namespace wmavmd {

namespace {

void require_window(const AutocovSequence& acov, std::size_t window) {
  if (window == 0) throw Error(ErrorKind::InputDomain, "window length must be at least 1");
  if (window > acov.lags.size()) {
    throw Error(ErrorKind::InsufficientData,
                "window " + std::to_string(window) + " needs lags up to " +
                    std::to_string(window - 1) + ", have " + std::to_string(acov.max_lag()));
  }
}

double normalized_lag(const AutocovSequence& acov, long lag) {
  return acov.lags[static_cast<std::size_t>(std::labs(lag))] / acov.r0();
}

Eigen::MatrixXd normalized_gamma(const AutocovSequence& acov, std::size_t window) {
  const auto n = static_cast<Eigen::Index>(window);
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index l = 0; l < n; ++l) {
    for (Eigen::Index j = 0; j < n; ++j) g(l, j) = normalized_lag(acov, l - j);
  }
  return g;
}

bool symmetric(const WeightVector& w) {
  const auto& a = w.weights;
  double scale = 0.0;
  for (double x : a) scale = std::max(scale, std::abs(x));
  for (std::size_t m = 0; m < a.size(); ++m) {
    if (std::abs(a[m] - a[a.size() - 1 - m]) > 1e-10 * scale) return false;
  }
  return true;
}

double factorial(std::size_t n) {
  double f = 1.0;
  for (std::size_t k = 2; k <= n; ++k) f *= static_cast<double>(k);
  return f;
}

}  // namespace

double WeightVector::sum() const noexcept {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

WeightVector WeightVector::equal(std::size_t window) {
  return {std::vector<double>(window, 1.0 / static_cast<double>(window))};
}

bool PositivityReport::all_positive() const noexcept {
  return !signs.empty() && std::all_of(signs.begin(), signs.end(), [](int s) { return s > 0; });
}

bool OwvDiagnostics::owv_positive() const noexcept {
  if (degenerate || ill_conditioned) return true;  // equal weights
  return positivity.all_positive();
}

Eigen::MatrixXd owv_system_matrix(const AutocovSequence& acov, std::size_t window) {
  require_window(acov, window);
  const auto n = static_cast<Eigen::Index>(window);
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index l = 0; l + 1 < n; ++l) {
    for (Eigen::Index j = 0; j < n; ++j) {
      a(l, j) = normalized_lag(acov, l - j) - normalized_lag(acov, l + 1 - j);
    }
  }
  a.row(n - 1).setOnes();
  return a;
}

OwvSolution solve_owv(const AutocovSequence& acov, std::size_t window) {
  return solve_owv_with(acov, window, owv_system_matrix);
}

OwvSolution solve_owv_with(const AutocovSequence& acov, std::size_t window,
                           const SystemBuilder& builder) {
  require_window(acov, window);
  OwvSolution out;
  auto& diag = out.diagnostics;

  if (!(acov.r0() > 0.0)) {
    out.weights = WeightVector::equal(window);
    diag.degenerate = true;
    diag.is_unique = false;
    diag.positivity.signs.assign(window, 1);
    diag.variance = 0.0;
    return out;
  }

  const Eigen::MatrixXd a = builder(acov, window);
  const auto n = static_cast<Eigen::Index>(window);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
  const double pivot_ratio = pivots.maxCoeff() > 0.0 ? pivots.minCoeff() / pivots.maxCoeff() : 0.0;
  const double rcond = std::min(lu.rcond(), pivot_ratio);
  diag.condition_estimate = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(diag.condition_estimate <= kMaxOwvCondition)) {
    out.weights = WeightVector::equal(window);
    diag.ill_conditioned = true;
    diag.is_unique = false;
  } else {
    const Eigen::VectorXd x = lu.solve(b);
    out.weights.weights.assign(x.data(), x.data() + x.size());
  }

  diag.is_symmetric = symmetric(out.weights);
  diag.positivity = positivity_report(acov, window);
  diag.variance = wma_variance(acov, out.weights);
  return out;
}

WeightVector qp_oracle(const AutocovSequence& acov, std::size_t window) {
  require_window(acov, window);
  if (window == 1) return {{1.0}};
  if (!(acov.r0() > 0.0)) return WeightVector::equal(window);

  // a = e_W + Z u with Z = [I; -1^T], so a_j = u_j (j < W), a_W = 1 - sum u.
  const Eigen::MatrixXd g = normalized_gamma(acov, window);
  const auto n = static_cast<Eigen::Index>(window);
  const Eigen::Index m = n - 1;
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, m);
  z.topRows(m).setIdentity();
  z.row(n - 1).setConstant(-1.0);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
  c(n - 1) = 1.0;

  // f(u) = (c + Zu)^T G (c + Zu); gradient 2 Z^T G (c + Zu), Hessian 2 Z^T G Z.
  const Eigen::MatrixXd h = z.transpose() * g * z;
  const Eigen::VectorXd lin = z.transpose() * g * c;

  Eigen::VectorXd u = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(window));
  const int max_rounds = 50;
  for (int round = 0; round < max_rounds; ++round) {
    Eigen::VectorXd r = -(h * u + lin);
    if (r.norm() <= 1e-15 * (1.0 + lin.norm())) break;
    Eigen::VectorXd d = r;
    for (Eigen::Index it = 0; it < m; ++it) {
      const Eigen::VectorXd hd = h * d;
      const double curvature = d.dot(hd);
      if (!(curvature > 0.0)) break;
      const double rr = r.dot(r);
      const double step = rr / curvature;
      u += step * d;
      r -= step * hd;
      const double beta = r.dot(r) / rr;
      d = r + beta * d;
    }
  }

  WeightVector out;
  out.weights.resize(window);
  for (Eigen::Index j = 0; j < m; ++j) out.weights[static_cast<std::size_t>(j)] = u(j);
  out.weights[window - 1] = 1.0 - u.sum();
  return out;
}

PositivityReport positivity_report(const AutocovSequence& acov, std::size_t window) {
  require_window(acov, window);
  PositivityReport rep;
  rep.zero_threshold = 1e-12 * factorial(window);
  if (!(acov.r0() > 0.0)) {
    rep.signs.assign(window, 1);
    rep.determinants.assign(window, 0.0);
    return rep;
  }
  const Eigen::MatrixXd g = normalized_gamma(acov, window);
  for (std::size_t m = 0; m < window; ++m) {
    Eigen::MatrixXd check = g;
    check.col(static_cast<Eigen::Index>(m)).setOnes();
    const double det = Eigen::PartialPivLU<Eigen::MatrixXd>(check).determinant();
    rep.determinants.push_back(det);
    rep.signs.push_back(std::abs(det) <= rep.zero_threshold ? 0 : (det > 0.0 ? 1 : -1));
  }
  return rep;
}

}  // namespace wmavmd
