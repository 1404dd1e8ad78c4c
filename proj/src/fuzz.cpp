#include "wmavmd/fuzz.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "wmavmd/vmd.hpp"

namespace wmavmd::fuzz {

namespace {

std::string join(const std::vector<double>& v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << '[';
  for (std::size_t k = 0; k < v.size(); ++k) ss << (k ? ", " : "") << v[k];
  ss << ']';
  return ss.str();
}

void record(FuzzReport& rep, const std::string& name, bool ok,
            const std::function<std::string()>& describe) {
  auto& s = rep.properties[name];
  ++s.cases;
  if (!ok) {
    ++s.violations;
    if (!s.reproducer) s.reproducer = describe();
  }
}

// Operator inputs mix small integers (forcing ties), wide reals and
// occasional large magnitudes.
double random_entry(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 9);
  const int kind = pick(rng);
  if (kind < 3) return static_cast<double>(std::uniform_int_distribution<int>(-5, 5)(rng));
  if (kind < 9) return std::uniform_real_distribution<double>(-1e3, 1e3)(rng);
  return std::uniform_real_distribution<double>(-1e12, 1e12)(rng);
}

struct OperatorCase {
  std::vector<double> x, y;
  double z = 0.0;
  std::size_t channel = 0;

  std::string describe() const {
    std::ostringstream ss;
    ss.precision(17);
    ss << "x=" << join(x) << " y=" << join(y) << " z=" << z << " i=" << (channel + 1);
    return ss.str();
  }
};

/// Names of the operator properties that fail on `c`.
std::vector<std::string> failing_operator_properties(const OperatorCase& c) {
  std::vector<std::string> out;
  for (const auto& r : {check_min_inequalities(c.x, c.y, c.z),
                        check_vmd_properties(c.x, c.y, c.z, c.channel)}) {
    for (const auto& chk : r.checks) {
      if (!chk.passed) out.push_back(chk.name);
    }
  }
  std::vector<double> neg(c.x.size());
  for (std::size_t k = 0; k < c.x.size(); ++k) neg[k] = -c.x[k];
  if (vmd_negated(c.x, c.channel) != vmd(neg, c.channel)) out.push_back("vmd_negated_identity");
  const double v = vmd(c.x, c.channel);
  if (!(v >= 0.0)) out.push_back("vmd_nonnegative");
  bool some_zero = false;
  for (std::size_t i = 0; i < c.x.size(); ++i) some_zero |= vmd(c.x, i) == 0.0;
  if (!some_zero) out.push_back("vmd_some_zero");
  return out;
}

bool still_fails(const OperatorCase& c, const std::string& property) {
  const auto f = failing_operator_properties(c);
  return std::find(f.begin(), f.end(), property) != f.end();
}

/// Greedy shrink: drop entries, then round them, while the property still fails.
OperatorCase shrink(OperatorCase c, const std::string& property) {
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t k = 0; k < c.x.size() && c.x.size() > 2; ++k) {
      OperatorCase t = c;
      t.x.erase(t.x.begin() + static_cast<long>(k));
      t.y.erase(t.y.begin() + static_cast<long>(k));
      if (t.channel == k) continue;
      if (t.channel > k) --t.channel;
      if (still_fails(t, property)) {
        c = t;
        progress = true;
        break;
      }
    }
    if (progress) continue;
    auto try_round = [&](double& slot) {
      const double old = slot;
      const double r = std::round(old);
      if (r == old) return false;
      slot = r;
      if (still_fails(c, property)) return true;
      slot = old;
      return false;
    };
    for (auto& e : c.x) progress |= try_round(e);
    for (auto& e : c.y) progress |= try_round(e);
    progress |= try_round(c.z);
  }
  return c;
}

std::vector<std::string> failing_solver_properties(const AutocovSequence& acov, std::size_t W,
                                                   const FuzzConfig& cfg, std::mt19937_64& rng) {
  std::vector<std::string> out;
  const auto sol = solve_owv_with(acov, W, cfg.builder);
  const auto& a = sol.weights.weights;
  const double r0 = acov.r0();

  if (sol.diagnostics.ill_conditioned) out.push_back("owv_well_conditioned");
  if (std::abs(sol.weights.sum() - 1.0) > 1e-12) out.push_back("owv_unit_sum");

  const auto oracle = qp_oracle(acov, W);
  double dev = 0.0, scale = 0.0;
  for (std::size_t m = 0; m < W; ++m) {
    dev = std::max(dev, std::abs(a[m] - oracle.weights[m]));
    scale = std::max(scale, std::abs(a[m]));
  }
  if (!(dev <= 1e-8)) out.push_back("owv_oracle_agreement");

  for (std::size_t m = 0; m < W; ++m) {
    if (!(std::abs(a[m] - a[W - 1 - m]) <= 1e-10 * scale)) {
      out.push_back("owv_symmetry");
      break;
    }
  }

  double kkt = 0.0;
  for (std::size_t l = 0; l + 1 < W; ++l) {
    double s = 0.0;
    for (std::size_t j = 0; j < W; ++j) {
      const long lj = static_cast<long>(l) - static_cast<long>(j);
      s += a[j] * (acov.at(lj) - acov.at(lj + 1));
    }
    kkt = std::max(kkt, std::abs(s));
  }
  if (!(kkt <= 1e-10 * r0)) out.push_back("owv_kkt_residual");

  const auto pos = positivity_report(acov, W);
  for (std::size_t m = 0; m < W; ++m) {
    if (pos.signs[m] == 0) continue;
    const int s = a[m] > 0.0 ? 1 : (a[m] < 0.0 ? -1 : 0);
    if (s != pos.signs[m]) {
      out.push_back("owv_positivity_sign");
      break;
    }
  }

  if (W > 1) {
    const double best = wma_variance(acov, a);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> trial(W);
    for (std::size_t t = 0; t < cfg.optimality_samples; ++t) {
      // a + d with sum(d) = 0
      double mean = 0.0;
      std::vector<double> d(W);
      for (auto& x : d) mean += (x = normal(rng));
      mean /= static_cast<double>(W);
      const double step = std::pow(10.0, std::uniform_real_distribution<double>(-6, 1)(rng));
      double mx = scale;
      for (std::size_t m = 0; m < W; ++m) {
        trial[m] = a[m] + step * (d[m] - mean);
        mx = std::max(mx, std::abs(trial[m]));
      }
      const double tol = 1e-12 * r0 * static_cast<double>(W * W) * (1.0 + mx * mx);
      if (wma_variance(acov, trial) < best - tol) {
        out.push_back("owv_optimality");
        break;
      }
    }
  }
  return out;
}

std::string describe_solver_case(const AutocovSequence& acov, std::size_t W) {
  std::ostringstream ss;
  ss << "W=" << W << " lags=" << join(acov.lags);
  return ss.str();
}

}  // namespace

AutocovSequence random_autocov(std::mt19937_64& rng, std::size_t max_lag) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  AutocovSequence acov;
  acov.lags.assign(max_lag + 1, 0.0);
  if (unit(rng) < 0.5) {
    std::uniform_int_distribution<int> count(1, 4);
    const int k = count(rng);
    const double floor = 0.05 + 0.95 * unit(rng);
    acov.lags[0] = floor;
    for (int c = 0; c < k; ++c) {
      const double w = unit(rng);
      const double omega = std::numbers::pi * unit(rng);
      for (std::size_t l = 0; l <= max_lag; ++l) {
        acov.lags[l] += w * std::cos(omega * static_cast<double>(l));
      }
    }
    acov.sample_count = 0;
  } else {
    std::uniform_int_distribution<std::size_t> len(std::max<std::size_t>(50, max_lag + 2), 400);
    const std::size_t n = len(rng);
    // Stationary AR(2) from roots inside the unit circle.
    const double r1 = 1.9 * unit(rng) - 0.95, r2 = 1.9 * unit(rng) - 0.95;
    const double a1 = r1 + r2, a2 = -r1 * r2;
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> x(n);
    double x1 = 0.0, x2 = 0.0;
    for (std::size_t burn = 0; burn < 50; ++burn) {
      const double v = a1 * x1 + a2 * x2 + normal(rng);
      x2 = x1;
      x1 = v;
    }
    for (auto& v : x) {
      v = a1 * x1 + a2 * x2 + normal(rng);
      x2 = x1;
      x1 = v;
    }
    acov = estimate_autocov(x, max_lag);
  }
  const double scale = std::pow(10.0, std::uniform_real_distribution<double>(-3, 3)(rng));
  const double r0 = acov.lags[0];
  for (auto& r : acov.lags) r = r / r0 * scale;
  return acov;
}

std::size_t FuzzReport::total_violations() const noexcept {
  std::size_t n = 0;
  for (const auto& [name, s] : properties) n += s.violations;
  return n;
}

std::string FuzzReport::to_text() const {
  std::ostringstream ss;
  for (const auto& [name, s] : properties) {
    ss << name << ": cases=" << s.cases << " violations=" << s.violations << '\n';
    if (s.reproducer) ss << "  reproducer: " << *s.reproducer << '\n';
  }
  ss << (passed() ? "PASS" : "FAIL") << " total_violations=" << total_violations() << '\n';
  return ss.str();
}

FuzzReport run_operator_suite(const FuzzConfig& cfg) {
  FuzzReport rep;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::size_t> dim(2, 8);
  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    OperatorCase c;
    const std::size_t p = dim(rng);
    c.x.resize(p);
    c.y.resize(p);
    for (auto& e : c.x) e = random_entry(rng);
    for (auto& e : c.y) e = random_entry(rng);
    c.z = random_entry(rng);
    c.channel = std::uniform_int_distribution<std::size_t>(0, p - 1)(rng);

    const auto failed = failing_operator_properties(c);
    for (const char* name :
         {"min_scaling", "min_superadditive", "min_subtractive", "vmd_zero_iff_min",
          "vmd_translation", "vmd_scaling", "vmd_triangle", "vmd_reverse_triangle",
          "vmd_negated_identity", "vmd_nonnegative", "vmd_some_zero"}) {
      const bool ok = std::find(failed.begin(), failed.end(), name) == failed.end();
      record(rep, name, ok, [&] { return shrink(c, name).describe(); });
    }

    // Scalar min identities on small integers.
    std::uniform_int_distribution<int> small(-4, 4);
    const double a = small(rng), b = small(rng), cc = small(rng), d = small(rng);
    const auto s = check_scalar_min(a, b, cc, d);
    record(rep, "scalar_min_cases", s.consistent(), [&] {
      std::ostringstream ss;
      ss << "a=" << a << " b=" << b << " c=" << cc << " d=" << d;
      return ss.str();
    });
  }
  return rep;
}

FuzzReport run_solver_suite(const FuzzConfig& cfg) {
  FuzzReport rep;
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  const char* names[] = {"owv_well_conditioned", "owv_unit_sum",       "owv_oracle_agreement",
                         "owv_symmetry",         "owv_kkt_residual",   "owv_positivity_sign",
                         "owv_optimality"};
  for (std::size_t it = 0; it < cfg.solver_iterations; ++it) {
    const auto acov = random_autocov(rng, cfg.max_window);
    double prev_var = 0.0;
    for (std::size_t W = 1; W <= cfg.max_window; ++W) {
      const auto failed = failing_solver_properties(acov, W, cfg, rng);
      for (const char* name : names) {
        const bool ok = std::find(failed.begin(), failed.end(), name) == failed.end();
        record(rep, name, ok, [&] {
          // shrink to the smallest window that still fails
          for (std::size_t w = 1; w < W; ++w) {
            std::mt19937_64 r2(cfg.seed);
            const auto f2 = failing_solver_properties(acov, w, cfg, r2);
            if (std::find(f2.begin(), f2.end(), name) != f2.end()) {
              return describe_solver_case(acov, w);
            }
          }
          return describe_solver_case(acov, W);
        });
      }
      const double var = solve_owv_with(acov, W, cfg.builder).diagnostics.variance;
      if (W > 1) {
        const bool ok = var <= prev_var + 1e-12 * acov.r0() * static_cast<double>(W * W);
        record(rep, "owv_variance_non_increasing", ok,
               [&] { return describe_solver_case(acov, W); });
      }
      prev_var = var;
    }
  }
  return rep;
}

FuzzReport run_all(const FuzzConfig& cfg) {
  auto rep = run_operator_suite(cfg);
  for (auto& [name, s] : run_solver_suite(cfg).properties) rep.properties[name] = s;
  return rep;
}

Eigen::MatrixXd corrupted_system_matrix(const AutocovSequence& acov, std::size_t window) {
  Eigen::MatrixXd a = owv_system_matrix(acov, window);
  a(0, 0) = -a(0, 0);
  return a;
}

}  // namespace wmavmd::fuzz
