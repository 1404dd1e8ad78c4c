#include "wmavmd/vmd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wmavmd/error.hpp"

namespace wmavmd {

namespace {

void require_valid(std::span<const double> v, std::size_t channel) {
  if (v.empty()) throw Error(ErrorKind::InputDomain, "empty velocity vector");
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(ErrorKind::InputDomain, "non-finite entry in velocity vector");
  }
  if (channel >= v.size()) {
    throw Error(ErrorKind::Index, "channel " + std::to_string(channel + 1) + " out of range 1.." +
                                      std::to_string(v.size()));
  }
}

double min_of(std::span<const double> v) { return *std::min_element(v.begin(), v.end()); }
double max_of(std::span<const double> v) { return *std::max_element(v.begin(), v.end()); }

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::vector<double> scaled(std::span<const double> v, double z) {
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x *= z;
  return out;
}

void require_same_length(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) {
    throw Error(ErrorKind::InputDomain, "property check needs two non-empty vectors of equal length");
  }
  for (double e : x) {
    if (!std::isfinite(e)) throw Error(ErrorKind::InputDomain, "non-finite entry");
  }
  for (double e : y) {
    if (!std::isfinite(e)) throw Error(ErrorKind::InputDomain, "non-finite entry");
  }
}

PropertyCheck leq(std::string name, double lhs, double rhs, double tol) {
  return {std::move(name), lhs <= rhs + tol, lhs, rhs};
}

PropertyCheck near(std::string name, double lhs, double rhs, double tol) {
  return {std::move(name), std::abs(lhs - rhs) <= tol, lhs, rhs};
}

}  // namespace

double vmd(std::span<const double> v, std::size_t channel) {
  require_valid(v, channel);
  return v[channel] - min_of(v);
}

double vmd_negated(std::span<const double> v, std::size_t channel) {
  require_valid(v, channel);
  return max_of(v) - v[channel];
}

void vmd_all(std::span<const double> v, int sign, std::span<double> out) noexcept {
  if (sign >= 0) {
    const double lo = min_of(v);
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] - lo;
  } else {
    const double hi = max_of(v);
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = hi - v[i];
  }
}

double property_tolerance(double magnitude) noexcept {
  return 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, magnitude);
}

bool PropertyReport::all_passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const PropertyCheck* PropertyReport::find(const std::string& name) const noexcept {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ScalarMinReport check_scalar_min(double a, double b, double c, double d) {
  ScalarMinReport r;
  r.associativity = std::min(std::min(a, b), c) == std::min({a, b, c});
  r.shift = std::min(a + c, a + d) == a + std::min(c, d);

  const double sum_lhs = std::min(a, b) + std::min(c, d);
  const double sum_rhs = std::min(a + c, b + d);
  r.superadditive = sum_lhs <= sum_rhs;
  r.superadditive_equal = sum_lhs == sum_rhs;
  r.superadditive_predicted = a == b || c == d || (a < b && c < d) || (b < a && d < c);

  const double diff_lhs = std::min(a - c, b - d);
  const double diff_rhs = std::min(a, b) - std::min(c, d);
  r.subtractive = diff_lhs <= diff_rhs;
  r.subtractive_equal = diff_lhs == diff_rhs;
  r.subtractive_predicted = c == d || (a <= b && c < d && a - c <= b - d) ||
                            (b <= a && d < c && b - d <= a - c);
  return r;
}

PropertyReport check_min_inequalities(std::span<const double> x, std::span<const double> y,
                                      double z) {
  require_same_length(x, y);
  if (!std::isfinite(z)) throw Error(ErrorKind::InputDomain, "non-finite scalar");
  const std::size_t p = x.size();
  std::vector<double> sum(p), diff(p);
  for (std::size_t k = 0; k < p; ++k) {
    sum[k] = x[k] + y[k];
    diff[k] = x[k] - y[k];
  }
  const double mag = std::max({max_abs(x), max_abs(y), max_abs(sum), max_abs(diff),
                               std::abs(z) * max_abs(x)});
  const double tol = property_tolerance(mag);

  PropertyReport rep;
  const auto zx = scaled(x, z);
  const double scaled_rhs = z >= 0.0 ? z * min_of(x) : z * max_of(x);
  rep.checks.push_back(near("min_scaling", min_of(zx), scaled_rhs, tol));
  rep.checks.push_back(leq("min_superadditive", min_of(x) + min_of(y), min_of(sum), tol));
  rep.checks.push_back(leq("min_subtractive", min_of(diff), min_of(x) - min_of(y), tol));
  return rep;
}

PropertyReport check_vmd_properties(std::span<const double> x, std::span<const double> y,
                                    double z, std::size_t channel) {
  require_same_length(x, y);
  if (!std::isfinite(z)) throw Error(ErrorKind::InputDomain, "non-finite scalar");
  if (channel >= x.size()) throw Error(ErrorKind::Index, "channel out of range");
  const std::size_t p = x.size();
  std::vector<double> sum(p), diff(p), shifted(p), neg(p);
  for (std::size_t k = 0; k < p; ++k) {
    sum[k] = x[k] + y[k];
    diff[k] = x[k] - y[k];
    shifted[k] = x[k] + z;
    neg[k] = -x[k];
  }
  const auto zx = scaled(x, z);
  const double mag = std::max({max_abs(x), max_abs(y), max_abs(sum), max_abs(diff),
                               max_abs(shifted), max_abs(zx)});
  const double tol = property_tolerance(mag);

  PropertyReport rep;
  const double vx = vmd(x, channel);
  const double vy = vmd(y, channel);

  rep.checks.push_back({"vmd_zero_iff_min", (vx == 0.0) == (x[channel] == min_of(x)), vx,
                        x[channel] - min_of(x)});
  rep.checks.push_back(near("vmd_translation", vmd(shifted, channel), vx, tol));
  const double scale_rhs = z >= 0.0 ? z * vx : -z * vmd(neg, channel);
  rep.checks.push_back(near("vmd_scaling", vmd(zx, channel), scale_rhs, tol));
  rep.checks.push_back(leq("vmd_triangle", vmd(sum, channel), vx + vy, tol));
  rep.checks.push_back(leq("vmd_reverse_triangle", vx - vy, vmd(diff, channel), tol));
  return rep;
}

}  // namespace wmavmd
