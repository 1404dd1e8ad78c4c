#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "wmavmd/error.hpp"
#include "wmavmd/vmd.hpp"

using namespace wmavmd;

namespace {

double oracle_vmd(const std::vector<double>& v, std::size_t i) {
  double lo = v[0];
  for (double x : v) lo = x < lo ? x : lo;
  return v[i] - lo;
}

}  // namespace

TEST_CASE("vmd on hand-checked vectors") {
  const std::vector<double> flat{5, 5, 5, 5};
  const std::vector<double> v{10, 12, 9, 9};
  CHECK(vmd(flat, 1) == 0.0);
  CHECK(vmd(v, 1) == 3.0);
  CHECK(vmd(v, 2) == 0.0);
  CHECK(vmd(v, 0) == 1.0);
}

TEST_CASE("vmd_negated is the max-based form") {
  const std::vector<double> v{10, 12, 9, 9};
  CHECK(vmd_negated(v, 2) == 3.0);
  CHECK(vmd_negated(v, 1) == 0.0);
  const std::vector<double> c(6, 42.5);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(vmd_negated(c, i) == 0.0);
}

TEST_CASE("vmd_negated equals vmd of the negated vector") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-100, 100);
  for (int n = 0; n < 500; ++n) {
    std::vector<double> v(5), neg(5);
    for (std::size_t k = 0; k < v.size(); ++k) {
      v[k] = u(rng);
      neg[k] = -v[k];
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      CHECK(vmd_negated(v, i) == vmd(neg, i));
      CHECK(vmd(v, i) == oracle_vmd(v, i));
    }
  }
}

TEST_CASE("vmd_all matches the scalar forms") {
  const std::vector<double> v{3.5, -1.0, 7.25, 0.0};
  std::vector<double> out(4);
  vmd_all(v, +1, out);
  for (std::size_t i = 0; i < 4; ++i) CHECK(out[i] == vmd(v, i));
  vmd_all(v, -1, out);
  for (std::size_t i = 0; i < 4; ++i) CHECK(out[i] == vmd_negated(v, i));
}

TEST_CASE("vmd rejects bad input") {
  const std::vector<double> v{1, 2, 3};
  CHECK_THROWS_AS(vmd(v, 3), Error);
  try {
    vmd(v, 5);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Index);
  }
  const std::vector<double> bad{1, std::numeric_limits<double>::quiet_NaN(), 3};
  try {
    vmd(bad, 0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InputDomain);
  }
  const std::vector<double> inf{1, std::numeric_limits<double>::infinity()};
  CHECK_THROWS_AS(vmd_negated(inf, 0), Error);
}

TEST_CASE("min inequalities: equality when both minima share an index") {
  const std::vector<double> x{1, 2}, y{3, 4};
  const auto r = check_min_inequalities(x, y, 2.0);
  CHECK(r.all_passed());
  const auto* sup = r.find("min_superadditive");
  REQUIRE(sup != nullptr);
  CHECK(sup->lhs == 4.0);
  CHECK(sup->rhs == 4.0);
}

TEST_CASE("min inequalities: strict superadditivity") {
  const std::vector<double> x{1, 5}, y{6, 2};
  const auto r = check_min_inequalities(x, y, -3.0);
  CHECK(r.all_passed());
  const auto* sup = r.find("min_superadditive");
  REQUIRE(sup != nullptr);
  CHECK(sup->lhs == 3.0);
  CHECK(sup->rhs == 7.0);
}

TEST_CASE("min inequalities reject length mismatch") {
  const std::vector<double> x{1, 2}, y{1, 2, 3};
  CHECK_THROWS_AS(check_min_inequalities(x, y, 1.0), Error);
}

TEST_CASE("vmd translation invariance") {
  const std::vector<double> x{1, 2, 3}, y{0, 0, 0};
  const auto r = check_vmd_properties(x, y, 7.0, 1);
  CHECK(r.all_passed());
  const auto* t = r.find("vmd_translation");
  REQUIRE(t != nullptr);
  CHECK(t->lhs == 1.0);
  CHECK(t->rhs == 1.0);
}

TEST_CASE("vmd scaling by a negative factor uses the negated vector") {
  const std::vector<double> x{1, 2, 3}, y{3, 1, 2};
  const auto r = check_vmd_properties(x, y, -2.0, 0);
  CHECK(r.all_passed());
  const auto* s = r.find("vmd_scaling");
  REQUIRE(s != nullptr);
  CHECK(s->lhs == 4.0);
  CHECK(s->rhs == 4.0);
  const std::vector<double> scaled{-2, -4, -6};
  CHECK(vmd(scaled, 0) == 4.0);
}

TEST_CASE("vmd properties hold on random tuples") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-50, 50);
  std::uniform_int_distribution<std::size_t> len(2, 8);
  for (int n = 0; n < 2000; ++n) {
    const std::size_t p = len(rng);
    std::vector<double> x(p), y(p);
    for (auto& e : x) e = u(rng);
    for (auto& e : y) e = u(rng);
    const double z = u(rng);
    CHECK(check_min_inequalities(x, y, z).all_passed());
    for (std::size_t i = 0; i < p; ++i) CHECK(check_vmd_properties(x, y, z, i).all_passed());
  }
}

TEST_CASE("scalar min equality cases are exhaustive on small integers") {
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b)
      for (int c = -3; c <= 3; ++c)
        for (int d = -3; d <= 3; ++d) {
          const auto r = check_scalar_min(a, b, c, d);
          // Independent evaluation of both sides.
          const int sup_l = std::min(a, b) + std::min(c, d);
          const int sup_r = std::min(a + c, b + d);
          const int sub_l = std::min(a - c, b - d);
          const int sub_r = std::min(a, b) - std::min(c, d);
          CHECK(sup_l <= sup_r);
          CHECK(sub_l <= sub_r);
          CHECK(r.superadditive_equal == (sup_l == sup_r));
          CHECK(r.subtractive_equal == (sub_l == sub_r));
          CHECK(r.consistent());
        }
}

TEST_CASE("property tolerance scales with magnitude") {
  const double eps = std::numeric_limits<double>::epsilon();
  CHECK(property_tolerance(0.0) == 4 * eps);
  CHECK(property_tolerance(1e6) == doctest::Approx(4 * eps * 1e6));
}
