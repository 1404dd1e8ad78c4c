#include <random>

#include "doctest.h"
#include "wmavmd/fuzz.hpp"
#include "wmavmd/stationary_stats.hpp"

using namespace wmavmd;

TEST_CASE("random autocovariances are positive semidefinite") {
  std::mt19937_64 rng(8);
  for (int n = 0; n < 200; ++n) {
    const auto a = fuzz::random_autocov(rng, 6);
    REQUIRE(a.lags.size() == 7);
    CHECK(a.r0() > 0.0);
    CHECK(build_gamma(a, 7).positive_semidefinite);
  }
}

TEST_CASE("operator and solver suites pass on a short run") {
  fuzz::FuzzConfig cfg;
  cfg.iterations = 3000;
  cfg.solver_iterations = 200;
  cfg.seed = 4;
  const auto op = fuzz::run_operator_suite(cfg);
  CHECK(op.passed());
  CHECK(op.properties.count("vmd_triangle") == 1);
  CHECK(op.properties.at("vmd_triangle").cases == 3000);
  const auto sol = fuzz::run_solver_suite(cfg);
  CHECK(sol.passed());
  CHECK(sol.properties.at("owv_oracle_agreement").cases > 0);
  CHECK(sol.to_text().find("owv_kkt_residual") != std::string::npos);
}

TEST_CASE("a corrupted solver is caught with a reproducer") {
  fuzz::FuzzConfig cfg;
  cfg.iterations = 100;
  cfg.solver_iterations = 50;
  cfg.builder = fuzz::corrupted_system_matrix;
  const auto rep = fuzz::run_solver_suite(cfg);
  CHECK_FALSE(rep.passed());
  bool has_reproducer = false;
  for (const auto& [name, stats] : rep.properties) {
    if (stats.violations > 0 && stats.reproducer) has_reproducer = true;
  }
  CHECK(has_reproducer);
  CHECK(rep.to_text().find("FAIL") != std::string::npos);
}

TEST_CASE("fixed seed gives an identical report") {
  fuzz::FuzzConfig cfg;
  cfg.iterations = 500;
  cfg.solver_iterations = 30;
  cfg.seed = 99;
  CHECK(fuzz::run_all(cfg).to_text() == fuzz::run_all(cfg).to_text());
}
