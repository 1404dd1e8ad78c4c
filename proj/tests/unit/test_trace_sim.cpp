#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "wmavmd/error.hpp"
#include "wmavmd/stationary_stats.hpp"
#include "wmavmd/trace_sim.hpp"
#include "wmavmd/vmd.hpp"

using namespace wmavmd;
using testing_helpers::cycle_trace;

namespace {

ProfileSpec cruise(double seconds, double speed = 60.0) {
  ProfileSpec p;
  p.initial_speed_kmh = speed;
  p.segments.push_back({Mode::Traction, seconds, speed});
  return p;
}

NoiseSpec noise(std::size_t p, double sigma, double rho, double cross, std::uint64_t seed = 1) {
  NoiseSpec n;
  n.sigma.assign(p, sigma);
  n.rho = rho;
  n.cross = cross;
  n.seed = seed;
  return n;
}

std::vector<double> channel(const Trace& t, std::size_t i) {
  std::vector<double> out;
  for (const auto& f : t.frames) out.push_back(f.velocities[i]);
  return out;
}

}  // namespace

TEST_CASE("noise-free profile follows the base curve exactly") {
  ProfileSpec p;
  p.segments = {{Mode::Stopped, 1, 0}, {Mode::Traction, 10, 50}, {Mode::Braking, 5, 0}};
  const auto sim = generate(p, noise(4, 0.0, 0.5, 0.5));
  CHECK(sim.trace.size() == 160);
  for (std::size_t k = 0; k < sim.trace.size(); ++k) {
    const auto& v = sim.trace.frames[k].velocities;
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(v[i] == sim.base_speed[k]);
      CHECK(vmd(v, i) == 0.0);
    }
  }
  CHECK(sim.base_speed[10 + 99] == doctest::Approx(50.0));
  CHECK(sim.trace.frames[5].mode == Mode::Stopped);
  CHECK(sim.trace.frames[5].velocities[0] == 0.0);
  validate_trace(sim.trace);
}

TEST_CASE("white noise without cross correlation") {
  const auto sim = generate(cruise(2000.0), noise(3, 1.0, 0.0, 0.0, 99));
  for (std::size_t i = 0; i < 3; ++i) {
    const auto a = estimate_autocov(channel(sim.trace, i), 3);
    CHECK(a.lags[0] == doctest::Approx(1.0).epsilon(0.05));
    for (std::size_t l = 1; l <= 3; ++l) CHECK(std::abs(a.lags[l]) < 0.03);
  }
}

TEST_CASE("AR(1) and cross correlation match their targets") {
  const double sigma = 0.3, rho = 0.8, cross = 0.5;
  const auto sim = generate(cruise(5000.0), noise(2, sigma, rho, cross, 5));
  const auto x = channel(sim.trace, 0), y = channel(sim.trace, 1);
  const auto a = estimate_autocov(x, 2);
  CHECK(a.lags[0] == doctest::Approx(sigma * sigma).epsilon(0.1));
  CHECK(a.lags[1] / a.lags[0] == doctest::Approx(rho).epsilon(0.03));
  CHECK(a.lags[2] / a.lags[0] == doctest::Approx(rho * rho).epsilon(0.05));
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
    syy += (y[k] - my) * (y[k] - my);
  }
  CHECK(sxy / std::sqrt(sxx * syy) == doctest::Approx(cross).epsilon(0.1));
}

TEST_CASE("same seed, same trace; different seed, different trace") {
  const auto a = generate(cruise(30.0), noise(4, 0.3, 0.8, 0.5, 77));
  const auto b = generate(cruise(30.0), noise(4, 0.3, 0.8, 0.5, 77));
  const auto c = generate(cruise(30.0), noise(4, 0.3, 0.8, 0.5, 78));
  bool differs = false;
  for (std::size_t k = 0; k < a.trace.size(); ++k) {
    CHECK(a.trace.frames[k].velocities == b.trace.frames[k].velocities);
    differs = differs || a.trace.frames[k].velocities != c.trace.frames[k].velocities;
  }
  CHECK(differs);
}

TEST_CASE("profile and noise validation") {
  ProfileSpec p;
  CHECK_THROWS_AS(p.validate(), Error);
  p.segments = {{Mode::Traction, 5, 30}, {Mode::Stopped, 5, 0}};
  try {
    p.validate();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Spec);
  }
  CHECK_THROWS_AS(noise(1, 0.3, 0.5, 0.5).validate(), Error);
  CHECK_THROWS_AS(noise(2, 0.3, 1.0, 0.5).validate(), Error);
  CHECK_THROWS_AS(noise(2, -1.0, 0.5, 0.5).validate(), Error);
  CHECK(cruise(1.0).total_samples() == 10);
}

TEST_CASE("single-channel slip sits exactly f above the clean trace") {
  const auto clean = generate(cruise(10.0), noise(4, 0.0, 0.0, 0.0));
  InjectionSpec spec;
  spec.events.push_back({{0}, AlarmKind::Slip, 20, 5, {2.0}, 0, 1});
  const auto r = inject(clean.trace, spec);
  for (std::size_t k = 0; k < clean.trace.size(); ++k) {
    const bool active = k >= 20 && k < 25;
    const auto& v = r.trace.frames[k].velocities;
    CHECK(vmd(v, 0) == (active ? 2.0 : 0.0));
    CHECK(v[0] == clean.trace.frames[k].velocities[0] + (active ? 2.0 : 0.0));
  }
  CHECK(r.labels.size() == 5);
  REQUIRE(r.occurrences.size() == 1);
  CHECK(r.occurrences[0].begin == 20);
  CHECK(r.occurrences[0].end == 25);
}

TEST_CASE("faulty trace is the clean trace plus the offsets, bit for bit") {
  const auto sim = cycle_trace(1, 42);
  InjectionSpec spec;
  std::size_t brake = 0;
  while (sim.trace.frames[brake].mode != Mode::Braking) ++brake;
  spec.events.push_back({{0, 1}, AlarmKind::Slip, 700, 4, {0.7, 1.1, 1.3, 0.2}, 10, 3});
  spec.events.push_back({{3}, AlarmKind::Slide, brake + 5, 6, {1.5}, 0, 1});
  const auto r = inject(sim.trace, spec);
  CHECK(r.occurrences.size() == 4);
  for (std::size_t k = 0; k < sim.trace.size(); ++k)
    for (std::size_t i = 0; i < 4; ++i)
      CHECK(r.trace.frames[k].velocities[i] == sim.trace.frames[k].velocities[i] + r.offsets[k][i]);
  // Two-column structure: both faulted channels carry identical offsets.
  for (std::size_t k = 700; k < 704; ++k) {
    CHECK(r.offsets[k][0] == r.offsets[k][1]);
    CHECK(r.offsets[k][2] == 0.0);
  }
  CHECK(r.offsets[brake + 5][3] == -1.5);
}

TEST_CASE("common-mode event leaves every VMD value unchanged") {
  const auto sim = generate(cruise(20.0), noise(4, 0.0, 0.0, 0.0));
  InjectionSpec spec;
  spec.events.push_back({{0, 1, 2, 3}, AlarmKind::Slip, 50, 10, {1.0}, 0, 1});
  const auto r = inject(sim.trace, spec);
  for (std::size_t k = 0; k < sim.trace.size(); ++k)
    for (std::size_t i = 0; i < 4; ++i)
      CHECK(vmd(r.trace.frames[k].velocities, i) == vmd(sim.trace.frames[k].velocities, i));
}

TEST_CASE("injection rejects mode violations and overruns") {
  ProfileSpec p;
  p.initial_speed_kmh = 40;
  p.segments = {{Mode::Braking, 5, 10}};
  const auto sim = generate(p, noise(2, 0.0, 0.0, 0.0));
  InjectionSpec slip_in_brake;
  slip_in_brake.events.push_back({{0}, AlarmKind::Slip, 5, 3, {1.0}, 0, 1});
  try {
    inject(sim.trace, slip_in_brake);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Spec);
  }
  InjectionSpec overrun;
  overrun.events.push_back({{0}, AlarmKind::Slide, 48, 3, {1.0}, 0, 1});
  CHECK_THROWS_AS(inject(sim.trace, overrun), Error);
  InjectionSpec bad_channel;
  bad_channel.events.push_back({{2}, AlarmKind::Slide, 1, 1, {1.0}, 0, 1});
  CHECK_THROWS_AS(inject(sim.trace, bad_channel), Error);
}

TEST_CASE("slides deeper than the speed are clamped with a warning") {
  ProfileSpec p;
  p.initial_speed_kmh = 3;
  p.segments = {{Mode::Braking, 1, 1}};
  const auto sim = generate(p, noise(2, 0.0, 0.0, 0.0));
  InjectionSpec spec;
  spec.events.push_back({{1}, AlarmKind::Slide, 8, 2, {5.0}, 0, 1});
  const auto r = inject(sim.trace, spec);
  CHECK(r.trace.frames[9].velocities[1] == 0.0);
  CHECK(r.clamped[9] == 1);
  CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("offsets widen with zero columns") {
  const std::vector<std::vector<double>> o{{1, 2}, {0, 3}};
  const auto w = widen_offsets(o, 3);
  CHECK(w[0] == std::vector<double>{1, 2, 0});
  CHECK(w[1] == std::vector<double>{0, 3, 0});
}
