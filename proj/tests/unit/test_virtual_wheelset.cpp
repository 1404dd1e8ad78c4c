#include <algorithm>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "wmavmd/error.hpp"
#include "wmavmd/virtual_wheelset.hpp"
#include "wmavmd/vmd.hpp"

using namespace wmavmd;
using testing_helpers::cycle_trace;
using testing_helpers::make_trace;

TEST_CASE("reference policy appends the supplied speed") {
  const auto t = make_trace({{10, 11}, {0, 0}, {12, 12.5}},
                            {Mode::Traction, Mode::Stopped, Mode::Traction});
  const std::vector<double> ref{10.5, 0.2, 12.2};
  const auto out = virtual_wheelset(t, VirtualChannelPolicy::parse("reference"), ref);
  REQUIRE(out.channels() == 3);
  CHECK(out.frames[0].velocities[2] == 10.5);
  CHECK(out.frames[1].velocities[2] == 0.0);
  CHECK(out.frames[2].velocities[2] == 12.2);
  const std::vector<double> short_ref{1.0};
  CHECK_THROWS_AS(virtual_wheelset(t, VirtualChannelPolicy::parse("reference"), short_ref), Error);
  CHECK_THROWS_AS(virtual_wheelset(t, VirtualChannelPolicy{}), Error);
}

TEST_CASE("a consensus copy leaves every real VMD value unchanged") {
  const auto sim = cycle_trace(1, 3);
  const auto out = virtual_wheelset(sim.trace, VirtualChannelPolicy::parse("inertial:1000"));
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto& real = sim.trace.frames[k].velocities;
    const auto& aug = out.frames[k].velocities;
    for (std::size_t i = 0; i < real.size(); ++i) {
      CHECK(vmd(aug, i) == vmd(real, i));
      CHECK(vmd_negated(aug, i) == vmd_negated(real, i));
    }
  }
}

TEST_CASE("inertial estimate tracks constant acceleration exactly") {
  std::vector<std::vector<double>> rows;
  for (int k = 0; k < 50; ++k) {
    const double v = 20.0 + 0.25 * k;  // 2.5 km/h/s at 0.1 s
    rows.push_back({v, v, v, v});
  }
  const auto t = make_trace(rows, {Mode::Traction});
  const auto out = virtual_wheelset(t, VirtualChannelPolicy::parse("inertial:5"));
  for (std::size_t k = 0; k < t.size(); ++k) CHECK(out.frames[k].velocities[4] == rows[k][0]);
}

TEST_CASE("inertial estimate does not follow a common jump at once") {
  std::vector<std::vector<double>> rows(10, {30, 30, 30});
  for (std::size_t k = 5; k < 10; ++k) rows[k] = {33, 33, 33};
  const auto t = make_trace(rows, {Mode::Traction});
  const auto out = virtual_wheelset(t, VirtualChannelPolicy::parse("inertial:5"));
  CHECK(out.frames[4].velocities[3] == 30.0);
  CHECK(out.frames[5].velocities[3] == doctest::Approx(30.5));
  CHECK(out.frames[6].velocities[3] == doctest::Approx(31.0));
  // The faulted real channels now sit above the virtual one.
  CHECK(vmd(out.frames[5].velocities, 0) == doctest::Approx(2.5));
}
