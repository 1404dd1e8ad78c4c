#pragma once

#include <vector>

#include "wmavmd/frame.hpp"
#include "wmavmd/trace_sim.hpp"

namespace testing_helpers {

inline wmavmd::Trace make_trace(const std::vector<std::vector<double>>& rows,
                                const std::vector<wmavmd::Mode>& modes, double dt = 0.1) {
  wmavmd::Trace t;
  t.sample_interval_s = dt;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    t.frames.push_back({k, rows[k], modes.size() == 1 ? modes[0] : modes[k]});
  }
  return t;
}

inline wmavmd::Trace constant_trace(std::size_t n, std::vector<double> v, wmavmd::Mode mode) {
  return make_trace(std::vector<std::vector<double>>(n, std::move(v)), {mode});
}

/// Cruise-and-brake cycles with AR(1) equicorrelated noise on four channels.
inline wmavmd::SimulatedTrace cycle_trace(std::size_t cycles, std::uint64_t seed, double sigma = 0.3,
                                          double rho = 0.8, double cross = 0.5) {
  wmavmd::ProfileSpec prof;
  for (std::size_t c = 0; c < cycles; ++c) {
    prof.segments.push_back({wmavmd::Mode::Traction, 60, 80});
    prof.segments.push_back({wmavmd::Mode::Coasting, 30, 78});
    prof.segments.push_back({wmavmd::Mode::Braking, 60, 0.5});
    prof.segments.push_back({wmavmd::Mode::Braking, 1, 0});
    prof.segments.push_back({wmavmd::Mode::Stopped, 5, 0});
  }
  wmavmd::NoiseSpec noise;
  noise.sigma.assign(4, sigma);
  noise.rho = rho;
  noise.cross = cross;
  noise.seed = seed;
  return wmavmd::generate(prof, noise);
}

}  // namespace testing_helpers
