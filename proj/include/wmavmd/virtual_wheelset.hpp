#pragma once

#include <span>

#include "wmavmd/detector.hpp"
#include "wmavmd/frame.hpp"

namespace wmavmd {

/// Appends a virtual wheelset as channel p+1.
///
/// Reference policy: the caller supplies the vehicle speed per frame
/// (e.g. from a radar or the traction controller); it is copied in.
///
/// Inertial policy: starts at the median wheelset velocity of the first
/// monitored frame and then follows the median of the real channels with
/// its per-sample change clamped to +/- max_accel * dt. A simultaneous
/// jump of every wheelset is therefore not followed immediately.
///
/// Stopped frames always get 0. Throws Error(InputDomain) when the
/// reference length does not match the trace or the policy is None.
Trace virtual_wheelset(const Trace& trace, const VirtualChannelPolicy& policy,
                       std::span<const double> reference = {});

}  // namespace wmavmd
