#pragma once

#include "mergesim/road.hpp"
#include "mergesim/types.hpp"

namespace mergesim {

struct VehicleParams {
    double wheelbase = 2.5;     // [m]
    double steering_max = 0.6;  // [rad]
    double acc_bound = 8.0;     // |acceleration| clamp [m/s^2]
};

/// Kinematic bicycle update over one physics tick. Position advances along
/// the heading, the heading advances by speed*tan(steering)/wheelbase, and
/// speed is clamped at zero. The lane index is recomputed from d.
VehicleState step_vehicle(const VehicleState& state, const ControlSignal& ctrl,
                          double dt, const RoadNet& road,
                          const VehicleParams& params = {});

} // namespace mergesim
