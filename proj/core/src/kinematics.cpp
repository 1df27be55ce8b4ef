#include "mergesim/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mergesim {

VehicleState step_vehicle(const VehicleState& state, const ControlSignal& ctrl,
                          double dt, const RoadNet& road,
                          const VehicleParams& params) {
    if (dt <= 0.0)
        throw std::invalid_argument("step_vehicle: dt must be positive");
    if (!std::isfinite(ctrl.acceleration) || !std::isfinite(ctrl.steering))
        throw std::invalid_argument("step_vehicle: non-finite control");
    if (state.crashed)
        throw std::logic_error("step_vehicle: crashed vehicle cannot be stepped");

    const double accel = std::clamp(ctrl.acceleration, -params.acc_bound, params.acc_bound);
    const double steer = std::clamp(ctrl.steering, -params.steering_max, params.steering_max);

    VehicleState next = state;
    next.l = state.l + state.speed * std::cos(state.yaw) * dt;
    next.d = state.d + state.speed * std::sin(state.yaw) * dt;
    next.yaw = state.yaw + state.speed * std::tan(steer) / params.wheelbase * dt;
    next.speed = std::max(0.0, state.speed + accel * dt);
    next.lane = road.lane_of(next.d);
    return next;
}

} // namespace mergesim
