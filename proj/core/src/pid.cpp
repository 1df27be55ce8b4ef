#include "mergesim/pid.hpp"

#include <algorithm>
#include <cmath>

namespace mergesim {

namespace {

bool lane_move_allowed(const VehicleState& state, int from, int to, const RoadNet& road) {
    if (to < 0 || to >= road.total_lanes()) return false;
    const bool from_ramp = from == road.ramp_lane();
    const bool to_ramp = to == road.ramp_lane();
    if (to_ramp) return false;  // highway vehicles never enter the ramp
    if (from_ramp && !road.in_merge_window(state.l)) return false;
    return true;
}

} // namespace

ControllerState apply_meta_action(const VehicleState& state, MetaAction action,
                                  const RoadNet& road, const ControllerState& ctrl,
                                  const PidParams& params) {
    ControllerState next = ctrl;
    switch (action) {
        case MetaAction::LaneLeft: {
            const int target = ctrl.target_lane - 1;
            if (lane_move_allowed(state, ctrl.target_lane, target, road))
                next.target_lane = target;
            break;
        }
        case MetaAction::LaneRight: {
            const int target = ctrl.target_lane + 1;
            if (lane_move_allowed(state, ctrl.target_lane, target, road))
                next.target_lane = target;
            break;
        }
        case MetaAction::Accelerate:
            next.target_speed = state.speed + params.speed_step;
            break;
        case MetaAction::Decelerate:
            next.target_speed = std::max(0.0, state.speed - params.speed_step);
            break;
        case MetaAction::Idle:
            break;
    }
    return next;
}

ControlSignal pid_control(const VehicleState& state, const ControllerState& ctrl,
                          const RoadNet& road, const PidParams& params) {
    const double v = std::max(state.speed, 1.0);

    const double d_err = road.lane_center(ctrl.target_lane) - state.d;
    const double lateral_speed_cmd = params.k_lateral * d_err;
    const double heading_cmd = std::asin(std::clamp(lateral_speed_cmd / v, -1.0, 1.0));
    const double heading_rate_cmd = params.k_heading * (heading_cmd - state.yaw);
    double steering = std::atan(heading_rate_cmd * params.vehicle.wheelbase / v);
    steering = std::clamp(steering, -params.vehicle.steering_max, params.vehicle.steering_max);

    double accel = params.k_speed * (ctrl.target_speed - state.speed);
    accel = std::clamp(accel, -params.vehicle.acc_bound, params.vehicle.acc_bound);

    return {accel, steering};
}

ControlSignal meta_action_to_controls(const VehicleState& state, MetaAction action,
                                      const RoadNet& road, const PidParams& params) {
    ControllerState ctrl{state.lane, state.speed};
    ctrl = apply_meta_action(state, action, road, ctrl, params);
    return pid_control(state, ctrl, road, params);
}

} // namespace mergesim
