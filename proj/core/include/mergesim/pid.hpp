#pragma once

#include "mergesim/kinematics.hpp"
#include "mergesim/road.hpp"
#include "mergesim/types.hpp"

namespace mergesim {

struct PidParams {
    double k_lateral = 1.5;   // lateral error -> lateral speed command [1/s]
    double k_heading = 5.0;   // heading error -> heading rate command [1/s]
    double k_speed = 1.0;     // speed error -> acceleration [1/s]
    double speed_step = 5.0;  // Accelerate/Decelerate setpoint change [m/s]
    VehicleParams vehicle;
};

/// Setpoints tracked between policy decisions. A meta-action updates the
/// setpoints once; the PID runs against them at the physics rate.
struct ControllerState {
    int target_lane = 0;
    double target_speed = 0.0;
};

/// Resolves a meta-action into new tracking setpoints. Degenerate actions
/// (lane change off the road edge, ramp exit outside the merge window)
/// resolve to Idle.
ControllerState apply_meta_action(const VehicleState& state, MetaAction action,
                                  const RoadNet& road, const ControllerState& ctrl,
                                  const PidParams& params);

/// Lateral position -> heading -> steering cascade plus proportional speed
/// tracking. Outputs are clamped to the vehicle limits.
ControlSignal pid_control(const VehicleState& state, const ControllerState& ctrl,
                          const RoadNet& road, const PidParams& params);

/// One-shot form: derive setpoints from the action and current state, then
/// evaluate the controller.
ControlSignal meta_action_to_controls(const VehicleState& state, MetaAction action,
                                      const RoadNet& road, const PidParams& params);

} // namespace mergesim
