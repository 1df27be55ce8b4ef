#pragma once

#include <cstdint>
#include <stdexcept>

namespace mergesim {

/// Abstract maneuver decided at the policy rate. Codes are stable and used
/// both as network output indices and in serialized action histories.
enum class MetaAction : int {
    LaneLeft = 0,
    Idle = 1,
    LaneRight = 2,
    Accelerate = 3,
    Decelerate = 4,
};

inline constexpr int kNumActions = 5;

inline MetaAction meta_action_from_code(int code) {
    if (code < 0 || code >= kNumActions)
        throw std::out_of_range("meta action code out of range");
    return static_cast<MetaAction>(code);
}

/// Kinematic state of a single vehicle in road (Frenet) coordinates.
struct VehicleState {
    int id = 0;
    double l = 0.0;       // longitudinal position [m]
    double d = 0.0;       // lateral position from the left road edge [m]
    double speed = 0.0;   // forward speed [m/s], never negative
    double yaw = 0.0;     // heading relative to the road axis [rad]
    int lane = 0;         // derived from d
    bool autonomous = false;  // lambda flag: 0 human, 1 autonomous
    bool is_mission = false;
    double length = 5.0;  // [m]
    double width = 2.0;   // [m]
    bool crashed = false; // monotone within an episode
};

struct ControlSignal {
    double acceleration = 0.0;  // [m/s^2]
    double steering = 0.0;      // [rad]
};

} // namespace mergesim
