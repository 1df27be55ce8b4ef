#pragma once

#include "mergesim/episode_init.hpp"

#include <limits>

namespace mergesim {

struct IdmParams {
    double v_set = 25.0;      // set speed [m/s]
    double t_set = 0.5;       // set time gap [s]
    double d0 = 1.0;          // minimum gap distance [m]
    double acc_max = 3.0;     // maximum acceleration [m/s^2]
    double acc_des = -5.0;    // comfortable braking; magnitude used under the radical
    double acc_brake_max = 8.0;  // hard clamp on braking [m/s^2]
    double sigma_vel = 0.2;   // velocity noise std [m/s], 0 disables
    double dt = 1.0 / 15.0;   // simulation time step [s]
};

inline constexpr double kNoLeader = std::numeric_limits<double>::infinity();

/// Desired gap d* to the leader; approach_rate is ego speed minus leader
/// speed. Clamped at zero for strongly negative approach rates.
double desired_gap(double ego_speed, double approach_rate, const IdmParams& p);

/// IDM longitudinal acceleration; gap is bumper-to-bumper, kNoLeader when
/// the lane ahead is free. Output clamped to [-acc_brake_max, acc_max].
double idm_acceleration(double ego_speed, double gap, double approach_rate, const IdmParams& p);

/// Adds the per-step velocity noise term (sigma_vel / dt) * N(0,1).
double noisy_acceleration(double accel, const IdmParams& p, Rng& rng);

} // namespace mergesim
