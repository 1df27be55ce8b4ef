#pragma once

#include <utility>
#include <vector>

namespace mergesim {

/// Social value orientation parameters of one agent.
struct SvoParams {
    double phi = 0.0;              // SVO angle [rad], 0 = egoistic
    double theta = 0.78539816339744830961;  // sympathy angle [rad], pi/4
    double eta = 1.0;              // sympathy distance-scaling coefficient
    double psi = 1.0;              // sympathy distance exponent
    double mission_gain = 10.0;    // scales the mission bonus in the social channels
};

struct EgoisticWeights {
    double w_speed = 0.5;
    double w_distance = 0.3;
    double w_accel_cost = 0.1;
    double w_lane_change_cost = 0.1;
    double v_min = 10.0;          // speed-normalization window [m/s]
    double v_max = 30.0;
    double accel_norm = 8.0;      // |delta a| normalizer [m/s^2]
    double crash_penalty = -1.0;
};

/// What one decision step looked like from the ego vehicle's own frame.
struct EgoStepSummary {
    double speed = 0.0;           // [m/s] at step end
    double distance = 0.0;        // longitudinal progress this step [m]
    double decision_dt = 1.0;     // [s]
    double accel_change = 0.0;    // |a_t - a_{t-1}| [m/s^2]
    bool lane_changed = false;
    bool crashed = false;         // crash occurred during this step
};

/// Per-step reward components of one agent (all dimensionless utilities).
struct RewardBreakdown {
    double egoistic = 0.0;        // r_i
    double cooperation = 0.0;     // sum over visible allies
    double sympathy = 0.0;        // distance-weighted sum over visible HVs
    double mission_direct = 0.0;  // ego-is-mission merge bonus
    double mission_coop_bonus = 0.0;   // mission bonus routed into the AV channel
    double mission_symp_bonus = 0.0;   // mission bonus routed into the HV channel
    double total = 0.0;
};

double normalized_speed(double speed, const EgoisticWeights& w);

/// r_i: weighted speed/progress utility minus smoothness costs; a crash
/// during the step overrides everything with the crash penalty.
double egoistic_reward(const EgoStepSummary& step, const EgoisticWeights& w);

/// Ally utility as reconstructable from a shared observation: speed and the
/// progress it implies, nothing that needs the ally's internals.
double remote_ally_utility(double speed, const EgoisticWeights& w);

struct ObservedVehicle {
    double utility = 0.0;   // u_k for HVs, remote ally utility for AVs
    double distance = 0.0;  // Euclidean distance to ego [m], > 0
};

/// Sum of u_k / (eta * d^psi) over visible HVs.
double sympathy_reward(const std::vector<ObservedVehicle>& visible_hvs, const SvoParams& p);

/// Plain sum of visible allies' utilities; the caller never includes ego.
double cooperation_reward(const std::vector<ObservedVehicle>& visible_avs);

/// Direct mission term: 1/2 for the merging agent itself on success.
double mission_reward(bool merge_success, bool ego_is_mission);

/// Mission bonus entering the social channels of a non-mission AV: scaled
/// by mission_gain and routed to the channel matching the mission vehicle's
/// class. Returns {cooperation_bonus, sympathy_bonus}.
std::pair<double, double> mission_channel_bonus(bool merge_success, bool ego_is_mission,
                                                bool mission_is_autonomous, const SvoParams& p);

/// R_i = r_i cos(phi) + sin(theta) sin(phi) (R_AV + coop bonus)
///     + cos(theta) sin(phi) (R_HV + symp bonus) + direct mission term.
RewardBreakdown total_reward(double egoistic, double cooperation, double sympathy,
                             double mission_direct, double mission_coop_bonus,
                             double mission_symp_bonus, const SvoParams& p);

} // namespace mergesim
