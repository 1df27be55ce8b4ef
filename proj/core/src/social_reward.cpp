#include "mergesim/social_reward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mergesim {

double normalized_speed(double speed, const EgoisticWeights& w) {
    if (w.v_max <= w.v_min) throw std::invalid_argument("normalized_speed: bad window");
    return std::clamp((speed - w.v_min) / (w.v_max - w.v_min), 0.0, 1.0);
}

double egoistic_reward(const EgoStepSummary& step, const EgoisticWeights& w) {
    if (step.crashed) return w.crash_penalty;
    const double dist_norm = std::clamp(step.distance / (w.v_max * step.decision_dt), 0.0, 1.0);
    const double accel_norm = std::clamp(step.accel_change / w.accel_norm, 0.0, 1.0);
    return w.w_speed * normalized_speed(step.speed, w) + w.w_distance * dist_norm -
           w.w_accel_cost * accel_norm - w.w_lane_change_cost * (step.lane_changed ? 1.0 : 0.0);
}

double remote_ally_utility(double speed, const EgoisticWeights& w) {
    // speed + implied progress; the ally's acceleration history is not
    // observable remotely
    return w.w_speed * normalized_speed(speed, w) +
           w.w_distance * std::clamp(speed / w.v_max, 0.0, 1.0);
}

double sympathy_reward(const std::vector<ObservedVehicle>& visible_hvs, const SvoParams& p) {
    double sum = 0.0;
    for (const auto& hv : visible_hvs) {
        if (hv.distance <= 0.0)
            throw std::invalid_argument("sympathy_reward: non-positive distance");
        sum += hv.utility / (p.eta * std::pow(hv.distance, p.psi));
    }
    return sum;
}

double cooperation_reward(const std::vector<ObservedVehicle>& visible_avs) {
    double sum = 0.0;
    for (const auto& av : visible_avs) sum += av.utility;
    return sum;
}

double mission_reward(bool merge_success, bool ego_is_mission) {
    return (merge_success && ego_is_mission) ? 0.5 : 0.0;
}

std::pair<double, double> mission_channel_bonus(bool merge_success, bool ego_is_mission,
                                                bool mission_is_autonomous, const SvoParams& p) {
    if (!merge_success || ego_is_mission) return {0.0, 0.0};
    const double bonus = 0.5 * p.mission_gain;
    return mission_is_autonomous ? std::make_pair(bonus, 0.0) : std::make_pair(0.0, bonus);
}

namespace {

// quarter-turn angles snap to exact values so that a nominally disabled
// channel truly vanishes instead of leaving a ~1e-16 trig residue
constexpr double kHalfPi = 1.57079632679489661923;

double cos_exact(double x) { return x == kHalfPi ? 0.0 : std::cos(x); }
double sin_exact(double x) { return x == kHalfPi ? 1.0 : std::sin(x); }

} // namespace

RewardBreakdown total_reward(double egoistic, double cooperation, double sympathy,
                             double mission_direct, double mission_coop_bonus,
                             double mission_symp_bonus, const SvoParams& p) {
    RewardBreakdown b;
    b.egoistic = egoistic;
    b.cooperation = cooperation;
    b.sympathy = sympathy;
    b.mission_direct = mission_direct;
    b.mission_coop_bonus = mission_coop_bonus;
    b.mission_symp_bonus = mission_symp_bonus;
    b.total = egoistic * cos_exact(p.phi) +
              sin_exact(p.theta) * sin_exact(p.phi) * (cooperation + mission_coop_bonus) +
              cos_exact(p.theta) * sin_exact(p.phi) * (sympathy + mission_symp_bonus) +
              mission_direct;
    if (!std::isfinite(b.total)) throw std::runtime_error("total_reward: non-finite");
    return b;
}

} // namespace mergesim
