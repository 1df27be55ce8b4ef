#pragma once

#include "mergesim/episode_init.hpp"
#include "mergesim/idm.hpp"
#include "mergesim/road.hpp"
#include "mergesim/types.hpp"

#include <span>
#include <vector>

namespace mergesim {

struct MobilParams {
    double acc_th = 0.2;      // incentive threshold [m/s^2]
    double b_safe = 4.0;      // safe braking limit for the new follower [m/s^2]
    double politeness = 0.0;  // SVO angle phi_e [rad]
};

enum class LaneDecision { KeepLane, ChangeLeft, ChangeRight };

/// IDM accelerations around one hypothetical lane change: ego, the new
/// follower (target lane) and the old follower (current lane), each before
/// and after the move.
struct MobilOption {
    bool feasible = false;
    double ego_before = 0.0, ego_after = 0.0;
    double new_follower_before = 0.0, new_follower_after = 0.0;
    double old_follower_before = 0.0, old_follower_after = 0.0;
};

bool mobil_safe(const MobilOption& opt, const MobilParams& m);
double mobil_incentive(const MobilOption& opt, const MobilParams& m);

/// Combines the safety gate and the politeness-weighted incentive for both
/// directions; when both qualify the larger incentive wins, ties go left.
LaneDecision mobil_decision(const MobilOption& left, const MobilOption& right,
                            const MobilParams& m);

/// Leader/follower of a probe position within one lane (nullptr when open).
struct LaneNeighbors {
    const VehicleState* leader = nullptr;
    const VehicleState* follower = nullptr;
};
LaneNeighbors lane_neighbors(std::span<const VehicleState> states, double l, int lane,
                             int exclude_id);

/// Bumper-to-bumper IDM acceleration of `follower_speed` at longitude l
/// behind `leader` (free road when leader is null).
double idm_toward(double follower_speed, double l, double half_length,
                  const VehicleState* leader, const IdmParams& p);

/// Builds the MobilOption for moving `ego` into `target_lane` from the
/// current scene snapshot. Infeasible when the lane does not exist, is the
/// ramp, or the move would overlap a vehicle.
MobilOption compute_mobil_option(std::span<const VehicleState> states, const VehicleState& ego,
                                 int target_lane, const RoadNet& road, const IdmParams& p);

/// Empirical human SVO distribution: discrete atoms over angles.
struct SvoDistribution {
    std::vector<std::pair<double, double>> atoms;  // (angle [rad], weight)

    static SvoDistribution default_human();
    void validate() const;
};

/// Draws an angle with probability equal to its weight. Sampled once per HV
/// per episode and held fixed.
double sample_human_svo(const SvoDistribution& dist, Rng& rng);

} // namespace mergesim
