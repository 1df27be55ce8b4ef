#include "mergesim/mobil.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mergesim {

bool mobil_safe(const MobilOption& opt, const MobilParams& m) {
    return opt.feasible && opt.new_follower_after > -m.b_safe;
}

double mobil_incentive(const MobilOption& opt, const MobilParams& m) {
    const double others = (opt.new_follower_after - opt.new_follower_before) +
                          (opt.old_follower_after - opt.old_follower_before);
    return opt.ego_after - opt.ego_before + std::sin(m.politeness) * others;
}

LaneDecision mobil_decision(const MobilOption& left, const MobilOption& right,
                            const MobilParams& m) {
    const bool left_ok = mobil_safe(left, m) && mobil_incentive(left, m) > m.acc_th;
    const bool right_ok = mobil_safe(right, m) && mobil_incentive(right, m) > m.acc_th;
    if (left_ok && right_ok)
        return mobil_incentive(right, m) > mobil_incentive(left, m) ? LaneDecision::ChangeRight
                                                                    : LaneDecision::ChangeLeft;
    if (left_ok) return LaneDecision::ChangeLeft;
    if (right_ok) return LaneDecision::ChangeRight;
    return LaneDecision::KeepLane;
}

LaneNeighbors lane_neighbors(std::span<const VehicleState> states, double l, int lane,
                             int exclude_id) {
    LaneNeighbors out;
    for (const auto& v : states) {
        if (v.id == exclude_id || v.lane != lane || v.crashed) continue;
        if (v.l >= l) {
            if (!out.leader || v.l < out.leader->l) out.leader = &v;
        } else {
            if (!out.follower || v.l > out.follower->l) out.follower = &v;
        }
    }
    return out;
}

double idm_toward(double follower_speed, double l, double half_length,
                  const VehicleState* leader, const IdmParams& p) {
    if (!leader) return idm_acceleration(follower_speed, kNoLeader, 0.0, p);
    const double gap = leader->l - l - half_length - 0.5 * leader->length;
    if (gap <= 0.0) return -p.acc_brake_max;  // overlapping: emergency braking
    return idm_acceleration(follower_speed, gap, follower_speed - leader->speed, p);
}

MobilOption compute_mobil_option(std::span<const VehicleState> states, const VehicleState& ego,
                                 int target_lane, const RoadNet& road, const IdmParams& p) {
    MobilOption opt;
    if (target_lane < 0 || target_lane >= road.total_lanes()) return opt;
    if (target_lane == road.ramp_lane()) return opt;  // nobody merges onto the ramp
    if (ego.lane == road.ramp_lane() && !road.in_merge_window(ego.l)) return opt;

    const double half = 0.5 * ego.length;
    const auto cur = lane_neighbors(states, ego.l, ego.lane, ego.id);
    const auto tgt = lane_neighbors(states, ego.l, target_lane, ego.id);

    // the slot must physically exist
    if (tgt.leader && tgt.leader->l - ego.l <= half + 0.5 * tgt.leader->length) return opt;
    if (tgt.follower && ego.l - tgt.follower->l <= half + 0.5 * tgt.follower->length) return opt;

    opt.feasible = true;
    opt.ego_before = idm_toward(ego.speed, ego.l, half, cur.leader, p);
    opt.ego_after = idm_toward(ego.speed, ego.l, half, tgt.leader, p);

    if (tgt.follower) {
        opt.new_follower_before = idm_toward(tgt.follower->speed, tgt.follower->l,
                                             0.5 * tgt.follower->length, tgt.leader, p);
        opt.new_follower_after = idm_toward(tgt.follower->speed, tgt.follower->l,
                                            0.5 * tgt.follower->length, &ego, p);
    }
    if (cur.follower) {
        opt.old_follower_before = idm_toward(cur.follower->speed, cur.follower->l,
                                             0.5 * cur.follower->length, &ego, p);
        opt.old_follower_after = idm_toward(cur.follower->speed, cur.follower->l,
                                            0.5 * cur.follower->length, cur.leader, p);
    }
    return opt;
}

SvoDistribution SvoDistribution::default_human() {
    using std::numbers::pi;
    return {{{-pi / 8, 0.05}, {0.0, 0.60}, {pi / 8, 0.10}, {pi / 4, 0.20}, {3 * pi / 8, 0.05}}};
}

void SvoDistribution::validate() const {
    if (atoms.empty()) throw std::invalid_argument("SvoDistribution: empty");
    double sum = 0.0;
    for (const auto& [angle, weight] : atoms) {
        if (weight < 0.0) throw std::invalid_argument("SvoDistribution: negative weight");
        sum += weight;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("SvoDistribution: weights must sum to 1");
}

double sample_human_svo(const SvoDistribution& dist, Rng& rng) {
    dist.validate();
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double x = u(rng);
    for (const auto& [angle, weight] : dist.atoms) {
        if (x < weight) return angle;
        x -= weight;
    }
    return dist.atoms.back().first;
}

} // namespace mergesim
