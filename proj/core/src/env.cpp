#include "mergesim/env.hpp"

#include "mergesim/idm.hpp"
#include "mergesim/kinematics.hpp"
#include "mergesim/mobil.hpp"
#include "mergesim/pid.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace mergesim {

std::vector<float> flatten_observation(const ObservationMatrix& obs,
                                       const PerceptionConfig& perception) {
    std::vector<float> out(obs.data.size());
    const int hist_start = 8;
    for (int r = 0; r < obs.rows; ++r) {
        for (int c = 0; c < obs.cols; ++c) {
            double v = obs.at(r, c);
            if (c == 1 || c == 2) v *= perception.pos_scale;
            if (c == 3 || c == 4) v *= perception.vel_scale;
            (void)hist_start;
            out[r * obs.cols + c] = static_cast<float>(v);
        }
    }
    return out;
}

HighwayEnv::HighwayEnv(ScenarioConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.idm.dt = cfg_.physics.dt;
    cfg_.pid.vehicle = cfg_.vehicle;
}

namespace {

struct VehicleRuntime {
    ControllerState controller;
    double politeness = 0.0;       // HVs only
    double interval_accel_sum = 0.0;
    int interval_ticks = 0;
    double prev_mean_accel = 0.0;
    double start_l = 0.0;          // interval start
    int start_lane = 0;
    double initial_l = 0.0;        // episode start
};

bool fully_in_highway_lane(const VehicleState& v, const RoadNet& road) {
    return v.lane < road.ramp_lane() &&
           std::abs(v.d - road.lane_center(v.lane)) <= 1.0;
}

} // namespace

EpisodeResult HighwayEnv::run_episode(const Policy& policy, Rng& rng,
                                      bool record_trajectory) const {
    const auto& cfg = cfg_;
    const RoadNet& road = cfg.road;

    EpisodeResult result;
    auto vehicles = initialize_episode(cfg.init, road, cfg.n_hv, cfg.n_av,
                                       cfg.mission_autonomous, rng);
    const int mission_id = cfg.n_av + cfg.n_hv;

    std::vector<VehicleRuntime> rt(vehicles.size());
    HistoryMap histories;
    for (size_t i = 0; i < vehicles.size(); ++i) {
        rt[i].controller = {vehicles[i].lane, vehicles[i].speed};
        rt[i].initial_l = vehicles[i].l;
        if (!vehicles[i].autonomous) rt[i].politeness = sample_human_svo(cfg.human_svo, rng);
        histories.emplace(vehicles[i].id, ActionHistory(cfg.perception.observation.history));
    }

    auto agent_index_of = [&](int id) -> int {
        if (id < cfg.n_av) return id;
        if (id == mission_id && cfg.mission_autonomous) return cfg.n_av;
        return -1;
    };
    std::vector<int> agent_ids;
    for (size_t i = 0; i < vehicles.size(); ++i)
        if (agent_index_of(vehicles[i].id) >= 0) agent_ids.push_back(vehicles[i].id);

    const int decisions = cfg.physics.decisions_per_episode();
    const int ticks = cfg.physics.ticks_per_decision();

    bool merge_success = false;
    bool merge_event_this_interval = false;
    bool any_crash = false;
    bool independent_crash = false;

    // per-agent data carried across one decision interval
    std::unordered_map<int, std::vector<float>> prev_obs;
    std::unordered_map<int, int> prev_action;
    std::unordered_map<int, double> prev_dist_to_merge;
    std::vector<int> agents_in_flight;  // vehicle ids with a pending transition

    auto assemble_for = [&](int id) {
        const auto graph = build_v2v_graph(vehicles, cfg.perception.comm_range);
        const auto visible = shared_perception(vehicles[id], graph, vehicles,
                                               cfg.perception.perception_range);
        const auto obs = assemble_observation(vehicles[id], visible, vehicles, histories,
                                              cfg.perception.observation, road);
        return flatten_observation(obs, cfg.perception);
    };

    auto social_components = [&](int id, bool ego_crashed, double& coop, double& symp) {
        coop = 0.0;
        symp = 0.0;
        if (ego_crashed) return;
        const auto graph = build_v2v_graph(vehicles, cfg.perception.comm_range);
        const auto visible = shared_perception(vehicles[id], graph, vehicles,
                                               cfg.perception.perception_range);
        std::vector<ObservedVehicle> hvs, avs;
        for (const auto& v : vehicles) {
            if (!visible.contains(v.id) || v.crashed) continue;
            const double dist = std::hypot(v.l - vehicles[id].l, v.d - vehicles[id].d);
            if (v.autonomous) {
                avs.push_back({remote_ally_utility(v.speed, cfg.ego_weights), dist});
            } else if (dist > 0.0) {
                hvs.push_back({normalized_speed(v.speed, cfg.ego_weights), dist});
            }
        }
        const int agent = agent_index_of(id);
        coop = cooperation_reward(avs);
        symp = sympathy_reward(hvs, cfg.agent_svo(agent));
    };

    auto finalize_transitions = [&](bool episode_end) {
        for (int id : agents_in_flight) {
            const auto& v = vehicles[id];
            const int agent = agent_index_of(id);
            const auto& svo = cfg.agent_svo(agent);

            EgoStepSummary step;
            step.speed = v.speed;
            step.distance = v.l - rt[id].start_l;
            step.decision_dt = cfg.physics.decision_dt;
            const double mean_accel =
                rt[id].interval_ticks > 0 ? rt[id].interval_accel_sum / rt[id].interval_ticks
                                          : 0.0;
            step.accel_change = std::abs(mean_accel - rt[id].prev_mean_accel);
            step.lane_changed = v.lane != rt[id].start_lane;
            step.crashed = v.crashed;
            rt[id].prev_mean_accel = mean_accel;

            double coop = 0.0, symp = 0.0;
            social_components(id, v.crashed, coop, symp);

            const bool ego_is_mission = v.is_mission;
            const double direct =
                mission_reward(merge_event_this_interval, ego_is_mission && v.autonomous);
            const auto [coop_bonus, symp_bonus] = mission_channel_bonus(
                merge_event_this_interval, ego_is_mission, cfg.mission_autonomous, svo);

            const auto breakdown =
                total_reward(egoistic_reward(step, cfg.ego_weights), coop, symp, direct,
                             coop_bonus, symp_bonus, svo);

            AgentTransition tr;
            tr.agent_index = agent;
            tr.obs = prev_obs.at(id);
            tr.action = prev_action.at(id);
            tr.reward = breakdown.total;
            tr.terminal = v.crashed || episode_end;
            tr.distance_to_merge = prev_dist_to_merge.at(id);
            tr.breakdown = breakdown;
            if (v.crashed)
                tr.next_obs.assign(tr.obs.size(), 0.0f);
            else
                tr.next_obs = assemble_for(id);
            result.transitions.push_back(std::move(tr));
        }
        agents_in_flight.clear();
        merge_event_this_interval = false;
    };

    for (int t = 0; t < decisions; ++t) {
        finalize_transitions(false);

        bool any_agent_alive = false;
        for (int id : agent_ids)
            if (!vehicles[id].crashed) any_agent_alive = true;
        if (!any_agent_alive) break;
        result.metrics.decision_steps = t + 1;

        const double mission_dist = std::abs(vehicles[mission_id].l - road.ramp_merge_end);

        std::unordered_map<int, MetaAction> actions;

        // AV decisions
        for (int id : agent_ids) {
            auto& v = vehicles[id];
            if (v.crashed) continue;
            auto obs = assemble_for(id);
            const MetaAction a = policy(obs, agent_index_of(id));
            rt[id].controller = apply_meta_action(v, a, road, rt[id].controller, cfg.pid);
            actions[id] = a;
            prev_obs[id] = std::move(obs);
            prev_action[id] = static_cast<int>(a);
            prev_dist_to_merge[id] = mission_dist;
            agents_in_flight.push_back(id);
            rt[id].start_l = v.l;
            rt[id].start_lane = v.lane;
            rt[id].interval_accel_sum = 0.0;
            rt[id].interval_ticks = 0;
        }

        // HV decisions (MOBIL at the decision rate; the mission HV merges
        // whenever the safety gate opens)
        for (auto& v : vehicles) {
            if (v.autonomous || v.crashed) continue;
            const int old_target = rt[v.id].controller.target_lane;
            int new_target = old_target;
            if (v.is_mission && v.lane == road.ramp_lane()) {
                if (road.in_merge_window(v.l)) {
                    const int highway = road.ramp_lane() - 1;
                    const auto opt = compute_mobil_option(vehicles, v, highway, road, cfg.idm);
                    if (opt.feasible && opt.new_follower_after > -cfg.mobil.b_safe &&
                        opt.ego_after > -cfg.mobil.b_safe)
                        new_target = highway;
                }
            } else if (v.lane != road.ramp_lane()) {
                MobilParams m = cfg.mobil;
                m.politeness = rt[v.id].politeness;
                const auto left = compute_mobil_option(vehicles, v, v.lane - 1, road, cfg.idm);
                const auto right = compute_mobil_option(vehicles, v, v.lane + 1, road, cfg.idm);
                switch (mobil_decision(left, right, m)) {
                    case LaneDecision::ChangeLeft: new_target = v.lane - 1; break;
                    case LaneDecision::ChangeRight: new_target = v.lane + 1; break;
                    case LaneDecision::KeepLane: new_target = v.lane; break;
                }
            }
            rt[v.id].controller.target_lane = new_target;

            const auto cur = lane_neighbors(vehicles, v.l, v.lane, v.id);
            const double accel_now = idm_toward(v.speed, v.l, 0.5 * v.length, cur.leader, cfg.idm);
            actions[v.id] = hv_meta_equivalent(new_target - old_target, accel_now);
        }

        if (record_trajectory) {
            for (const auto& v : vehicles) {
                TrajectoryRecord rec;
                rec.t = t * cfg.physics.decision_dt;
                rec.id = v.id;
                rec.l = v.l;
                rec.d = v.d;
                rec.speed = v.speed;
                rec.yaw = v.yaw;
                rec.lane = v.lane;
                rec.autonomous = v.autonomous;
                rec.action = actions.contains(v.id) ? static_cast<int>(actions.at(v.id)) : 1;
                rec.crashed = v.crashed;
                result.trajectory.push_back(rec);
            }
        }

        update_histories(histories, actions);

        // physics
        for (int tick = 0; tick < ticks; ++tick) {
            for (auto& v : vehicles) {
                if (v.crashed) continue;
                ControlSignal ctrl;
                if (v.autonomous) {
                    ctrl = pid_control(v, rt[v.id].controller, road, cfg.pid);
                } else {
                    ctrl = pid_control(v, rt[v.id].controller, road, cfg.pid);
                    // longitudinal control is IDM against the nearer of the
                    // current- and target-lane leaders
                    const auto cur = lane_neighbors(vehicles, v.l, v.lane, v.id);
                    double accel = idm_toward(v.speed, v.l, 0.5 * v.length, cur.leader, cfg.idm);
                    const int target = rt[v.id].controller.target_lane;
                    if (target != v.lane) {
                        const auto tgt = lane_neighbors(vehicles, v.l, target, v.id);
                        accel = std::min(
                            accel, idm_toward(v.speed, v.l, 0.5 * v.length, tgt.leader, cfg.idm));
                    }
                    ctrl.acceleration = noisy_acceleration(accel, cfg.idm, rng);
                }
                rt[v.id].interval_accel_sum += ctrl.acceleration;
                rt[v.id].interval_ticks += 1;
                v = step_vehicle(v, ctrl, cfg.physics.dt, road, cfg.vehicle);
            }

            // crash and merge bookkeeping
            for (auto& v : vehicles) {
                if (v.crashed) continue;
                if (ramp_barrier_check(v, road) || v.d < 0.0 || v.d > road.total_width()) {
                    v.crashed = true;
                    any_crash = true;
                }
            }
            for (const auto& [a, b] : detect_collisions(vehicles)) {
                auto& va = vehicles[a];
                auto& vb = vehicles[b];
                if (va.crashed && vb.crashed) continue;
                va.crashed = true;
                vb.crashed = true;
                any_crash = true;
                if (a != mission_id && b != mission_id) independent_crash = true;
            }
            auto& mission = vehicles[mission_id];
            if (!merge_success && !mission.crashed && fully_in_highway_lane(mission, road)) {
                merge_success = true;
                merge_event_this_interval = true;
            }
        }
    }
    finalize_transitions(true);

    result.metrics.merge_success = merge_success;
    result.metrics.crashed = any_crash;
    result.metrics.independent_crash = independent_crash;
    double hv_dist = 0.0, av_dist = 0.0;
    int hv_n = 0, av_n = 0;
    for (const auto& v : vehicles) {
        const double dist = v.l - rt[v.id].initial_l;
        if (v.autonomous) {
            av_dist += dist;
            ++av_n;
        } else {
            hv_dist += dist;
            ++hv_n;
        }
    }
    result.metrics.avg_distance_hv = hv_n > 0 ? hv_dist / hv_n : 0.0;
    result.metrics.avg_distance_av = av_n > 0 ? av_dist / av_n : 0.0;
    return result;
}

} // namespace mergesim
