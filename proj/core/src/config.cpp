#include "mergesim/config.hpp"

#include <fstream>

#include "json.hpp"

namespace mergesim {

namespace {

using nlohmann::json;

template <typename T>
void get_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

ActionEncoding encoding_from_string(const std::string& s) {
    if (s == "binary") return ActionEncoding::Binary;
    if (s == "discrete") return ActionEncoding::Discrete;
    if (s == "frenet") return ActionEncoding::Frenet;
    throw std::invalid_argument("unknown action encoding: " + s);
}

std::string encoding_to_string(ActionEncoding e) {
    switch (e) {
        case ActionEncoding::Binary: return "binary";
        case ActionEncoding::Discrete: return "discrete";
        case ActionEncoding::Frenet: return "frenet";
    }
    return "binary";
}

RowOrder order_from_string(const std::string& s) {
    if (s == "distance") return RowOrder::Distance;
    if (s == "longitude") return RowOrder::Longitude;
    if (s == "vehicle_id") return RowOrder::VehicleId;
    throw std::invalid_argument("unknown row order: " + s);
}

std::string order_to_string(RowOrder o) {
    switch (o) {
        case RowOrder::Distance: return "distance";
        case RowOrder::Longitude: return "longitude";
        case RowOrder::VehicleId: return "vehicle_id";
    }
    return "longitude";
}

json svo_to_json(const SvoParams& s) {
    return {{"phi", s.phi}, {"theta", s.theta}, {"eta", s.eta},
            {"psi", s.psi}, {"mission_gain", s.mission_gain}};
}

SvoParams svo_from_json(const json& j) {
    SvoParams s;
    get_if(j, "phi", s.phi);
    get_if(j, "theta", s.theta);
    get_if(j, "eta", s.eta);
    get_if(j, "psi", s.psi);
    get_if(j, "mission_gain", s.mission_gain);
    return s;
}

} // namespace

std::string config_to_json(const ScenarioConfig& cfg) {
    json j;
    j["road"] = {{"lane_count", cfg.road.lane_count},
                 {"lane_width", cfg.road.lane_width},
                 {"highway_length", cfg.road.highway_length},
                 {"ramp_merge_start", cfg.road.ramp_merge_start},
                 {"ramp_merge_end", cfg.road.ramp_merge_end}};
    j["physics"] = {{"dt", cfg.physics.dt},
                    {"decision_dt", cfg.physics.decision_dt},
                    {"episode_seconds", cfg.physics.episode_seconds}};
    j["vehicle"] = {{"wheelbase", cfg.vehicle.wheelbase},
                    {"steering_max", cfg.vehicle.steering_max},
                    {"acc_bound", cfg.vehicle.acc_bound}};
    j["pid"] = {{"k_lateral", cfg.pid.k_lateral},
                {"k_heading", cfg.pid.k_heading},
                {"k_speed", cfg.pid.k_speed},
                {"speed_step", cfg.pid.speed_step}};
    j["episode_init"] = {{"mu_l", cfg.init.mu_l},       {"delta_l", cfg.init.delta_l},
                         {"mu_v", cfg.init.mu_v},       {"delta_v", cfg.init.delta_v},
                         {"av_l_min", cfg.init.av_l_min}, {"av_l_max", cfg.init.av_l_max},
                         {"av_v_min", cfg.init.av_v_min}, {"av_v_max", cfg.init.av_v_max},
                         {"av_lanes", cfg.init.av_lanes}, {"hv_l_min", cfg.init.hv_l_min},
                         {"hv_l_max", cfg.init.hv_l_max}, {"hv_v_min", cfg.init.hv_v_min},
                         {"hv_v_max", cfg.init.hv_v_max}, {"hv_lanes", cfg.init.hv_lanes},
                         {"min_gap", cfg.init.min_gap}};
    j["counts"] = {{"n_av", cfg.n_av},
                   {"n_hv", cfg.n_hv},
                   {"mission_type", cfg.mission_autonomous ? "av" : "hv"}};
    j["idm"] = {{"v_set", cfg.idm.v_set},     {"t_set", cfg.idm.t_set},
                {"d0", cfg.idm.d0},           {"acc_max", cfg.idm.acc_max},
                {"acc_des", cfg.idm.acc_des}, {"acc_brake_max", cfg.idm.acc_brake_max},
                {"sigma_vel", cfg.idm.sigma_vel}};
    j["mobil"] = {{"acc_th", cfg.mobil.acc_th}, {"b_safe", cfg.mobil.b_safe}};
    json atoms = json::array();
    for (const auto& [angle, weight] : cfg.human_svo.atoms)
        atoms.push_back({{"angle", angle}, {"weight", weight}});
    j["human_svo"] = atoms;
    j["perception"] = {{"comm_range", cfg.perception.comm_range},
                       {"perception_range", cfg.perception.perception_range},
                       {"rows", cfg.perception.observation.rows},
                       {"history", cfg.perception.observation.history},
                       {"encoding", encoding_to_string(cfg.perception.observation.encoding)},
                       {"order", order_to_string(cfg.perception.observation.order)},
                       {"include_mission", cfg.perception.observation.include_mission},
                       {"pos_scale", cfg.perception.pos_scale},
                       {"vel_scale", cfg.perception.vel_scale}};
    j["reward"] = {{"w_speed", cfg.ego_weights.w_speed},
                   {"w_distance", cfg.ego_weights.w_distance},
                   {"w_accel_cost", cfg.ego_weights.w_accel_cost},
                   {"w_lane_change_cost", cfg.ego_weights.w_lane_change_cost},
                   {"v_min", cfg.ego_weights.v_min},
                   {"v_max", cfg.ego_weights.v_max},
                   {"accel_norm", cfg.ego_weights.accel_norm},
                   {"crash_penalty", cfg.ego_weights.crash_penalty}};
    j["svo"] = svo_to_json(cfg.svo);
    if (!cfg.per_agent_svo.empty()) {
        json list = json::array();
        for (const auto& s : cfg.per_agent_svo) list.push_back(svo_to_json(s));
        j["per_agent_svo"] = list;
    }
    j["qnet"] = {{"hidden", cfg.qnet.hidden}};
    j["train"] = {{"episodes", cfg.train.episodes},
                  {"batch", cfg.train.batch},
                  {"gamma", cfg.train.gamma},
                  {"alpha", cfg.train.alpha},
                  {"n_target", cfg.train.n_target},
                  {"eps0", cfg.train.eps0},
                  {"epsf", cfg.train.epsf},
                  {"decay_frac", cfg.train.decay_frac},
                  {"k_diss", cfg.train.k_diss},
                  {"cycles_per_episode", cfg.train.cycles_per_episode},
                  {"buffer", cfg.train.buffer},
                  {"warmup", cfg.train.warmup},
                  {"strict_alg1", cfg.train.strict_alg1},
                  {"eval_every", cfg.train.eval_every},
                  {"eval_episodes", cfg.train.eval_episodes},
                  {"checkpoint_every", cfg.train.checkpoint_every}};
    j["replay"] = {{"mode", cfg.replay.mode == PriorityMode::Inverse ? "inverse" : "literal"},
                   {"d_scale", cfg.replay.d_scale},
                   {"epsilon", cfg.replay.epsilon}};
    return j.dump(2);
}

ScenarioConfig config_from_json(const std::string& text) {
    const json j = json::parse(text);
    ScenarioConfig cfg;
    if (j.contains("road")) {
        const auto& r = j.at("road");
        get_if(r, "lane_count", cfg.road.lane_count);
        get_if(r, "lane_width", cfg.road.lane_width);
        get_if(r, "highway_length", cfg.road.highway_length);
        get_if(r, "ramp_merge_start", cfg.road.ramp_merge_start);
        get_if(r, "ramp_merge_end", cfg.road.ramp_merge_end);
    }
    if (j.contains("physics")) {
        const auto& p = j.at("physics");
        get_if(p, "dt", cfg.physics.dt);
        get_if(p, "decision_dt", cfg.physics.decision_dt);
        get_if(p, "episode_seconds", cfg.physics.episode_seconds);
    }
    if (j.contains("vehicle")) {
        const auto& v = j.at("vehicle");
        get_if(v, "wheelbase", cfg.vehicle.wheelbase);
        get_if(v, "steering_max", cfg.vehicle.steering_max);
        get_if(v, "acc_bound", cfg.vehicle.acc_bound);
        cfg.pid.vehicle = cfg.vehicle;
    }
    if (j.contains("pid")) {
        const auto& p = j.at("pid");
        get_if(p, "k_lateral", cfg.pid.k_lateral);
        get_if(p, "k_heading", cfg.pid.k_heading);
        get_if(p, "k_speed", cfg.pid.k_speed);
        get_if(p, "speed_step", cfg.pid.speed_step);
    }
    if (j.contains("episode_init")) {
        const auto& e = j.at("episode_init");
        get_if(e, "mu_l", cfg.init.mu_l);
        get_if(e, "delta_l", cfg.init.delta_l);
        get_if(e, "mu_v", cfg.init.mu_v);
        get_if(e, "delta_v", cfg.init.delta_v);
        get_if(e, "av_l_min", cfg.init.av_l_min);
        get_if(e, "av_l_max", cfg.init.av_l_max);
        get_if(e, "av_v_min", cfg.init.av_v_min);
        get_if(e, "av_v_max", cfg.init.av_v_max);
        get_if(e, "av_lanes", cfg.init.av_lanes);
        get_if(e, "hv_l_min", cfg.init.hv_l_min);
        get_if(e, "hv_l_max", cfg.init.hv_l_max);
        get_if(e, "hv_v_min", cfg.init.hv_v_min);
        get_if(e, "hv_v_max", cfg.init.hv_v_max);
        get_if(e, "hv_lanes", cfg.init.hv_lanes);
        get_if(e, "min_gap", cfg.init.min_gap);
    }
    if (j.contains("counts")) {
        const auto& c = j.at("counts");
        get_if(c, "n_av", cfg.n_av);
        get_if(c, "n_hv", cfg.n_hv);
        if (c.contains("mission_type"))
            cfg.mission_autonomous = c.at("mission_type").get<std::string>() == "av";
    }
    if (j.contains("idm")) {
        const auto& i = j.at("idm");
        get_if(i, "v_set", cfg.idm.v_set);
        get_if(i, "t_set", cfg.idm.t_set);
        get_if(i, "d0", cfg.idm.d0);
        get_if(i, "acc_max", cfg.idm.acc_max);
        get_if(i, "acc_des", cfg.idm.acc_des);
        get_if(i, "acc_brake_max", cfg.idm.acc_brake_max);
        get_if(i, "sigma_vel", cfg.idm.sigma_vel);
        cfg.idm.dt = cfg.physics.dt;
    }
    if (j.contains("mobil")) {
        const auto& m = j.at("mobil");
        get_if(m, "acc_th", cfg.mobil.acc_th);
        get_if(m, "b_safe", cfg.mobil.b_safe);
    }
    if (j.contains("human_svo")) {
        cfg.human_svo.atoms.clear();
        for (const auto& atom : j.at("human_svo"))
            cfg.human_svo.atoms.emplace_back(atom.at("angle").get<double>(),
                                             atom.at("weight").get<double>());
        cfg.human_svo.validate();
    }
    if (j.contains("perception")) {
        const auto& p = j.at("perception");
        get_if(p, "comm_range", cfg.perception.comm_range);
        get_if(p, "perception_range", cfg.perception.perception_range);
        get_if(p, "rows", cfg.perception.observation.rows);
        get_if(p, "history", cfg.perception.observation.history);
        if (p.contains("encoding"))
            cfg.perception.observation.encoding =
                encoding_from_string(p.at("encoding").get<std::string>());
        if (p.contains("order"))
            cfg.perception.observation.order = order_from_string(p.at("order").get<std::string>());
        get_if(p, "include_mission", cfg.perception.observation.include_mission);
        get_if(p, "pos_scale", cfg.perception.pos_scale);
        get_if(p, "vel_scale", cfg.perception.vel_scale);
    }
    if (j.contains("reward")) {
        const auto& r = j.at("reward");
        get_if(r, "w_speed", cfg.ego_weights.w_speed);
        get_if(r, "w_distance", cfg.ego_weights.w_distance);
        get_if(r, "w_accel_cost", cfg.ego_weights.w_accel_cost);
        get_if(r, "w_lane_change_cost", cfg.ego_weights.w_lane_change_cost);
        get_if(r, "v_min", cfg.ego_weights.v_min);
        get_if(r, "v_max", cfg.ego_weights.v_max);
        get_if(r, "accel_norm", cfg.ego_weights.accel_norm);
        get_if(r, "crash_penalty", cfg.ego_weights.crash_penalty);
    }
    if (j.contains("svo")) cfg.svo = svo_from_json(j.at("svo"));
    if (j.contains("per_agent_svo")) {
        cfg.per_agent_svo.clear();
        for (const auto& s : j.at("per_agent_svo")) cfg.per_agent_svo.push_back(svo_from_json(s));
    }
    if (j.contains("qnet")) get_if(j.at("qnet"), "hidden", cfg.qnet.hidden);
    if (j.contains("train")) {
        const auto& t = j.at("train");
        get_if(t, "episodes", cfg.train.episodes);
        get_if(t, "batch", cfg.train.batch);
        get_if(t, "gamma", cfg.train.gamma);
        get_if(t, "alpha", cfg.train.alpha);
        get_if(t, "n_target", cfg.train.n_target);
        get_if(t, "eps0", cfg.train.eps0);
        get_if(t, "epsf", cfg.train.epsf);
        get_if(t, "decay_frac", cfg.train.decay_frac);
        get_if(t, "k_diss", cfg.train.k_diss);
        get_if(t, "cycles_per_episode", cfg.train.cycles_per_episode);
        get_if(t, "buffer", cfg.train.buffer);
        get_if(t, "warmup", cfg.train.warmup);
        get_if(t, "strict_alg1", cfg.train.strict_alg1);
        get_if(t, "eval_every", cfg.train.eval_every);
        get_if(t, "eval_episodes", cfg.train.eval_episodes);
        get_if(t, "checkpoint_every", cfg.train.checkpoint_every);
    }
    if (j.contains("replay")) {
        const auto& r = j.at("replay");
        if (r.contains("mode"))
            cfg.replay.mode = r.at("mode").get<std::string>() == "literal" ? PriorityMode::Literal
                                                                           : PriorityMode::Inverse;
        get_if(r, "d_scale", cfg.replay.d_scale);
        get_if(r, "epsilon", cfg.replay.epsilon);
    }
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_config: cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return config_from_json(text);
}

void save_config(const ScenarioConfig& cfg, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_config: cannot open " + path.string());
    out << config_to_json(cfg) << "\n";
}

uint64_t config_hash(const ScenarioConfig& cfg) {
    const std::string text = config_to_json(cfg);
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

void write_manifest(const ScenarioConfig& cfg, uint64_t seed,
                    const std::filesystem::path& path) {
    json manifest;
    manifest["version"] = "0.1.0";
    manifest["seed"] = seed;
    manifest["config_hash"] = config_hash(cfg);
    manifest["config"] = json::parse(config_to_json(cfg));
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_manifest: cannot open " + path.string());
    out << manifest.dump(2) << "\n";
}

} // namespace mergesim
