#pragma once

#include "mergesim/episode_init.hpp"
#include "mergesim/idm.hpp"
#include "mergesim/mobil.hpp"
#include "mergesim/observation.hpp"
#include "mergesim/pid.hpp"
#include "mergesim/replay_buffer.hpp"
#include "mergesim/road.hpp"
#include "mergesim/social_reward.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mergesim {

struct PhysicsConfig {
    double dt = 1.0 / 15.0;       // physics step [s]
    double decision_dt = 1.0;     // policy period [s]
    double episode_seconds = 18.0;

    int ticks_per_decision() const { return static_cast<int>(std::lround(decision_dt / dt)); }
    int decisions_per_episode() const {
        return static_cast<int>(std::lround(episode_seconds / decision_dt));
    }
};

struct PerceptionConfig {
    double comm_range = 100.0;
    double perception_range = 60.0;
    ObservationConfig observation;
    // feature scaling applied when flattening for the network
    double pos_scale = 0.01;
    double vel_scale = 1.0 / 30.0;
};

struct QNetConfig {
    std::vector<int> hidden{256, 128, 256, 128};  // FEN + FAN stack
};

struct TrainSettings {
    int episodes = 10000;
    int batch = 32;
    double gamma = 0.95;
    double alpha = 0.0005;
    int n_target = 200;
    double eps0 = 1.0;
    double epsf = 0.1;
    double decay_frac = 0.8;  // fraction of total frames spent decaying
    int k_diss = 4;
    int cycles_per_episode = 1;  // dissemination cycles run per generated episode
    size_t buffer = 100000;
    size_t warmup = 1000;
    bool strict_alg1 = false;
    int eval_every = 0;        // episodes between eval checkpoints, 0 = off
    int eval_episodes = 20;
    int checkpoint_every = 0;  // episodes between weight checkpoints, 0 = final only
};

struct ScenarioConfig {
    RoadNet road;
    PhysicsConfig physics;
    VehicleParams vehicle;
    PidParams pid;
    EpisodeInit init;
    int n_av = 4;
    int n_hv = 20;
    bool mission_autonomous = false;
    IdmParams idm;
    MobilParams mobil;  // politeness is overridden per HV by the SVO draw
    SvoDistribution human_svo = SvoDistribution::default_human();
    PerceptionConfig perception;
    EgoisticWeights ego_weights;
    SvoParams svo;                         // default AV social parameters
    std::vector<SvoParams> per_agent_svo;  // optional per-agent override
    QNetConfig qnet;
    TrainSettings train;
    ReplayScoring replay;

    /// SVO parameters of agent i (AV index, mission AV has index n_av).
    const SvoParams& agent_svo(int agent) const {
        if (agent >= 0 && agent < static_cast<int>(per_agent_svo.size()))
            return per_agent_svo[agent];
        return svo;
    }

    int agent_count() const { return n_av + (mission_autonomous ? 1 : 0); }
    int observation_width() const {
        return perception.observation.rows * perception.observation.row_width();
    }
};

ScenarioConfig load_config(const std::filesystem::path& path);
void save_config(const ScenarioConfig& cfg, const std::filesystem::path& path);
std::string config_to_json(const ScenarioConfig& cfg);
ScenarioConfig config_from_json(const std::string& text);

/// Stable hash of the canonical JSON form, recorded in run manifests.
uint64_t config_hash(const ScenarioConfig& cfg);

/// Writes the run manifest (resolved config, seed, config hash, version).
void write_manifest(const ScenarioConfig& cfg, uint64_t seed,
                    const std::filesystem::path& path);

} // namespace mergesim
