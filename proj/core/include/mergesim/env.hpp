#pragma once

#include "mergesim/collision.hpp"
#include "mergesim/config.hpp"
#include "mergesim/observation.hpp"
#include "mergesim/social_reward.hpp"
#include "mergesim/v2v.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace mergesim {

struct EpisodeMetrics {
    bool merge_success = false;
    bool crashed = false;            // any collision or barrier hit
    bool independent_crash = false;  // a crash not involving the mission vehicle
    double avg_distance_hv = 0.0;    // [m]
    double avg_distance_av = 0.0;    // [m]
    int decision_steps = 0;
};

/// One (o, a, R, o', done) tuple of one agent, tagged with the replay
/// priority distance and the reward decomposition for offline checks.
struct AgentTransition {
    int agent_index = 0;  // 0..agent_count-1, mission AV last
    std::vector<float> obs;
    int action = 0;
    double reward = 0.0;
    std::vector<float> next_obs;
    bool terminal = false;
    double distance_to_merge = 0.0;
    RewardBreakdown breakdown;
};

struct TrajectoryRecord {
    double t = 0.0;
    int id = 0;
    double l = 0.0, d = 0.0, speed = 0.0, yaw = 0.0;
    int lane = 0;
    bool autonomous = false;
    int action = 1;  // Idle when the vehicle took no meta decision
    bool crashed = false;
};

/// Per-decision-step callback policy: flattened scaled observation in,
/// meta-action out.
using Policy = std::function<MetaAction(const std::vector<float>& obs, int agent_index)>;

struct EpisodeResult {
    std::vector<AgentTransition> transitions;
    EpisodeMetrics metrics;
    std::vector<TrajectoryRecord> trajectory;  // filled when requested
};

/// Flattens an observation matrix into network inputs with the configured
/// position/speed feature scaling.
std::vector<float> flatten_observation(const ObservationMatrix& obs,
                                       const PerceptionConfig& perception);

/// The mixed-autonomy merge episode: AVs act through `policy` at the
/// decision rate, HVs follow IDM/MOBIL, physics runs at the tick rate.
class HighwayEnv {
public:
    explicit HighwayEnv(ScenarioConfig cfg);

    const ScenarioConfig& config() const { return cfg_; }

    EpisodeResult run_episode(const Policy& policy, Rng& rng,
                              bool record_trajectory = false) const;

private:
    ScenarioConfig cfg_;
};

} // namespace mergesim
