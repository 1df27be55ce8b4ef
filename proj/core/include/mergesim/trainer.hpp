#pragma once

#include "mergesim/config.hpp"
#include "mergesim/env.hpp"
#include "mergesim/qnet.hpp"
#include "mergesim/replay_buffer.hpp"

#include <filesystem>
#include <functional>
#include <vector>

namespace mergesim {

/// Linear epsilon decay from eps0 to epsf over decay_frac * total_frames,
/// constant epsf afterwards.
double epsilon_schedule(long frame, long total_frames, const TrainSettings& settings);

/// Argmax over Q-values; ties break toward the lowest action code.
int greedy_action(const DenseNet<float>& net, const std::vector<float>& obs);

/// Epsilon-greedy action selection.
MetaAction act(const DenseNet<float>& net, const std::vector<float>& obs, double eps,
               Rng& rng);

/// One entry of the instrumented training trace.
struct TrainEvent {
    long update_index = 0;   // global gradient-update counter after this step
    int agent = 0;           // agent whose working copy was updated
    long policy_version = 0; // disseminated snapshot version in force
    bool dissemination = false;
    bool target_sync = false;
    double loss = 0.0;
};

/// Replay + frozen target + Adam + semi-sequential per-agent updates with
/// atomic policy dissemination. The environment-facing policy (`policy`)
/// only changes at dissemination boundaries, so every acting policy is
/// stationary in between.
class QLearnerCore {
public:
    QLearnerCore(int input_width, const QNetConfig& qnet, int actions,
                 const TrainSettings& settings, const ReplayScoring& scoring,
                 int agent_count, uint64_t seed);

    void observe(ReplayEntry entry) { buffer_.push(std::move(entry)); }
    bool ready() const {
        return buffer_.size() >= settings_.warmup &&
               buffer_.size() >= static_cast<size_t>(settings_.batch);
    }

    /// One gradient step on the training agent's working copy; handles
    /// dissemination and target refresh. Returns the TD loss.
    double update(Rng& rng);

    const DenseNet<float>& policy() const { return policy_; }
    const DenseNet<float>& learner() const { return learner_; }
    const DenseNet<float>& target() const { return target_; }
    long updates() const { return updates_; }
    long policy_version() const { return policy_version_; }
    int training_agent() const { return training_agent_; }
    size_t buffer_size() const { return buffer_.size(); }
    const std::vector<TrainEvent>& trace() const { return trace_; }
    const TrainSettings& settings() const { return settings_; }

private:
    TrainSettings settings_;
    int agent_count_;
    DenseNet<float> policy_;   // last disseminated snapshot (acting)
    DenseNet<float> learner_;  // current training agent's working copy
    DenseNet<float> target_;
    AdamState adam_;
    ReplayBuffer buffer_;
    long updates_ = 0;
    long since_dissemination_ = 0;
    long policy_version_ = 0;
    int training_agent_ = 0;
    std::vector<TrainEvent> trace_;
};

/// One row of the training-curve CSV.
struct CurvePoint {
    int episode = 0;
    long frame = 0;
    double epsilon = 0.0;
    double mean_loss = 0.0;
    double eval_merge_rate = -1.0;  // -1 when no eval checkpoint ran
};

struct TrainResult {
    DenseNet<float> weights;
    std::vector<TrainEvent> trace;
    std::vector<CurvePoint> curve;
    std::vector<EpisodeMetrics> episode_metrics;
    long frames = 0;
    long updates = 0;
};

/// Full training run on the highway scenario. When `out_dir` is non-empty,
/// emits weight checkpoints, training_curve.csv, and manifest.json there.
TrainResult train(const ScenarioConfig& cfg, uint64_t seed,
                  const std::filesystem::path& out_dir = {},
                  const std::function<void(int, const EpisodeMetrics&)>& on_episode = {});

/// Greedy merge-success rate of `net` over n_episodes fresh episodes.
double eval_merge_rate(const HighwayEnv& env, const DenseNet<float>& net,
                       int n_episodes, uint64_t seed);

} // namespace mergesim
