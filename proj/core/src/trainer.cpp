#include "mergesim/trainer.hpp"

#include "mergesim/weights_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mergesim {

double epsilon_schedule(long frame, long total_frames, const TrainSettings& settings) {
    if (frame < 0) throw std::invalid_argument("epsilon_schedule: negative frame");
    if (total_frames <= 0) return settings.epsf;
    const double horizon = settings.decay_frac * static_cast<double>(total_frames);
    if (horizon <= 0.0 || frame >= horizon) return settings.epsf;
    const double frac = static_cast<double>(frame) / horizon;
    return settings.eps0 + frac * (settings.epsf - settings.eps0);
}

int greedy_action(const DenseNet<float>& net, const std::vector<float>& obs) {
    const auto q = forward(net, std::span<const float>(obs));
    int best = 0;
    for (int a = 1; a < static_cast<int>(q.size()); ++a)
        if (q[a] > q[best]) best = a;
    return best;
}

MetaAction act(const DenseNet<float>& net, const std::vector<float>& obs, double eps,
               Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (u(rng) < eps) {
        std::uniform_int_distribution<int> a(0, net.output_width() - 1);
        return meta_action_from_code(a(rng));
    }
    return meta_action_from_code(greedy_action(net, obs));
}

QLearnerCore::QLearnerCore(int input_width, const QNetConfig& qnet, int actions,
                           const TrainSettings& settings, const ReplayScoring& scoring,
                           int agent_count, uint64_t seed)
    : settings_(settings),
      agent_count_(agent_count),
      policy_(init_network<float>(input_width, qnet.hidden, actions, seed)),
      learner_(policy_),
      target_(policy_),
      adam_(AdamState::init(policy_, settings.alpha)),
      buffer_(settings.buffer, scoring) {
    if (agent_count_ < 1) throw std::invalid_argument("QLearnerCore: no agents");
}

double QLearnerCore::update(Rng& rng) {
    if (!ready()) throw std::logic_error("QLearnerCore::update: not warmed up");

    const auto batch = buffer_.sample_batch(settings_.batch, rng);
    auto [loss, grads] = td_loss_and_grads(learner_, target_, batch, settings_.gamma);
    if (!std::isfinite(loss))
        throw std::runtime_error("QLearnerCore::update: non-finite TD loss at update " +
                                 std::to_string(updates_));
    adam_step(learner_, grads, adam_);

    ++updates_;
    ++since_dissemination_;

    TrainEvent ev;
    ev.update_index = updates_;
    ev.agent = training_agent_;
    ev.policy_version = policy_version_;
    ev.loss = loss;

    if (settings_.n_target > 0 && updates_ % settings_.n_target == 0) {
        target_ = learner_;
        ev.target_sync = true;
    }
    if (since_dissemination_ >= settings_.k_diss) {
        policy_ = learner_;
        ++policy_version_;
        since_dissemination_ = 0;
        training_agent_ = (training_agent_ + 1) % agent_count_;
        ev.dissemination = true;
    }
    trace_.push_back(ev);
    return loss;
}

double eval_merge_rate(const HighwayEnv& env, const DenseNet<float>& net,
                       int n_episodes, uint64_t seed) {
    int success = 0;
    Policy greedy = [&](const std::vector<float>& obs, int) {
        return meta_action_from_code(greedy_action(net, obs));
    };
    for (int e = 0; e < n_episodes; ++e) {
        Rng rng(seed + static_cast<uint64_t>(e));
        const auto result = env.run_episode(greedy, rng);
        if (result.metrics.merge_success) ++success;
    }
    return n_episodes > 0 ? static_cast<double>(success) / n_episodes : 0.0;
}

namespace {

void write_curve_csv(const std::vector<CurvePoint>& curve,
                     const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "episode,frame,epsilon,mean_loss,eval_merge_rate\n";
    char buf[160];
    for (const auto& p : curve) {
        std::snprintf(buf, sizeof(buf), "%d,%ld,%.10g,%.10g,%.10g\n", p.episode, p.frame,
                      p.epsilon, p.mean_loss, p.eval_merge_rate);
        out << buf;
    }
}

} // namespace

TrainResult train(const ScenarioConfig& cfg, uint64_t seed,
                  const std::filesystem::path& out_dir,
                  const std::function<void(int, const EpisodeMetrics&)>& on_episode) {
    const HighwayEnv env(cfg);
    const TrainSettings& ts = cfg.train;
    const int agents = cfg.agent_count();
    const int decisions = cfg.physics.decisions_per_episode();
    const long total_frames =
        static_cast<long>(ts.episodes) * decisions * agents;

    QLearnerCore core(cfg.observation_width(), cfg.qnet, kNumActions, ts, cfg.replay,
                      agents, seed);
    Rng rng(seed);

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_manifest(cfg, seed, out_dir / "manifest.json");
    }

    TrainResult result;
    long frames = 0;
    const long updates_per_episode =
        static_cast<long>(agents) * ts.k_diss * std::max(1, ts.cycles_per_episode);

    auto run_update_block = [&](long count, double& loss_sum, long& loss_n) {
        for (long u = 0; u < count && core.ready(); ++u) {
            loss_sum += core.update(rng);
            ++loss_n;
        }
    };

    auto generate_episode = [&](double eps) {
        Policy policy = [&](const std::vector<float>& obs, int) {
            return act(core.policy(), obs, eps, rng);
        };
        auto episode = env.run_episode(policy, rng);
        for (auto& tr : episode.transitions) {
            ReplayEntry entry;
            entry.obs = std::move(tr.obs);
            entry.action = tr.action;
            entry.reward = tr.reward;
            entry.next_obs = std::move(tr.next_obs);
            entry.terminal = tr.terminal;
            entry.distance_to_merge = tr.distance_to_merge;
            core.observe(std::move(entry));
            ++frames;
        }
        return episode.metrics;
    };

    auto record_point = [&](int ep, double eps, double loss_sum, long loss_n) {
        CurvePoint p;
        p.episode = ep;
        p.frame = frames;
        p.epsilon = eps;
        p.mean_loss = loss_n > 0 ? loss_sum / static_cast<double>(loss_n) : 0.0;
        if (ts.eval_every > 0 && (ep + 1) % ts.eval_every == 0)
            p.eval_merge_rate =
                eval_merge_rate(env, core.policy(), ts.eval_episodes,
                                seed ^ 0x9e3779b97f4a7c15ull ^ static_cast<uint64_t>(ep));
        result.curve.push_back(p);
    };

    if (ts.strict_alg1) {
        // literal two-phase order: fill the buffer over all episodes, then
        // run the whole update budget
        for (int ep = 0; ep < ts.episodes; ++ep) {
            // schedule on the idealized frame count so that crash-shortened
            // episodes cannot stall the decay before training ends
            const double eps = epsilon_schedule(static_cast<long>(ep) * decisions * agents,
                                                total_frames, ts);
            const auto metrics = generate_episode(eps);
            result.episode_metrics.push_back(metrics);
            if (on_episode) on_episode(ep, metrics);
            record_point(ep, eps, 0.0, 0);
        }
        double loss_sum = 0.0;
        long loss_n = 0;
        run_update_block(static_cast<long>(ts.episodes) * updates_per_episode, loss_sum,
                         loss_n);
        record_point(ts.episodes, ts.epsf, loss_sum, loss_n);
    } else {
        for (int ep = 0; ep < ts.episodes; ++ep) {
            // schedule on the idealized frame count so that crash-shortened
            // episodes cannot stall the decay before training ends
            const double eps = epsilon_schedule(static_cast<long>(ep) * decisions * agents,
                                                total_frames, ts);
            const auto metrics = generate_episode(eps);
            result.episode_metrics.push_back(metrics);
            if (on_episode) on_episode(ep, metrics);

            double loss_sum = 0.0;
            long loss_n = 0;
            run_update_block(updates_per_episode, loss_sum, loss_n);
            record_point(ep, eps, loss_sum, loss_n);

            if (!out_dir.empty() && ts.checkpoint_every > 0 &&
                (ep + 1) % ts.checkpoint_every == 0)
                save_weights(core.policy(),
                             out_dir / ("weights_ep" + std::to_string(ep + 1) + ".bin"));
        }
    }

    result.weights = core.policy();
    result.trace = core.trace();
    result.frames = frames;
    result.updates = core.updates();

    if (!out_dir.empty()) {
        save_weights(result.weights, out_dir / "weights.bin");
        write_curve_csv(result.curve, out_dir / "training_curve.csv");
    }
    return result;
}

} // namespace mergesim
