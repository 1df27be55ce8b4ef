#include "mergesim/evaluate.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace mergesim {

ScenarioConfig test_range(ScenarioConfig cfg) {
    cfg.init.delta_l *= 2.0;
    cfg.init.delta_v *= 2.0;
    return cfg;
}

EvalResult evaluate(const ScenarioConfig& cfg, const DenseNet<float>& net,
                    int n_episodes, uint64_t seed, bool record_trajectories) {
    if (n_episodes < 1) throw std::invalid_argument("evaluate: n_episodes < 1");
    const HighwayEnv env(test_range(cfg));
    Policy greedy = [&](const std::vector<float>& obs, int) {
        return meta_action_from_code(greedy_action(net, obs));
    };
    EvalResult result;
    for (int e = 0; e < n_episodes; ++e) {
        Rng rng(seed + static_cast<uint64_t>(e));
        auto episode = env.run_episode(greedy, rng, record_trajectories);
        result.episodes.push_back(episode.metrics);
        if (record_trajectories)
            result.trajectories.push_back(std::move(episode.trajectory));
    }
    result.metrics = aggregate(result.episodes);
    return result;
}

const std::vector<std::string>& known_presets() {
    static const std::vector<std::string> presets{"HV+E",  "HV+C",  "HV+SC", "AV+E",
                                                  "AV+C",  "AV+SC", "HV+1SC"};
    return presets;
}

ScenarioConfig apply_preset(ScenarioConfig base, const std::string& preset,
                            double phi_star) {
    constexpr double half_pi = std::numbers::pi / 2.0;
    constexpr double quarter_pi = std::numbers::pi / 4.0;

    std::string mission, social;
    const auto plus = preset.find('+');
    if (plus != std::string::npos) {
        mission = preset.substr(0, plus);
        social = preset.substr(plus + 1);
    }
    if ((mission != "HV" && mission != "AV") ||
        (social != "E" && social != "C" && social != "SC" && social != "1SC"))
        throw std::invalid_argument("unknown preset: " + preset);
    if (social == "1SC" && mission != "HV")
        throw std::invalid_argument("1SC preset is defined for an HV mission only");

    base.mission_autonomous = mission == "AV";

    SvoParams egoistic = base.svo;
    egoistic.phi = 0.0;
    SvoParams social_params = base.svo;
    social_params.phi = phi_star;
    social_params.theta = social == "C" ? half_pi : quarter_pi;

    const int agents = base.agent_count();
    if (social == "E") {
        base.per_agent_svo.assign(agents, egoistic);
    } else if (social == "1SC") {
        base.per_agent_svo.assign(agents, egoistic);
        base.per_agent_svo[0] = social_params;
    } else {
        base.per_agent_svo.assign(agents, social_params);
    }
    base.svo = social == "E" ? egoistic : social_params;
    return base;
}

double sweep_objective(double xi, double f_c, double f_mf) {
    if (xi < 0.0 || xi > 1.0) throw std::invalid_argument("sweep_objective: xi out of [0,1]");
    return xi * f_c + (1.0 - xi) * f_mf;
}

size_t argmin_objective(const std::vector<std::pair<double, double>>& table, double xi) {
    if (table.empty()) throw std::invalid_argument("argmin_objective: empty table");
    size_t best = 0;
    double best_val = sweep_objective(xi, table[0].first, table[0].second);
    for (size_t i = 1; i < table.size(); ++i) {
        const double v = sweep_objective(xi, table[i].first, table[i].second);
        if (v < best_val) {
            best = i;
            best_val = v;
        }
    }
    return best;
}

namespace {

/// Runs jobs [0, n) on up to `threads` workers; each job is independent.
void parallel_for(int n, int threads, const std::function<void(int)>& job) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) job(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace

SweepResult svo_sweep(const ScenarioConfig& base, const std::vector<double>& phi_grid,
                      double xi, uint64_t seed, int eval_episodes, int threads) {
    if (phi_grid.empty()) throw std::invalid_argument("svo_sweep: empty grid");
    SweepResult result;
    result.points.resize(phi_grid.size());

    parallel_for(static_cast<int>(phi_grid.size()), threads, [&](int i) {
        ScenarioConfig cfg = base;
        SvoParams svo = base.svo;
        svo.phi = phi_grid[i];
        cfg.svo = svo;
        cfg.per_agent_svo.assign(cfg.agent_count(), svo);
        const auto trained = train(cfg, seed);
        const auto eval = evaluate(cfg, trained.weights, eval_episodes, seed);
        result.points[i].phi = phi_grid[i];
        result.points[i].metrics = eval.metrics;
    });

    std::vector<std::pair<double, double>> table;
    for (auto& p : result.points) {
        p.objective = sweep_objective(xi, p.metrics.f_c, p.metrics.f_mf);
        table.emplace_back(p.metrics.f_c, p.metrics.f_mf);
    }
    result.best_index = argmin_objective(table, xi);
    result.phi_star = result.points[result.best_index].phi;
    return result;
}

std::vector<MetricsRow> run_preset_suite(const ScenarioConfig& base,
                                         const std::vector<std::string>& presets,
                                         const std::vector<uint64_t>& seeds,
                                         double phi_star, int eval_episodes,
                                         int threads) {
    if (presets.empty() || seeds.empty())
        throw std::invalid_argument("run_preset_suite: empty presets or seeds");

    const int n = static_cast<int>(presets.size() * seeds.size());
    std::vector<MetricsRow> rows(n);
    parallel_for(n, threads, [&](int i) {
        const auto& preset = presets[i / seeds.size()];
        const uint64_t seed = seeds[i % seeds.size()];
        const auto cfg = apply_preset(base, preset, phi_star);
        const auto trained = train(cfg, seed);
        const auto eval = evaluate(cfg, trained.weights, eval_episodes, seed);
        rows[i] = {preset, seed, eval.metrics};
    });
    return rows;
}

} // namespace mergesim
