#include "mergesim/collision.hpp"
#include "mergesim/env.hpp"
#include "mergesim/qnet.hpp"
#include "mergesim/replay_buffer.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace mergesim;

namespace {

std::vector<VehicleState> random_scene(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> l(0.0, 500.0), d(2.0, 14.0);
    std::vector<VehicleState> states(n);
    for (int i = 0; i < n; ++i) {
        states[i].id = i;
        states[i].l = l(rng);
        states[i].d = d(rng);
        states[i].lane = static_cast<int>(states[i].d / 4.0);
        states[i].speed = 24.0;
    }
    return states;
}

void BM_CollisionDetection(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const auto scene = random_scene(static_cast<int>(state.range(0)), rng);
    for (auto _ : state) benchmark::DoNotOptimize(detect_collisions(scene));
}
BENCHMARK(BM_CollisionDetection)->Arg(8)->Arg(25)->Arg(64);

void BM_ReplayPushSample(benchmark::State& state) {
    ReplayBuffer buf(100000);
    Rng rng(2);
    ReplayEntry e;
    e.obs.assign(406, 0.5f);
    e.next_obs.assign(406, 0.5f);
    double dist = 0.0;
    for (int i = 0; i < 2000; ++i) {
        e.distance_to_merge = dist;
        dist = dist < 300.0 ? dist + 0.37 : 0.0;
        buf.push(e);
    }
    for (auto _ : state) {
        e.distance_to_merge = dist;
        buf.push(e);
        benchmark::DoNotOptimize(buf.sample_batch(32, rng));
    }
}
BENCHMARK(BM_ReplayPushSample);

void BM_QNetForward(benchmark::State& state) {
    const auto net = init_network<float>(406, {256, 128, 256, 128}, 5, 3);
    std::vector<float> x(406, 0.1f);
    for (auto _ : state)
        benchmark::DoNotOptimize(forward(net, std::span<const float>(x)));
}
BENCHMARK(BM_QNetForward);

void BM_TdBackward(benchmark::State& state) {
    const auto net = init_network<float>(406, {64, 64}, 5, 4);
    const auto target = net;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<float> u(-1.0f, 1.0f);
    TransitionBatch<float> batch;
    for (int s = 0; s < 32; ++s) {
        std::vector<float> obs(406), next(406);
        for (auto& v : obs) v = u(rng);
        for (auto& v : next) v = u(rng);
        batch.obs.push_back(obs);
        batch.next_obs.push_back(next);
        batch.action.push_back(s % 5);
        batch.reward.push_back(0.1);
        batch.terminal.push_back(0);
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(td_loss_and_grads(net, target, batch, 0.95));
}
BENCHMARK(BM_TdBackward);

void BM_EpisodeIdlePolicy(benchmark::State& state) {
    ScenarioConfig cfg;
    cfg.n_av = 3;
    cfg.n_hv = 8;
    cfg.init.hv_lanes = {0, 1};
    const HighwayEnv env(cfg);
    Policy idle = [](const std::vector<float>&, int) { return MetaAction::Idle; };
    uint64_t seed = 0;
    for (auto _ : state) {
        Rng rng(seed++);
        benchmark::DoNotOptimize(env.run_episode(idle, rng));
    }
}
BENCHMARK(BM_EpisodeIdlePolicy);

} // namespace

BENCHMARK_MAIN();
