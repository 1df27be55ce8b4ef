#pragma once

#include "mergesim/metrics.hpp"
#include "mergesim/qnet.hpp"
#include "mergesim/trainer.hpp"

#include <string>
#include <vector>

namespace mergesim {

/// Test-range variant of a scenario: the initialization spreads are doubled
/// relative to training.
ScenarioConfig test_range(ScenarioConfig cfg);

struct EvalResult {
    AggregateMetrics metrics;
    std::vector<EpisodeMetrics> episodes;
    std::vector<std::vector<TrajectoryRecord>> trajectories;  // filled on request
};

/// Greedy (epsilon = 0) evaluation on the broader test initialization range;
/// deterministic per seed (episode e uses stream seed + e).
EvalResult evaluate(const ScenarioConfig& cfg, const DenseNet<float>& net,
                    int n_episodes, uint64_t seed, bool record_trajectories = false);

/// Known experiment presets: HV+E, HV+C, HV+SC, AV+E, AV+C, AV+SC, HV+1SC.
/// HV/AV picks the mission vehicle class; E = phi 0, C = (phi*, theta pi/2),
/// SC = (phi*, theta pi/4); 1SC makes agent 0 SC and the rest egoistic.
ScenarioConfig apply_preset(ScenarioConfig base, const std::string& preset,
                            double phi_star);
const std::vector<std::string>& known_presets();

/// Objective of the SVO sweep: xi * f_C + (1 - xi) * f_MF.
double sweep_objective(double xi, double f_c, double f_mf);

/// Exact argmin over (f_C, f_MF) pairs; ties resolve to the smallest index.
size_t argmin_objective(const std::vector<std::pair<double, double>>& table, double xi);

struct SweepPoint {
    double phi = 0.0;
    AggregateMetrics metrics;
    double objective = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    size_t best_index = 0;
    double phi_star = 0.0;
};

/// Trains one SC policy per phi on the grid (same seed per point so curves
/// are comparable), evaluates each, and returns the objective table and
/// phi*. Points run in parallel when `threads` > 1.
SweepResult svo_sweep(const ScenarioConfig& base, const std::vector<double>& phi_grid,
                      double xi, uint64_t seed, int eval_episodes, int threads = 1);

/// Trains and evaluates every preset under identical seeds (paired design);
/// one row per (preset, seed) plus the per-preset aggregate rows.
std::vector<MetricsRow> run_preset_suite(const ScenarioConfig& base,
                                         const std::vector<std::string>& presets,
                                         const std::vector<uint64_t>& seeds,
                                         double phi_star, int eval_episodes,
                                         int threads = 1);

} // namespace mergesim
