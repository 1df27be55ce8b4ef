#pragma once

#include "mergesim/env.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace mergesim {

struct AggregateMetrics {
    int episodes = 0;
    double f_mf = 0.0;           // fraction of episodes with a failed merge
    double f_c = 0.0;            // fraction of episodes with >= 1 crash
    double f_independent = 0.0;  // crashes not involving the mission vehicle
    double dist_hv_mean = 0.0;   // [m]
    double dist_hv_se = 0.0;
    double dist_av_mean = 0.0;   // [m]
    double dist_av_se = 0.0;
};

AggregateMetrics aggregate(const std::vector<EpisodeMetrics>& episodes);

/// One row of the suite comparison table.
struct MetricsRow {
    std::string preset;
    uint64_t seed = 0;
    AggregateMetrics metrics;
};

/// CSV schema: preset,seed,episodes,f_MF,f_C,f_independent_crash,
/// dist_hv_mean,dist_av_mean
void write_metrics_csv(const std::vector<MetricsRow>& rows,
                       const std::filesystem::path& path);

/// Per-episode log: episode,merge_success,crashed,independent_crash,
/// dist_hv,dist_av
void write_episode_log(const std::vector<EpisodeMetrics>& episodes,
                       const std::filesystem::path& path);
std::vector<EpisodeMetrics> read_episode_log(const std::filesystem::path& path);

/// Line-delimited trajectory log:
/// time,id,l,d,speed,yaw,lane,autonomous,action,crashed
void write_trajectory_log(const std::vector<TrajectoryRecord>& records,
                          const std::filesystem::path& path);
std::vector<TrajectoryRecord> read_trajectory_log(const std::filesystem::path& path);

} // namespace mergesim
