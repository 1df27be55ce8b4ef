#include "mergesim/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mergesim {

namespace {

void mean_se(const std::vector<double>& xs, double& mean, double& se) {
    mean = 0.0;
    se = 0.0;
    if (xs.empty()) return;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    if (xs.size() < 2) return;
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs.size() - 1);
    se = std::sqrt(var / static_cast<double>(xs.size()));
}

} // namespace

AggregateMetrics aggregate(const std::vector<EpisodeMetrics>& episodes) {
    if (episodes.empty()) throw std::invalid_argument("aggregate: no episodes");
    AggregateMetrics agg;
    agg.episodes = static_cast<int>(episodes.size());
    std::vector<double> hv, av;
    hv.reserve(episodes.size());
    av.reserve(episodes.size());
    int failed = 0, crashed = 0, independent = 0;
    for (const auto& e : episodes) {
        if (!e.merge_success) ++failed;
        if (e.crashed) ++crashed;
        if (e.independent_crash) ++independent;
        hv.push_back(e.avg_distance_hv);
        av.push_back(e.avg_distance_av);
    }
    const double n = static_cast<double>(agg.episodes);
    agg.f_mf = failed / n;
    agg.f_c = crashed / n;
    agg.f_independent = independent / n;
    mean_se(hv, agg.dist_hv_mean, agg.dist_hv_se);
    mean_se(av, agg.dist_av_mean, agg.dist_av_se);
    return agg;
}

void write_metrics_csv(const std::vector<MetricsRow>& rows,
                       const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "preset,seed,episodes,f_MF,f_C,f_independent_crash,dist_hv_mean,dist_av_mean\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%s,%llu,%d,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                      r.preset.c_str(), static_cast<unsigned long long>(r.seed),
                      r.metrics.episodes, r.metrics.f_mf, r.metrics.f_c,
                      r.metrics.f_independent, r.metrics.dist_hv_mean,
                      r.metrics.dist_av_mean);
        out << buf;
    }
}

void write_episode_log(const std::vector<EpisodeMetrics>& episodes,
                       const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "episode,merge_success,crashed,independent_crash,dist_hv,dist_av\n";
    char buf[160];
    for (size_t i = 0; i < episodes.size(); ++i) {
        const auto& e = episodes[i];
        std::snprintf(buf, sizeof(buf), "%zu,%d,%d,%d,%.10g,%.10g\n", i,
                      e.merge_success ? 1 : 0, e.crashed ? 1 : 0,
                      e.independent_crash ? 1 : 0, e.avg_distance_hv, e.avg_distance_av);
        out << buf;
    }
}

std::vector<EpisodeMetrics> read_episode_log(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::string line;
    std::getline(in, line);  // header
    std::vector<EpisodeMetrics> episodes;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        EpisodeMetrics e;
        size_t idx;
        int ms, cr, ic;
        if (std::sscanf(line.c_str(), "%zu,%d,%d,%d,%lf,%lf", &idx, &ms, &cr, &ic,
                        &e.avg_distance_hv, &e.avg_distance_av) != 6)
            throw std::runtime_error("malformed episode log line: " + line);
        e.merge_success = ms != 0;
        e.crashed = cr != 0;
        e.independent_crash = ic != 0;
        episodes.push_back(e);
    }
    return episodes;
}

void write_trajectory_log(const std::vector<TrajectoryRecord>& records,
                          const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "time,id,l,d,speed,yaw,lane,autonomous,action,crashed\n";
    char buf[256];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof(buf), "%.10g,%d,%.10g,%.10g,%.10g,%.10g,%d,%d,%d,%d\n",
                      r.t, r.id, r.l, r.d, r.speed, r.yaw, r.lane, r.autonomous ? 1 : 0,
                      r.action, r.crashed ? 1 : 0);
        out << buf;
    }
}

std::vector<TrajectoryRecord> read_trajectory_log(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::string line;
    std::getline(in, line);  // header
    std::vector<TrajectoryRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        TrajectoryRecord r;
        int autonomous, crashed;
        if (std::sscanf(line.c_str(), "%lf,%d,%lf,%lf,%lf,%lf,%d,%d,%d,%d", &r.t, &r.id,
                        &r.l, &r.d, &r.speed, &r.yaw, &r.lane, &autonomous, &r.action,
                        &crashed) != 10)
            throw std::runtime_error("malformed trajectory log line: " + line);
        r.autonomous = autonomous != 0;
        r.crashed = crashed != 0;
        records.push_back(r);
    }
    return records;
}

} // namespace mergesim
