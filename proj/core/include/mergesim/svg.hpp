#pragma once

#include "mergesim/evaluate.hpp"
#include "mergesim/metrics.hpp"
#include "mergesim/road.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace mergesim {

/// Raised when a plotting input (metrics CSV, trajectory log, sweep table)
/// is missing or empty; no output files are written in that case.
class PlotError : public std::runtime_error {
public:
    explicit PlotError(const std::string& what) : std::runtime_error(what) {}
};

/// Sweep table IO: phi,f_MF,f_C,f_independent_crash,objective
void write_sweep_csv(const SweepResult& sweep, const std::filesystem::path& path);
SweepResult read_sweep_csv(const std::filesystem::path& path);

/// Grouped bar chart of f_MF / f_C / independent-crash rate per preset.
std::string grouped_bar_svg(const std::vector<MetricsRow>& rows);

/// Mission-vehicle longitude vs time, one polyline per episode.
std::string trajectory_fan_svg(
    const std::vector<std::vector<TrajectoryRecord>>& episodes, int mission_id);

/// Top-down positions of one episode with marker size proportional to speed.
std::string speed_bubble_svg(const std::vector<TrajectoryRecord>& episode,
                             const RoadNet& road);

/// Sweep objective and component curves with the phi* marker.
std::string sweep_svg(const SweepResult& sweep);

/// Reads the logs in `run_dir` (metrics.csv, trajectories/ep*.csv,
/// sweep.csv — whichever exist) and writes the corresponding SVGs to
/// `out_dir`. Throws PlotError and writes nothing when no input is present.
std::vector<std::filesystem::path> export_plots(const std::filesystem::path& run_dir,
                                                const std::filesystem::path& out_dir);

/// One top-down SVG frame per decision step; AVs green, HVs blue, the
/// mission vehicle orange, crashed vehicles red from the crash step onward.
std::vector<std::string> render_episode(const std::vector<TrajectoryRecord>& log,
                                        const RoadNet& road);

void write_frames(const std::vector<std::string>& frames,
                  const std::filesystem::path& out_dir, const std::string& prefix);

} // namespace mergesim
