#include "mergesim/evaluate.hpp"
#include "mergesim/metrics.hpp"
#include "mergesim/svg.hpp"
#include "mergesim/trainer.hpp"
#include "mergesim/weights_io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <numbers>
#include <thread>

namespace {

using namespace mergesim;

ScenarioConfig resolve_config(const std::string& config_path, const std::string& preset,
                              double phi_star) {
    ScenarioConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    if (!preset.empty()) cfg = apply_preset(cfg, preset, phi_star);
    return cfg;
}

int default_threads() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mixed-autonomy highway-merge simulator and Q-learning trainer"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", preset, weights_path, run_dir,
                trajectory_path;
    uint64_t seed = 1;
    double phi_star = std::numbers::pi / 4.0;
    double xi = 0.5;
    int episodes = 0, eval_episodes = 200, grid_points = 9, record_trajectories = 5;
    int threads = default_threads();
    std::vector<uint64_t> seeds{1, 2, 3};
    std::vector<std::string> suite_presets{"HV+E",  "HV+C",  "HV+SC", "AV+E",
                                           "AV+C",  "AV+SC", "HV+1SC"};

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "scenario config JSON");
        cmd->add_option("--seed", seed, "master RNG seed");
        cmd->add_option("--out", out_dir, "output directory");
    };

    auto* cmd_train = app.add_subcommand("train", "train a policy on the scenario");
    add_common(cmd_train);
    cmd_train->add_option("--preset", preset, "experiment preset, e.g. HV+SC");
    cmd_train->add_option("--phi-star", phi_star, "phi* used by C/SC presets [rad]");
    cmd_train->add_option("--episodes", episodes, "override training episode count");

    auto* cmd_eval = app.add_subcommand("evaluate", "greedy evaluation of a policy");
    add_common(cmd_eval);
    cmd_eval->add_option("--weights", weights_path, "weight checkpoint")->required();
    cmd_eval->add_option("--preset", preset, "experiment preset");
    cmd_eval->add_option("--phi-star", phi_star, "phi* used by C/SC presets [rad]");
    cmd_eval->add_option("--episodes", eval_episodes, "evaluation episodes");
    cmd_eval->add_option("--record-trajectories", record_trajectories,
                         "trajectory logs to keep");

    auto* cmd_sweep = app.add_subcommand("sweep-svo", "train/evaluate across phi grid");
    add_common(cmd_sweep);
    cmd_sweep->add_option("--xi", xi, "objective mixing weight");
    cmd_sweep->add_option("--grid-points", grid_points, "phi grid size on [0, pi/2]");
    cmd_sweep->add_option("--episodes", episodes, "override training episode count");
    cmd_sweep->add_option("--eval-episodes", eval_episodes, "evaluation episodes");
    cmd_sweep->add_option("--threads", threads, "parallel sweep points");

    auto* cmd_suite = app.add_subcommand("suite", "paired preset comparison");
    add_common(cmd_suite);
    cmd_suite->add_option("--presets", suite_presets, "presets to run");
    cmd_suite->add_option("--seeds", seeds, "paired seeds");
    cmd_suite->add_option("--phi-star", phi_star, "phi* used by C/SC presets [rad]");
    cmd_suite->add_option("--episodes", episodes, "override training episode count");
    cmd_suite->add_option("--eval-episodes", eval_episodes, "evaluation episodes");
    cmd_suite->add_option("--threads", threads, "parallel runs");

    auto* cmd_render = app.add_subcommand("render", "render trajectory log frames");
    add_common(cmd_render);
    cmd_render->add_option("--trajectory", trajectory_path, "trajectory CSV")->required();

    auto* cmd_plot = app.add_subcommand("plot", "export SVG plots from a run directory");
    add_common(cmd_plot);
    cmd_plot->add_option("--run", run_dir, "run directory with logs")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_train->parsed()) {
            auto cfg = resolve_config(config_path, preset, phi_star);
            if (episodes > 0) cfg.train.episodes = episodes;
            const auto result = train(cfg, seed, out_dir);
            std::printf("trained %d episodes, %ld frames, %ld updates -> %s\n",
                        cfg.train.episodes, result.frames, result.updates,
                        out_dir.c_str());
        } else if (cmd_eval->parsed()) {
            auto cfg = resolve_config(config_path, preset, phi_star);
            const auto net = load_weights(weights_path);
            const auto result =
                evaluate(cfg, net, eval_episodes, seed, record_trajectories > 0);
            std::filesystem::create_directories(out_dir);
            write_metrics_csv({{preset.empty() ? "custom" : preset, seed, result.metrics}},
                              std::filesystem::path(out_dir) / "metrics.csv");
            write_episode_log(result.episodes,
                              std::filesystem::path(out_dir) / "episodes.csv");
            const auto traj_dir = std::filesystem::path(out_dir) / "trajectories";
            std::filesystem::create_directories(traj_dir);
            const size_t keep = std::min(result.trajectories.size(),
                                         static_cast<size_t>(record_trajectories));
            for (size_t i = 0; i < keep; ++i) {
                char name[32];
                std::snprintf(name, sizeof(name), "ep%04zu.csv", i);
                write_trajectory_log(result.trajectories[i], traj_dir / name);
            }
            std::printf("episodes=%d f_MF=%.4f f_C=%.4f f_ind=%.4f\n",
                        result.metrics.episodes, result.metrics.f_mf, result.metrics.f_c,
                        result.metrics.f_independent);
        } else if (cmd_sweep->parsed()) {
            auto cfg = resolve_config(config_path, "", phi_star);
            if (episodes > 0) cfg.train.episodes = episodes;
            std::vector<double> grid;
            for (int i = 0; i < grid_points; ++i)
                grid.push_back(std::numbers::pi / 2.0 * i /
                               std::max(1, grid_points - 1));
            const auto sweep = svo_sweep(cfg, grid, xi, seed, eval_episodes, threads);
            std::filesystem::create_directories(out_dir);
            write_sweep_csv(sweep, std::filesystem::path(out_dir) / "sweep.csv");
            std::printf("phi* = %.6f rad (objective %.4f)\n", sweep.phi_star,
                        sweep.points[sweep.best_index].objective);
        } else if (cmd_suite->parsed()) {
            auto cfg = resolve_config(config_path, "", phi_star);
            if (episodes > 0) cfg.train.episodes = episodes;
            const auto rows = run_preset_suite(cfg, suite_presets, seeds, phi_star,
                                               eval_episodes, threads);
            std::filesystem::create_directories(out_dir);
            write_metrics_csv(rows, std::filesystem::path(out_dir) / "metrics.csv");
            for (const auto& r : rows)
                std::printf("%-7s seed=%llu f_MF=%.4f f_C=%.4f\n", r.preset.c_str(),
                            static_cast<unsigned long long>(r.seed), r.metrics.f_mf,
                            r.metrics.f_c);
        } else if (cmd_render->parsed()) {
            auto cfg = resolve_config(config_path, "", phi_star);
            const auto log = read_trajectory_log(trajectory_path);
            const auto frames = render_episode(log, cfg.road);
            write_frames(frames, out_dir, "frame");
            std::printf("wrote %zu frames to %s\n", frames.size(), out_dir.c_str());
        } else if (cmd_plot->parsed()) {
            const auto written = export_plots(run_dir, out_dir);
            for (const auto& p : written) std::printf("wrote %s\n", p.c_str());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
