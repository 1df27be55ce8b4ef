#include <doctest.h>

#include "mergesim/evaluate.hpp"
#include "mergesim/svg.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <set>

using namespace mergesim;

namespace {

/// Minimal well-formedness check for the SVG subset we emit: every opened
/// tag is closed in order, attributes quoted.
bool well_formed_xml(const std::string& text) {
    std::vector<std::string> stack;
    size_t pos = 0;
    while ((pos = text.find('<', pos)) != std::string::npos) {
        const size_t end = text.find('>', pos);
        if (end == std::string::npos) return false;
        std::string tag = text.substr(pos + 1, end - pos - 1);
        pos = end + 1;
        if (tag.starts_with("?") || tag.starts_with("!")) continue;
        if (tag.starts_with("/")) {
            if (stack.empty()) return false;
            if (stack.back() != tag.substr(1)) return false;
            stack.pop_back();
            continue;
        }
        if (tag.ends_with("/")) continue;  // self-closing
        const std::string name = tag.substr(0, tag.find_first_of(" \t\n"));
        stack.push_back(name);
    }
    return stack.empty();
}

ScenarioConfig tiny_cfg() {
    ScenarioConfig cfg;
    cfg.n_av = 1;
    cfg.n_hv = 2;
    cfg.init.av_lanes = {2};
    cfg.init.hv_lanes = {0, 1};
    cfg.qnet.hidden = {16};
    return cfg;
}

} // namespace

TEST_CASE("test range doubles the initialization spreads") {
    ScenarioConfig cfg;
    const auto test = test_range(cfg);
    CHECK(test.init.delta_l == doctest::Approx(2.0 * cfg.init.delta_l));
    CHECK(test.init.delta_v == doctest::Approx(2.0 * cfg.init.delta_v));
    CHECK(test.init.mu_l == cfg.init.mu_l);
}

TEST_CASE("experiment presets configure agents per definition") {
    constexpr double phi_star = 0.6;
    constexpr double half_pi = std::numbers::pi / 2.0;
    constexpr double quarter_pi = std::numbers::pi / 4.0;
    ScenarioConfig base;
    base.n_av = 4;

    const auto hv_e = apply_preset(base, "HV+E", phi_star);
    CHECK_FALSE(hv_e.mission_autonomous);
    CHECK(hv_e.agent_count() == 4);
    for (int i = 0; i < 4; ++i) CHECK(hv_e.agent_svo(i).phi == 0.0);

    const auto hv_c = apply_preset(base, "HV+C", phi_star);
    for (int i = 0; i < 4; ++i) {
        CHECK(hv_c.agent_svo(i).phi == phi_star);
        CHECK(hv_c.agent_svo(i).theta == half_pi);
    }

    const auto av_sc = apply_preset(base, "AV+SC", phi_star);
    CHECK(av_sc.mission_autonomous);
    CHECK(av_sc.agent_count() == 5);
    for (int i = 0; i < 5; ++i) {
        CHECK(av_sc.agent_svo(i).phi == phi_star);
        CHECK(av_sc.agent_svo(i).theta == quarter_pi);
    }

    // exactly one SC agent among egoistic peers
    const auto one_sc = apply_preset(base, "HV+1SC", phi_star);
    int sc_agents = 0;
    for (int i = 0; i < one_sc.agent_count(); ++i)
        if (one_sc.agent_svo(i).phi == phi_star) ++sc_agents;
    CHECK(sc_agents == 1);
    CHECK(one_sc.agent_svo(0).theta == quarter_pi);

    CHECK_THROWS_AS(apply_preset(base, "XX+E", phi_star), std::invalid_argument);
    CHECK_THROWS_AS(apply_preset(base, "AV+1SC", phi_star), std::invalid_argument);
}

TEST_CASE("sweep objective argmin against hand evaluation") {
    // synthetic curves: index 1 is best for xi = 0.5
    const std::vector<std::pair<double, double>> table{
        {0.3, 0.4}, {0.12, 0.14}, {0.2, 0.3}};
    CHECK(argmin_objective(table, 0.5) == 1);
    // xi = 1 minimizes crashes alone, xi = 0 failed merges alone
    const std::vector<std::pair<double, double>> skew{{0.1, 0.9}, {0.9, 0.1}};
    CHECK(argmin_objective(skew, 1.0) == 0);
    CHECK(argmin_objective(skew, 0.0) == 1);
    // ties resolve to the smallest index
    const std::vector<std::pair<double, double>> tie{{0.2, 0.2}, {0.2, 0.2}};
    CHECK(argmin_objective(tie, 0.5) == 0);

    CHECK(sweep_objective(0.25, 0.4, 0.8) == doctest::Approx(0.25 * 0.4 + 0.75 * 0.8));
    CHECK_THROWS_AS(sweep_objective(1.5, 0.1, 0.1), std::invalid_argument);
}

TEST_CASE("aggregation is consistent with the per-episode log") {
    std::vector<EpisodeMetrics> episodes(4);
    episodes[0].merge_success = true;
    episodes[0].avg_distance_hv = 400.0;
    episodes[0].avg_distance_av = 420.0;
    episodes[1].crashed = true;
    episodes[1].avg_distance_hv = 300.0;
    episodes[2].crashed = true;
    episodes[2].independent_crash = true;
    episodes[3].merge_success = true;
    episodes[3].avg_distance_hv = 380.0;

    const auto agg = aggregate(episodes);
    CHECK(agg.episodes == 4);
    CHECK(agg.f_mf == doctest::Approx(0.5));
    CHECK(agg.f_c == doctest::Approx(0.5));
    CHECK(agg.f_independent == doctest::Approx(0.25));

    const auto path = std::filesystem::temp_directory_path() / "mergesim_episodes.csv";
    write_episode_log(episodes, path);
    const auto reread = read_episode_log(path);
    REQUIRE(reread.size() == episodes.size());
    const auto agg2 = aggregate(reread);
    CHECK(agg2.f_mf == agg.f_mf);
    CHECK(agg2.f_c == agg.f_c);
    CHECK(agg2.dist_hv_mean == doctest::Approx(agg.dist_hv_mean));
    std::filesystem::remove(path);

    CHECK_THROWS_AS(aggregate({}), std::invalid_argument);
}

TEST_CASE("paired seeds give identical initial worlds across presets") {
    const auto cfg = tiny_cfg();
    const auto net = init_network<float>(cfg.observation_width(), {16}, 5, 2);

    const auto a = evaluate(apply_preset(cfg, "HV+E", 0.7), net, 2, 99, true);
    const auto b = evaluate(apply_preset(cfg, "HV+SC", 0.7), net, 2, 99, true);
    REQUIRE(a.trajectories.size() == 2);
    REQUIRE(b.trajectories.size() == 2);
    for (int ep = 0; ep < 2; ++ep) {
        for (size_t i = 0; i < a.trajectories[ep].size(); ++i) {
            const auto& ra = a.trajectories[ep][i];
            if (ra.t > 0.0) break;  // compare the pre-first-decision world
            const auto& rb = b.trajectories[ep][i];
            CHECK(ra.id == rb.id);
            CHECK(ra.l == rb.l);
            CHECK(ra.d == rb.d);
            CHECK(ra.speed == rb.speed);
        }
    }

    // aggregate recomputed from the episode list matches exactly
    const auto again = aggregate(a.episodes);
    CHECK(again.f_mf == a.metrics.f_mf);
    CHECK(again.f_c == a.metrics.f_c);
}

TEST_CASE("SVG outputs are well formed and complete") {
    // bars
    std::vector<MetricsRow> rows;
    AggregateMetrics m;
    m.episodes = 10;
    m.f_mf = 0.4;
    m.f_c = 0.3;
    m.f_independent = 0.1;
    rows.push_back({"HV+E", 1, m});
    m.f_mf = 0.1;
    rows.push_back({"HV+SC", 1, m});
    const auto bars = grouped_bar_svg(rows);
    CHECK(well_formed_xml(bars));
    CHECK(bars.find("HV+SC") != std::string::npos);

    // trajectory fan: one polyline per episode
    const auto cfg = tiny_cfg();
    const auto net = init_network<float>(cfg.observation_width(), {16}, 5, 3);
    const auto eval = evaluate(cfg, net, 3, 5, true);
    const int mission_id = cfg.n_av + cfg.n_hv;
    const auto fan = trajectory_fan_svg(eval.trajectories, mission_id);
    CHECK(well_formed_xml(fan));
    size_t polylines = 0, pos = 0;
    while ((pos = fan.find("<polyline", pos)) != std::string::npos) {
        ++polylines;
        pos += 9;
    }
    CHECK(polylines == eval.trajectories.size());

    const auto bubbles = speed_bubble_svg(eval.trajectories[0], cfg.road);
    CHECK(well_formed_xml(bubbles));

    // sweep plot with phi* marker
    SweepResult sweep;
    for (int i = 0; i < 5; ++i) {
        SweepPoint p;
        p.phi = 0.2 * i;
        p.metrics.f_mf = 0.5 - 0.05 * i;
        p.metrics.f_c = 0.2;
        p.objective = 0.5 * (p.metrics.f_mf + p.metrics.f_c);
        sweep.points.push_back(p);
    }
    sweep.best_index = 4;
    sweep.phi_star = 0.8;
    const auto sweep_plot = sweep_svg(sweep);
    CHECK(well_formed_xml(sweep_plot));
    CHECK(sweep_plot.find("phi*") != std::string::npos);

    CHECK_THROWS_AS(grouped_bar_svg({}), PlotError);
    CHECK_THROWS_AS(trajectory_fan_svg({}, 0), PlotError);
}

TEST_CASE("episode rendering produces one frame per decision step") {
    const auto cfg = tiny_cfg();
    const auto net = init_network<float>(cfg.observation_width(), {16}, 5, 7);
    const auto eval = evaluate(cfg, net, 1, 13, true);
    REQUIRE_FALSE(eval.trajectories.empty());
    const auto& log = eval.trajectories[0];

    const auto frames = render_episode(log, cfg.road);
    std::set<double> times;
    for (const auto& r : log) times.insert(r.t);
    CHECK(frames.size() == times.size());
    for (const auto& f : frames) CHECK(well_formed_xml(f));

    // stationary single vehicle renders identical frames
    std::vector<TrajectoryRecord> still;
    for (int t = 0; t < 3; ++t) {
        TrajectoryRecord r;
        r.t = t;
        r.id = 0;
        r.l = 100.0;
        r.d = 6.0;
        r.lane = 1;
        still.push_back(r);
    }
    const auto still_frames = render_episode(still, cfg.road);
    REQUIRE(still_frames.size() == 3);
    auto strip_time = [](std::string s) {
        const auto p = s.find("t = ");
        if (p != std::string::npos) s.erase(p, s.find("</text>", p) - p);
        return s;
    };
    CHECK(strip_time(still_frames[0]) == strip_time(still_frames[1]));
    CHECK(strip_time(still_frames[1]) == strip_time(still_frames[2]));
}

TEST_CASE("export_plots fails cleanly on an empty run directory") {
    namespace fs = std::filesystem;
    const auto run = fs::temp_directory_path() / "mergesim_empty_run";
    const auto out = fs::temp_directory_path() / "mergesim_empty_out";
    fs::remove_all(run);
    fs::remove_all(out);
    fs::create_directories(run);
    CHECK_THROWS_AS(export_plots(run, out), PlotError);
    CHECK_FALSE(fs::exists(out));
    fs::remove_all(run);
}

TEST_CASE("export_plots writes plots for present logs") {
    namespace fs = std::filesystem;
    const auto run = fs::temp_directory_path() / "mergesim_run";
    const auto out = fs::temp_directory_path() / "mergesim_plots";
    fs::remove_all(run);
    fs::remove_all(out);
    fs::create_directories(run / "trajectories");

    const auto cfg = tiny_cfg();
    const auto net = init_network<float>(cfg.observation_width(), {16}, 5, 7);
    const auto eval = evaluate(cfg, net, 2, 17, true);
    write_metrics_csv({{"HV+E", 17, eval.metrics}}, run / "metrics.csv");
    write_episode_log(eval.episodes, run / "episodes.csv");
    write_trajectory_log(eval.trajectories[0], run / "trajectories" / "ep0000.csv");
    write_trajectory_log(eval.trajectories[1], run / "trajectories" / "ep0001.csv");

    const auto written = export_plots(run, out);
    CHECK(written.size() == 3);  // bars, fan, bubbles
    for (const auto& p : written) CHECK(fs::exists(p));
    fs::remove_all(run);
    fs::remove_all(out);
}
