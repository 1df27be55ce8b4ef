#include "mergesim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace mergesim {

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::string svg_open(double width, double height) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width)
        << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << ' '
        << fmt(height) << "\">\n";
    return out.str();
}

void rect(std::ostringstream& out, double x, double y, double w, double h,
          const std::string& fill, const std::string& extra = {}) {
    out << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(w)
        << "\" height=\"" << fmt(h) << "\" fill=\"" << fill << "\" " << extra << "/>\n";
}

void text(std::ostringstream& out, double x, double y, const std::string& s,
          int size = 12, const std::string& anchor = "middle") {
    out << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" font-size=\"" << size
        << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\">" << s
        << "</text>\n";
}

void line(std::ostringstream& out, double x1, double y1, double x2, double y2,
          const std::string& stroke, double width = 1.0,
          const std::string& extra = {}) {
    out << "<line x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1) << "\" x2=\"" << fmt(x2)
        << "\" y2=\"" << fmt(y2) << "\" stroke=\"" << stroke << "\" stroke-width=\""
        << fmt(width) << "\" " << extra << "/>\n";
}

const char* kAvColor = "#2e8b57";       // green
const char* kHvColor = "#4169e1";       // blue
const char* kMissionColor = "#ff8c00";  // orange
const char* kCrashColor = "#d22";

} // namespace

void write_sweep_csv(const SweepResult& sweep, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "phi,f_MF,f_C,f_independent_crash,objective\n";
    char buf[160];
    for (const auto& p : sweep.points) {
        std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%.10g,%.10g,%.10g\n", p.phi,
                      p.metrics.f_mf, p.metrics.f_c, p.metrics.f_independent,
                      p.objective);
        out << buf;
    }
}

SweepResult read_sweep_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::string header;
    std::getline(in, header);
    SweepResult sweep;
    std::string row;
    while (std::getline(in, row)) {
        if (row.empty()) continue;
        SweepPoint p;
        if (std::sscanf(row.c_str(), "%lf,%lf,%lf,%lf,%lf", &p.phi, &p.metrics.f_mf,
                        &p.metrics.f_c, &p.metrics.f_independent, &p.objective) != 5)
            throw std::runtime_error("malformed sweep row: " + row);
        sweep.points.push_back(p);
    }
    if (!sweep.points.empty()) {
        sweep.best_index = 0;
        for (size_t i = 1; i < sweep.points.size(); ++i)
            if (sweep.points[i].objective < sweep.points[sweep.best_index].objective)
                sweep.best_index = i;
        sweep.phi_star = sweep.points[sweep.best_index].phi;
    }
    return sweep;
}

std::string grouped_bar_svg(const std::vector<MetricsRow>& rows) {
    if (rows.empty()) throw PlotError("grouped_bar_svg: no metric rows");

    // collapse repeated (preset, seed) rows into per-preset means
    std::vector<std::string> order;
    std::map<std::string, std::vector<AggregateMetrics>> by_preset;
    for (const auto& r : rows) {
        if (!by_preset.contains(r.preset)) order.push_back(r.preset);
        by_preset[r.preset].push_back(r.metrics);
    }

    const double width = 160.0 * static_cast<double>(order.size()) + 100.0;
    const double height = 360.0;
    const double base_y = 300.0;
    const double plot_h = 240.0;

    std::ostringstream out;
    out << svg_open(width, height);
    rect(out, 0, 0, width, height, "white");
    line(out, 60, base_y, width - 20, base_y, "#333");
    line(out, 60, base_y - plot_h, 60, base_y, "#333");
    for (int tick = 0; tick <= 4; ++tick) {
        const double frac = tick / 4.0;
        const double y = base_y - frac * plot_h;
        line(out, 55, y, 60, y, "#333");
        text(out, 45, y + 4, fmt(frac), 10, "end");
    }

    const char* colors[3] = {"#c0504d", "#4f81bd", "#9bbb59"};
    const char* labels[3] = {"failed merge", "crash", "independent crash"};
    for (size_t pi = 0; pi < order.size(); ++pi) {
        const auto& group = by_preset[order[pi]];
        double f_mf = 0, f_c = 0, f_ind = 0;
        for (const auto& m : group) {
            f_mf += m.f_mf;
            f_c += m.f_c;
            f_ind += m.f_independent;
        }
        const double n = static_cast<double>(group.size());
        const double vals[3] = {f_mf / n, f_c / n, f_ind / n};
        const double gx = 80.0 + 160.0 * static_cast<double>(pi);
        for (int k = 0; k < 3; ++k) {
            const double h = std::clamp(vals[k], 0.0, 1.0) * plot_h;
            rect(out, gx + 42.0 * k, base_y - h, 36, h, colors[k]);
        }
        text(out, gx + 63, base_y + 18, order[pi]);
    }
    for (int k = 0; k < 3; ++k) {
        rect(out, 70.0 + 170.0 * k, 16, 12, 12, colors[k]);
        text(out, 88.0 + 170.0 * k, 26, labels[k], 11, "start");
    }
    out << "</svg>\n";
    return out.str();
}

std::string trajectory_fan_svg(
    const std::vector<std::vector<TrajectoryRecord>>& episodes, int mission_id) {
    if (episodes.empty()) throw PlotError("trajectory_fan_svg: no trajectories");

    double t_max = 1.0, l_max = 1.0;
    for (const auto& ep : episodes)
        for (const auto& r : ep)
            if (r.id == mission_id) {
                t_max = std::max(t_max, r.t);
                l_max = std::max(l_max, r.l);
            }

    const double width = 640.0, height = 420.0;
    const double x0 = 60.0, y0 = 370.0, plot_w = 540.0, plot_h = 320.0;
    std::ostringstream out;
    out << svg_open(width, height);
    rect(out, 0, 0, width, height, "white");
    line(out, x0, y0, x0 + plot_w, y0, "#333");
    line(out, x0, y0 - plot_h, x0, y0, "#333");
    text(out, x0 + plot_w / 2, y0 + 30, "time [s]");
    text(out, 16, y0 - plot_h / 2, "longitude [m]", 12, "start");

    for (const auto& ep : episodes) {
        std::ostringstream pts;
        bool crashed = false;
        for (const auto& r : ep) {
            if (r.id != mission_id) continue;
            crashed = crashed || r.crashed;
            pts << fmt(x0 + r.t / t_max * plot_w) << ','
                << fmt(y0 - r.l / l_max * plot_h) << ' ';
        }
        out << "<polyline fill=\"none\" stroke=\""
            << (crashed ? kCrashColor : kMissionColor)
            << "\" stroke-width=\"1.2\" stroke-opacity=\"0.6\" points=\"" << pts.str()
            << "\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string speed_bubble_svg(const std::vector<TrajectoryRecord>& episode,
                             const RoadNet& road) {
    if (episode.empty()) throw PlotError("speed_bubble_svg: empty trajectory");

    double l_max = road.highway_length;
    for (const auto& r : episode) l_max = std::max(l_max, r.l);
    const double sx = 900.0 / l_max, sy = 14.0;
    const double width = 940.0, height = road.total_width() * sy + 60.0;
    const double x0 = 20.0, y0 = 30.0;

    std::ostringstream out;
    out << svg_open(width, height);
    rect(out, 0, 0, width, height, "white");
    rect(out, x0, y0, l_max * sx, road.total_width() * sy, "#f2f2f2");
    for (int lane = 1; lane < road.total_lanes(); ++lane)
        line(out, x0, y0 + lane * road.lane_width * sy, x0 + l_max * sx,
             y0 + lane * road.lane_width * sy, "#bbb", 0.5, "stroke-dasharray=\"6,4\"");

    int mission_id = 0;
    for (const auto& r : episode) mission_id = std::max(mission_id, r.id);
    for (const auto& r : episode) {
        const char* color = r.crashed          ? kCrashColor
                            : r.id == mission_id ? kMissionColor
                            : r.autonomous       ? kAvColor
                                                 : kHvColor;
        out << "<circle cx=\"" << fmt(x0 + r.l * sx) << "\" cy=\""
            << fmt(y0 + r.d * sy) << "\" r=\"" << fmt(1.0 + r.speed * 0.18)
            << "\" fill=\"" << color << "\" fill-opacity=\"0.45\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string sweep_svg(const SweepResult& sweep) {
    if (sweep.points.empty()) throw PlotError("sweep_svg: empty sweep");

    double phi_max = 1e-9, y_max = 1e-9;
    for (const auto& p : sweep.points) {
        phi_max = std::max(phi_max, p.phi);
        y_max = std::max({y_max, p.metrics.f_mf, p.metrics.f_c, p.objective});
    }

    const double width = 640.0, height = 420.0;
    const double x0 = 60.0, y0 = 370.0, plot_w = 540.0, plot_h = 320.0;
    auto px = [&](double phi) { return x0 + phi / phi_max * plot_w; };
    auto py = [&](double v) { return y0 - v / y_max * plot_h; };

    std::ostringstream out;
    out << svg_open(width, height);
    rect(out, 0, 0, width, height, "white");
    line(out, x0, y0, x0 + plot_w, y0, "#333");
    line(out, x0, y0 - plot_h, x0, y0, "#333");
    text(out, x0 + plot_w / 2, y0 + 30, "phi [rad]");

    struct Series {
        const char* name;
        const char* color;
        std::function<double(const SweepPoint&)> value;
    };
    const Series series[3] = {
        {"failed merge", "#c0504d", [](const SweepPoint& p) { return p.metrics.f_mf; }},
        {"crash", "#4f81bd", [](const SweepPoint& p) { return p.metrics.f_c; }},
        {"objective", "#333333", [](const SweepPoint& p) { return p.objective; }},
    };
    for (int s = 0; s < 3; ++s) {
        std::ostringstream pts;
        for (const auto& p : sweep.points)
            pts << fmt(px(p.phi)) << ',' << fmt(py(series[s].value(p))) << ' ';
        out << "<polyline fill=\"none\" stroke=\"" << series[s].color
            << "\" stroke-width=\"1.6\" points=\"" << pts.str() << "\"/>\n";
        rect(out, 70.0 + 150.0 * s, 16, 12, 12, series[s].color);
        text(out, 88.0 + 150.0 * s, 26, series[s].name, 11, "start");
    }

    const auto& best = sweep.points[sweep.best_index];
    line(out, px(best.phi), y0, px(best.phi), y0 - plot_h, "#888", 1.0,
         "stroke-dasharray=\"4,4\"");
    out << "<circle cx=\"" << fmt(px(best.phi)) << "\" cy=\"" << fmt(py(best.objective))
        << "\" r=\"5\" fill=\"none\" stroke=\"#000\" stroke-width=\"1.5\"/>\n";
    text(out, px(best.phi), y0 - plot_h - 6, "phi*");
    out << "</svg>\n";
    return out.str();
}

std::vector<std::filesystem::path> export_plots(const std::filesystem::path& run_dir,
                                                const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;

    // stage everything in memory first so a failure writes no partial files
    std::vector<std::pair<std::string, std::string>> staged;  // (filename, content)

    const fs::path metrics_path = run_dir / "metrics.csv";
    if (fs::exists(metrics_path)) {
        std::ifstream in(metrics_path);
        std::string header, row;
        std::getline(in, header);
        std::vector<MetricsRow> rows;
        while (std::getline(in, row)) {
            if (row.empty()) continue;
            MetricsRow r;
            char preset[64];
            unsigned long long seed;
            if (std::sscanf(row.c_str(), "%63[^,],%llu,%d,%lf,%lf,%lf,%lf,%lf",
                            preset, &seed, &r.metrics.episodes, &r.metrics.f_mf,
                            &r.metrics.f_c, &r.metrics.f_independent,
                            &r.metrics.dist_hv_mean, &r.metrics.dist_av_mean) != 8)
                throw PlotError("malformed metrics row: " + row);
            r.preset = preset;
            r.seed = seed;
            rows.push_back(std::move(r));
        }
        if (!rows.empty()) staged.emplace_back("bars.svg", grouped_bar_svg(rows));
    }

    const fs::path traj_dir = run_dir / "trajectories";
    if (fs::is_directory(traj_dir)) {
        std::vector<fs::path> logs;
        for (const auto& e : fs::directory_iterator(traj_dir))
            if (e.path().extension() == ".csv") logs.push_back(e.path());
        std::sort(logs.begin(), logs.end());
        if (!logs.empty()) {
            std::vector<std::vector<TrajectoryRecord>> episodes;
            for (const auto& p : logs) episodes.push_back(read_trajectory_log(p));
            int mission_id = 0;
            for (const auto& r : episodes.front()) mission_id = std::max(mission_id, r.id);
            staged.emplace_back("trajectory_fan.svg",
                                trajectory_fan_svg(episodes, mission_id));
            staged.emplace_back("speed_bubbles.svg",
                                speed_bubble_svg(episodes.front(), RoadNet{}));
        }
    }

    const fs::path sweep_path = run_dir / "sweep.csv";
    if (fs::exists(sweep_path))
        staged.emplace_back("sweep.svg", sweep_svg(read_sweep_csv(sweep_path)));

    if (staged.empty())
        throw PlotError("export_plots: no plottable logs in " + run_dir.string());

    fs::create_directories(out_dir);
    std::vector<fs::path> written;
    for (const auto& [name, content] : staged) {
        const fs::path p = out_dir / name;
        std::ofstream out(p);
        if (!out) throw std::runtime_error("cannot write " + p.string());
        out << content;
        written.push_back(p);
    }
    return written;
}

std::vector<std::string> render_episode(const std::vector<TrajectoryRecord>& log,
                                        const RoadNet& road) {
    if (log.empty()) throw PlotError("render_episode: empty trajectory log");

    std::map<double, std::vector<const TrajectoryRecord*>> by_time;
    int mission_id = 0;
    for (const auto& r : log) {
        by_time[r.t].push_back(&r);
        mission_id = std::max(mission_id, r.id);
    }
    std::map<int, bool> crashed_yet;

    double l_max = road.highway_length;
    for (const auto& r : log) l_max = std::max(l_max, r.l);
    const double sx = 900.0 / l_max, sy = 14.0;
    const double width = 940.0, height = road.total_width() * sy + 60.0;
    const double x0 = 20.0, y0 = 30.0;

    std::vector<std::string> frames;
    for (const auto& [t, records] : by_time) {
        std::ostringstream out;
        out << svg_open(width, height);
        rect(out, 0, 0, width, height, "white");
        // highway body, then the ramp segment (only drawn where it exists)
        rect(out, x0, y0, l_max * sx, road.lane_count * road.lane_width * sy, "#e8e8e8");
        rect(out, x0, y0 + road.lane_count * road.lane_width * sy,
             road.ramp_merge_end * sx, road.lane_width * sy, "#dcdcdc");
        line(out, x0 + road.ramp_merge_end * sx, y0,
             x0 + road.ramp_merge_end * sx, y0 + road.total_width() * sy, "#900", 2.0);
        for (int lane = 1; lane <= road.lane_count; ++lane)
            line(out, x0, y0 + lane * road.lane_width * sy, x0 + l_max * sx,
                 y0 + lane * road.lane_width * sy, "#bbb", 0.5,
                 "stroke-dasharray=\"6,4\"");
        text(out, x0, 18, "t = " + fmt(t) + " s", 12, "start");

        for (const auto* r : records) {
            if (r->crashed) crashed_yet[r->id] = true;
            const bool crashed = crashed_yet[r->id] || r->crashed;
            const char* color = crashed           ? kCrashColor
                                : r->id == mission_id ? kMissionColor
                                : r->autonomous       ? kAvColor
                                                      : kHvColor;
            rect(out, x0 + (r->l - 2.5) * sx, y0 + (r->d - 1.0) * sy, 5.0 * sx,
                 2.0 * sy, color, "rx=\"2\"");
        }
        out << "</svg>\n";
        frames.push_back(out.str());
    }
    return frames;
}

void write_frames(const std::vector<std::string>& frames,
                  const std::filesystem::path& out_dir, const std::string& prefix) {
    std::filesystem::create_directories(out_dir);
    char name[64];
    for (size_t i = 0; i < frames.size(); ++i) {
        std::snprintf(name, sizeof(name), "%s_%04zu.svg", prefix.c_str(), i);
        std::ofstream out(out_dir / name);
        if (!out) throw std::runtime_error("cannot write frame " + std::string(name));
        out << frames[i];
    }
}

} // namespace mergesim
