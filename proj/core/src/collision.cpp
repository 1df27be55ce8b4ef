#include "mergesim/collision.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace mergesim {

namespace {

struct Vec2 {
    double x, y;
};

std::array<Vec2, 4> corners(const VehicleState& s) {
    const double c = std::cos(s.yaw);
    const double sn = std::sin(s.yaw);
    const double hl = 0.5 * s.length;
    const double hw = 0.5 * s.width;
    std::array<Vec2, 4> out;
    const std::array<std::pair<double, double>, 4> local{{{hl, hw}, {hl, -hw}, {-hl, -hw}, {-hl, hw}}};
    for (int i = 0; i < 4; ++i) {
        out[i] = {s.l + c * local[i].first - sn * local[i].second,
                  s.d + sn * local[i].first + c * local[i].second};
    }
    return out;
}

// Separating-axis test for two convex quads; axes are the edge normals.
bool overlap_on_axis(const std::array<Vec2, 4>& a, const std::array<Vec2, 4>& b, Vec2 axis) {
    double amin = std::numeric_limits<double>::infinity(), amax = -amin;
    double bmin = amin, bmax = amax;
    for (const auto& p : a) {
        const double proj = p.x * axis.x + p.y * axis.y;
        amin = std::min(amin, proj);
        amax = std::max(amax, proj);
    }
    for (const auto& p : b) {
        const double proj = p.x * axis.x + p.y * axis.y;
        bmin = std::min(bmin, proj);
        bmax = std::max(bmax, proj);
    }
    return amax >= bmin && bmax >= amin;
}

} // namespace

bool rectangles_overlap(const VehicleState& a, const VehicleState& b) {
    const auto ca = corners(a);
    const auto cb = corners(b);
    for (const auto* quad : {&ca, &cb}) {
        for (int i = 0; i < 2; ++i) {
            const Vec2 e{(*quad)[i + 1].x - (*quad)[i].x, (*quad)[i + 1].y - (*quad)[i].y};
            const Vec2 axis{-e.y, e.x};
            if (!overlap_on_axis(ca, cb, axis)) return false;
        }
    }
    return true;
}

std::vector<std::pair<int, int>> detect_collisions(std::span<const VehicleState> states) {
    std::vector<std::pair<int, int>> pairs;
    for (size_t i = 0; i < states.size(); ++i) {
        for (size_t j = i + 1; j < states.size(); ++j) {
            // cheap reject: beyond the diagonal reach they cannot touch
            const double dl = states[i].l - states[j].l;
            const double dd = states[i].d - states[j].d;
            const double reach = 0.5 * (states[i].length + states[j].length +
                                        states[i].width + states[j].width);
            if (dl * dl + dd * dd > reach * reach) continue;
            if (rectangles_overlap(states[i], states[j]))
                pairs.emplace_back(states[i].id, states[j].id);
        }
    }
    return pairs;
}

bool ramp_barrier_check(const VehicleState& state, const RoadNet& road) {
    if (state.lane != road.ramp_lane()) return false;
    return state.l + 0.5 * state.length >= road.ramp_merge_end;
}

} // namespace mergesim
