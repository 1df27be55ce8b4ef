#include "mergesim/observation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mergesim {

void update_histories(HistoryMap& histories, const std::unordered_map<int, MetaAction>& actions) {
    for (const auto& [id, action] : actions) {
        auto it = histories.find(id);
        if (it == histories.end())
            throw std::invalid_argument("update_histories: unknown vehicle id");
        it->second.push(action);
    }
}

MetaAction hv_meta_equivalent(int lane_delta, double accel, double dead_band) {
    if (lane_delta < 0) return MetaAction::LaneLeft;
    if (lane_delta > 0) return MetaAction::LaneRight;
    if (accel > dead_band) return MetaAction::Accelerate;
    if (accel < -dead_band) return MetaAction::Decelerate;
    return MetaAction::Idle;
}

namespace {

void fill_row(ObservationMatrix& obs, int row, const VehicleState& v, const VehicleState& ego,
              bool absolute, const HistoryMap& histories, const ObservationConfig& config) {
    obs.at(row, 0) = 1.0;
    obs.at(row, 1) = absolute ? v.l : v.l - ego.l;
    obs.at(row, 2) = absolute ? v.d : v.d - ego.d;
    obs.at(row, 3) = v.speed * std::cos(v.yaw);
    obs.at(row, 4) = v.speed * std::sin(v.yaw);
    obs.at(row, 5) = std::cos(v.yaw);
    obs.at(row, 6) = std::sin(v.yaw);
    obs.at(row, 7) = v.autonomous ? 1.0 : 0.0;

    const auto hist = histories.find(v.id);
    int col = 8;
    if (hist != histories.end()) {
        // most recent action first in the unrolled tail
        const auto& actions = hist->second.actions();
        for (auto it = actions.rbegin(); it != actions.rend(); ++it) {
            for (double x : encode_action(*it, config.encoding)) obs.at(row, col++) = x;
        }
    }
}

} // namespace

ObservationMatrix assemble_observation(const VehicleState& ego,
                                       const std::unordered_set<int>& visible,
                                       std::span<const VehicleState> states,
                                       const HistoryMap& histories,
                                       const ObservationConfig& config, const RoadNet& road) {
    (void)road;
    if (!ego.autonomous || ego.crashed)
        throw std::invalid_argument("assemble_observation: ego must be an uncrashed AV");

    ObservationMatrix obs;
    obs.rows = config.rows;
    obs.cols = config.row_width();
    obs.data.assign(static_cast<size_t>(obs.rows) * obs.cols, 0.0);

    fill_row(obs, 0, ego, ego, /*absolute=*/true, histories, config);

    int next_row = 1;
    const VehicleState* mission = nullptr;
    if (config.include_mission) {
        for (const auto& v : states) {
            if (v.is_mission && visible.contains(v.id)) {
                mission = &v;
                break;
            }
        }
        if (mission) fill_row(obs, next_row, *mission, ego, false, histories, config);
        ++next_row;  // mission slot stays reserved (zero) even when invisible
    }

    std::vector<const VehicleState*> others;
    for (const auto& v : states) {
        if (v.id == ego.id || !visible.contains(v.id)) continue;
        if (mission && v.id == mission->id) continue;
        others.push_back(&v);
    }
    auto dist2 = [&](const VehicleState* v) {
        const double dl = v->l - ego.l, dd = v->d - ego.d;
        return dl * dl + dd * dd;
    };
    std::sort(others.begin(), others.end(), [&](const auto* a, const auto* b) {
        const double da = dist2(a), db = dist2(b);
        return da != db ? da < db : a->id < b->id;
    });
    if (static_cast<int>(others.size()) > obs.rows - next_row)
        others.resize(obs.rows - next_row);

    switch (config.order) {
        case RowOrder::Distance: break;  // already nearest-first
        case RowOrder::Longitude:
            std::sort(others.begin(), others.end(),
                      [](const auto* a, const auto* b) { return a->l < b->l; });
            break;
        case RowOrder::VehicleId:
            std::sort(others.begin(), others.end(),
                      [](const auto* a, const auto* b) { return a->id < b->id; });
            break;
    }

    for (const auto* v : others) fill_row(obs, next_row++, *v, ego, false, histories, config);
    return obs;
}

} // namespace mergesim
