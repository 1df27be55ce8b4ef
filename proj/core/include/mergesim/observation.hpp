#pragma once

#include "mergesim/action_encoding.hpp"
#include "mergesim/road.hpp"
#include "mergesim/types.hpp"

#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace mergesim {

/// Ring buffer of the last h meta-actions of one vehicle, pre-filled with
/// Idle before the episode starts.
class ActionHistory {
public:
    explicit ActionHistory(int h = 10) : actions_(h, MetaAction::Idle) {}

    void push(MetaAction a) {
        actions_.erase(actions_.begin());
        actions_.push_back(a);
    }

    int size() const { return static_cast<int>(actions_.size()); }
    /// Most recent action last.
    const std::vector<MetaAction>& actions() const { return actions_; }

private:
    std::vector<MetaAction> actions_;
};

using HistoryMap = std::unordered_map<int, ActionHistory>;

/// Pushes one chosen action per vehicle; the oldest entry drops out.
void update_histories(HistoryMap& histories, const std::unordered_map<int, MetaAction>& actions);

/// Back-maps an HV's continuous behavior onto a meta-action for its history
/// row: lane changes map to LaneLeft/LaneRight, acceleration sign maps to
/// Accelerate/Decelerate with a dead-band, everything else is Idle.
MetaAction hv_meta_equivalent(int lane_delta, double accel, double dead_band = 0.5);

enum class RowOrder { Distance, Longitude, VehicleId };

struct ObservationConfig {
    int rows = 7;  // ego + mission + 5 nearest others
    int history = 10;
    ActionEncoding encoding = ActionEncoding::Binary;
    RowOrder order = RowOrder::Longitude;
    bool include_mission = true;

    int row_width() const { return 8 + history * encoding_width(encoding); }
};

/// Fixed-size per-agent observation. Row layout:
/// [p, l, d, dl/dt, dd/dt, cos(yaw), sin(yaw), lambda, unrolled history].
/// The ego row holds absolute coordinates, every other row is relative to
/// the ego; absent rows are all-zero with p = 0.
struct ObservationMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;  // row-major

    double& at(int r, int c) { return data[r * cols + c]; }
    double at(int r, int c) const { return data[r * cols + c]; }
    bool present(int r) const { return at(r, 0) != 0.0; }

    std::vector<double> flattened() const { return data; }
};

ObservationMatrix assemble_observation(const VehicleState& ego,
                                       const std::unordered_set<int>& visible,
                                       std::span<const VehicleState> states,
                                       const HistoryMap& histories,
                                       const ObservationConfig& config, const RoadNet& road);

} // namespace mergesim
