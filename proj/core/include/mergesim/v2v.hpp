#pragma once

#include "mergesim/types.hpp"

#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace mergesim {

/// Distance-threshold communication graph over autonomous vehicles.
/// HVs are perceived but never connected.
struct V2VGraph {
    double comm_range = 100.0;
    std::unordered_map<int, std::vector<int>> adjacency;  // AV id -> neighbor AV ids

    bool has_edge(int a, int b) const;
    const std::vector<int>& neighbors(int id) const;
};

V2VGraph build_v2v_graph(std::span<const VehicleState> states, double comm_range);

/// Vehicles visible to ego directly or through one-hop V2V sharing: the
/// union of everything within perception_range of ego and of each of ego's
/// graph neighbors. Ego itself is excluded.
std::unordered_set<int> shared_perception(const VehicleState& ego, const V2VGraph& graph,
                                          std::span<const VehicleState> states,
                                          double perception_range);

} // namespace mergesim
