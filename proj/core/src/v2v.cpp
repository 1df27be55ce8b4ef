#include "mergesim/v2v.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mergesim {

namespace {

double distance(const VehicleState& a, const VehicleState& b) {
    return std::hypot(a.l - b.l, a.d - b.d);
}

} // namespace

bool V2VGraph::has_edge(int a, int b) const {
    const auto it = adjacency.find(a);
    if (it == adjacency.end()) return false;
    return std::find(it->second.begin(), it->second.end(), b) != it->second.end();
}

const std::vector<int>& V2VGraph::neighbors(int id) const {
    static const std::vector<int> empty;
    const auto it = adjacency.find(id);
    return it == adjacency.end() ? empty : it->second;
}

V2VGraph build_v2v_graph(std::span<const VehicleState> states, double comm_range) {
    V2VGraph graph;
    graph.comm_range = comm_range;
    for (const auto& v : states) {
        if (v.autonomous) graph.adjacency.emplace(v.id, std::vector<int>{});
    }
    for (size_t i = 0; i < states.size(); ++i) {
        if (!states[i].autonomous) continue;
        for (size_t j = i + 1; j < states.size(); ++j) {
            if (!states[j].autonomous) continue;
            if (distance(states[i], states[j]) <= comm_range) {
                graph.adjacency[states[i].id].push_back(states[j].id);
                graph.adjacency[states[j].id].push_back(states[i].id);
            }
        }
    }
    return graph;
}

std::unordered_set<int> shared_perception(const VehicleState& ego, const V2VGraph& graph,
                                          std::span<const VehicleState> states,
                                          double perception_range) {
    if (!ego.autonomous)
        throw std::invalid_argument("shared_perception: ego must be autonomous");

    std::vector<const VehicleState*> observers{&ego};
    for (int nid : graph.neighbors(ego.id)) {
        for (const auto& v : states) {
            if (v.id == nid) {
                observers.push_back(&v);
                break;
            }
        }
    }

    std::unordered_set<int> visible;
    for (const auto& v : states) {
        if (v.id == ego.id) continue;
        for (const auto* obs : observers) {
            if (distance(*obs, v) <= perception_range) {
                visible.insert(v.id);
                break;
            }
        }
    }
    return visible;
}

} // namespace mergesim
