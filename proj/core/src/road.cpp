#include "mergesim/road.hpp"

#include <cmath>
#include <stdexcept>

namespace mergesim {

int RoadNet::lane_of(double d) const {
    int lane = static_cast<int>(std::floor(d / lane_width));
    if (lane < 0) lane = 0;
    if (lane >= total_lanes()) lane = total_lanes() - 1;
    return lane;
}

bool RoadNet::contains(double l, double d) const {
    if (l < 0.0 || l > highway_length) return false;
    if (d < 0.0 || d > total_width()) return false;
    // the ramp lane does not exist past the barrier
    if (d > lane_count * lane_width && l > ramp_merge_end) return false;
    return true;
}

std::pair<double, double> frenet_to_cartesian(const RoadNet& road, double l, double d) {
    if (!road.contains(l, d))
        throw std::domain_error("frenet_to_cartesian: coordinates outside road");
    return {l, d};
}

std::pair<double, double> cartesian_to_frenet(const RoadNet& road, double x, double y) {
    if (!road.contains(x, y))
        throw std::domain_error("cartesian_to_frenet: coordinates outside road");
    return {x, y};
}

} // namespace mergesim
