#pragma once

#include <utility>

namespace mergesim {

/// Straight multi-lane highway with a right-side merge ramp that runs
/// parallel to the rightmost lane and ends in a barrier at ramp_merge_end.
/// Lane indices: 0..lane_count-1 are highway lanes (0 leftmost),
/// lane_count is the ramp lane.
struct RoadNet {
    int lane_count = 3;             // highway lanes, ramp is extra
    double lane_width = 4.0;        // [m]
    double highway_length = 500.0;  // [m]
    double ramp_merge_start = 150.0;
    double ramp_merge_end = 250.0;

    int ramp_lane() const { return lane_count; }
    int total_lanes() const { return lane_count + 1; }
    double total_width() const { return total_lanes() * lane_width; }
    double lane_center(int lane) const { return (lane + 0.5) * lane_width; }

    /// Lane containing lateral offset d. Clamps to valid range so that a
    /// vehicle straddling the edge still maps to a lane; off-road handling
    /// is done by the caller via contains().
    int lane_of(double d) const;

    bool contains(double l, double d) const;

    /// True if a ramp-to-highway (or reverse) lateral move is geometrically
    /// possible at longitude l: the ramp is only adjacent to the highway
    /// inside the merge window.
    bool in_merge_window(double l) const {
        return l >= ramp_merge_start && l <= ramp_merge_end;
    }
};

/// Straight-road layout: the map is the identity affine transform.
std::pair<double, double> frenet_to_cartesian(const RoadNet& road, double l, double d);
std::pair<double, double> cartesian_to_frenet(const RoadNet& road, double x, double y);

} // namespace mergesim
