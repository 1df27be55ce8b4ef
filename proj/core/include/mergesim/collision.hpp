#pragma once

#include "mergesim/road.hpp"
#include "mergesim/types.hpp"

#include <span>
#include <utility>
#include <vector>

namespace mergesim {

/// Oriented-rectangle overlap test on vehicle footprints (length x width,
/// centered at (l, d), rotated by yaw).
bool rectangles_overlap(const VehicleState& a, const VehicleState& b);

/// All overlapping pairs (i < j by id order within the list). Does not
/// mutate the states; callers mark both vehicles crashed.
std::vector<std::pair<int, int>> detect_collisions(std::span<const VehicleState> states);

/// True iff the vehicle occupies the ramp lane with its front bumper at or
/// beyond the end-of-ramp barrier.
bool ramp_barrier_check(const VehicleState& state, const RoadNet& road);

} // namespace mergesim
