#pragma once

#include "mergesim/road.hpp"
#include "mergesim/types.hpp"

#include <random>
#include <vector>

namespace mergesim {

/// Mission-vehicle spawn distribution (clipped Gaussian, sigma = 2*delta)
/// plus uniform ranges for the cruising traffic.
struct EpisodeInit {
    double mu_l = 95.0;
    double delta_l = 2.0;
    double mu_v = 24.0;
    double delta_v = 2.0;

    // cruising vehicles, uniform draws
    double av_l_min = 40.0, av_l_max = 170.0;
    double av_v_min = 22.0, av_v_max = 26.0;
    std::vector<int> av_lanes{2};
    double hv_l_min = 0.0, hv_l_max = 300.0;
    double hv_v_min = 20.0, hv_v_max = 25.0;
    std::vector<int> hv_lanes{0, 1, 2};

    double min_gap = 10.0;  // bumper-to-bumper spawn clearance [m]

    double sigma_l() const { return 2.0 * delta_l; }
    double sigma_v() const { return 2.0 * delta_v; }
};

using Rng = std::mt19937_64;

/// Gaussian draw restricted to [mu - delta, mu + delta] via rejection; the
/// degenerate delta -> 0 case returns mu.
double clipped_gaussian(double mu, double sigma, double delta, Rng& rng);

/// Places the mission vehicle on the ramp plus n_av autonomous and n_hv
/// human cruising vehicles with no spawn overlap. mission_autonomous picks
/// the mission vehicle's class; it is always the last id (n_av + n_hv).
/// Throws std::runtime_error if no collision-free placement is found within
/// a bounded number of retries.
std::vector<VehicleState> initialize_episode(const EpisodeInit& init, const RoadNet& road,
                                             int n_hv, int n_av, bool mission_autonomous,
                                             Rng& rng);

} // namespace mergesim
