#include "mergesim/episode_init.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mergesim {

double clipped_gaussian(double mu, double sigma, double delta, Rng& rng) {
    if (delta <= 0.0 || sigma <= 0.0) return mu;
    std::normal_distribution<double> dist(mu, sigma);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        const double x = dist(rng);
        if (x >= mu - delta && x <= mu + delta) return x;
    }
    throw std::runtime_error("clipped_gaussian: rejection sampling failed");
}

namespace {

bool gap_ok(const std::vector<VehicleState>& placed, const VehicleState& cand, double min_gap) {
    for (const auto& v : placed) {
        if (v.lane != cand.lane) continue;
        const double gap = std::abs(v.l - cand.l) - 0.5 * (v.length + cand.length);
        if (gap < min_gap) return false;
    }
    return true;
}

} // namespace

std::vector<VehicleState> initialize_episode(const EpisodeInit& init, const RoadNet& road,
                                             int n_hv, int n_av, bool mission_autonomous,
                                             Rng& rng) {
    if (n_hv < 0 || n_av < 0)
        throw std::invalid_argument("initialize_episode: negative vehicle count");
    if ((n_av > 0 && init.av_lanes.empty()) || (n_hv > 0 && init.hv_lanes.empty()))
        throw std::invalid_argument("initialize_episode: empty lane set");

    std::vector<VehicleState> vehicles;
    vehicles.reserve(n_av + n_hv + 1);

    auto place_cruiser = [&](int id, bool autonomous) {
        const auto& lanes = autonomous ? init.av_lanes : init.hv_lanes;
        const double lmin = autonomous ? init.av_l_min : init.hv_l_min;
        const double lmax = autonomous ? init.av_l_max : init.hv_l_max;
        const double vmin = autonomous ? init.av_v_min : init.hv_v_min;
        const double vmax = autonomous ? init.av_v_max : init.hv_v_max;
        std::uniform_real_distribution<double> l_dist(lmin, lmax);
        std::uniform_real_distribution<double> v_dist(vmin, vmax);
        std::uniform_int_distribution<size_t> lane_dist(0, lanes.size() - 1);

        for (int attempt = 0; attempt < 1000; ++attempt) {
            VehicleState v;
            v.id = id;
            v.lane = lanes[lane_dist(rng)];
            v.l = l_dist(rng);
            v.d = road.lane_center(v.lane);
            v.speed = v_dist(rng);
            v.autonomous = autonomous;
            if (gap_ok(vehicles, v, init.min_gap)) {
                vehicles.push_back(v);
                return;
            }
        }
        throw std::runtime_error("initialize_episode: no feasible spawn placement");
    };

    for (int i = 0; i < n_av; ++i) place_cruiser(i, true);
    for (int i = 0; i < n_hv; ++i) place_cruiser(n_av + i, false);

    VehicleState mission;
    mission.id = n_av + n_hv;
    mission.lane = road.ramp_lane();
    mission.d = road.lane_center(mission.lane);
    mission.l = clipped_gaussian(init.mu_l, init.sigma_l(), init.delta_l, rng);
    mission.speed = clipped_gaussian(init.mu_v, init.sigma_v(), init.delta_v, rng);
    mission.autonomous = mission_autonomous;
    mission.is_mission = true;
    vehicles.push_back(mission);

    return vehicles;
}

} // namespace mergesim
