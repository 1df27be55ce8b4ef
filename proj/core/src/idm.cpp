#include "mergesim/idm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mergesim {

double desired_gap(double ego_speed, double approach_rate, const IdmParams& p) {
    const double braking = std::abs(p.acc_des);
    const double d_star = p.d0 + ego_speed * p.t_set +
                          ego_speed * approach_rate / (2.0 * std::sqrt(p.acc_max * braking));
    return std::max(0.0, d_star);
}

double idm_acceleration(double ego_speed, double gap, double approach_rate, const IdmParams& p) {
    if (gap <= 0.0)
        throw std::invalid_argument("idm_acceleration: non-positive gap");
    const double free_term = std::pow(ego_speed / p.v_set, 4.0);
    double interaction = 0.0;
    if (std::isfinite(gap)) {
        const double d_star = desired_gap(ego_speed, approach_rate, p);
        interaction = (d_star / gap) * (d_star / gap);
    }
    const double accel = p.acc_max * (1.0 - free_term - interaction);
    return std::clamp(accel, -p.acc_brake_max, p.acc_max);
}

double noisy_acceleration(double accel, const IdmParams& p, Rng& rng) {
    if (p.sigma_vel == 0.0) return accel;
    std::normal_distribution<double> noise(0.0, 1.0);
    return accel + (p.sigma_vel / p.dt) * noise(rng);
}

} // namespace mergesim
