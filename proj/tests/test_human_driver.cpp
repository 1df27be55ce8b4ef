#include <doctest.h>

#include "mergesim/idm.hpp"
#include "mergesim/mobil.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <unordered_map>

using namespace mergesim;

namespace {

// independent scalar reimplementation of the car-following and lane-change
// rules, kept deliberately naive
double oracle_desired_gap(double v, double dv, const IdmParams& p) {
    const double dyn = v * dv / (2.0 * std::sqrt(p.acc_max * std::abs(p.acc_des)));
    const double gap = p.d0 + v * p.t_set + dyn;
    return gap < 0.0 ? 0.0 : gap;
}

double oracle_idm(double v, double gap, double dv, const IdmParams& p) {
    double acc = p.acc_max * (1.0 - std::pow(v / p.v_set, 4.0));
    if (std::isfinite(gap)) {
        const double dstar = oracle_desired_gap(v, dv, p);
        acc = p.acc_max *
              (1.0 - std::pow(v / p.v_set, 4.0) - (dstar / gap) * (dstar / gap));
    }
    if (acc > p.acc_max) acc = p.acc_max;
    if (acc < -p.acc_brake_max) acc = -p.acc_brake_max;
    return acc;
}

int oracle_mobil(const MobilOption& left, const MobilOption& right,
                 const MobilParams& m) {
    auto ok = [&](const MobilOption& o) {
        if (!o.feasible) return false;
        if (o.new_follower_after <= -m.b_safe) return false;
        const double incentive =
            o.ego_after - o.ego_before +
            std::sin(m.politeness) * ((o.new_follower_after - o.new_follower_before) +
                                      (o.old_follower_after - o.old_follower_before));
        return incentive > m.acc_th;
    };
    auto gain = [&](const MobilOption& o) {
        return o.ego_after - o.ego_before +
               std::sin(m.politeness) * ((o.new_follower_after - o.new_follower_before) +
                                         (o.old_follower_after - o.old_follower_before));
    };
    const bool l = ok(left), r = ok(right);
    if (l && r) return gain(left) >= gain(right) ? -1 : +1;
    if (l) return -1;
    if (r) return +1;
    return 0;
}

} // namespace

TEST_CASE("IDM spot values") {
    IdmParams p;
    // free road from standstill: exactly the maximum acceleration
    CHECK(idm_acceleration(0.0, kNoLeader, 0.0, p) == 3.0);
    // worked example: v = 20 m/s, 30 m gap, zero approach rate
    CHECK(idm_acceleration(20.0, 30.0, 0.0, p) == doctest::Approx(1.368).epsilon(1e-3));
    // desired gap example
    CHECK(desired_gap(20.0, 2.0, p) == doctest::Approx(16.1640).epsilon(1e-4));
    // at the set speed on a free road the acceleration is zero
    CHECK(idm_acceleration(25.0, kNoLeader, 0.0, p) == doctest::Approx(0.0));
    CHECK_THROWS_AS(idm_acceleration(20.0, 0.0, 0.0, p), std::invalid_argument);
}

TEST_CASE("IDM and MOBIL match an independent scalar oracle on 1000 draws") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> speed(0.0, 35.0);
    std::uniform_real_distribution<double> gap(1.0, 200.0);
    std::uniform_real_distribution<double> dv(-10.0, 10.0);
    std::uniform_real_distribution<double> acc(-6.0, 3.0);
    std::uniform_real_distribution<double> angle(0.0, std::numbers::pi / 2.0);
    std::bernoulli_distribution coin(0.5);

    for (int i = 0; i < 1000; ++i) {
        IdmParams p;
        p.v_set = 15.0 + speed(rng) / 3.0;
        const double v = speed(rng), g = coin(rng) ? gap(rng) : kNoLeader,
                     a = dv(rng);
        CHECK(desired_gap(v, a, p) ==
              doctest::Approx(oracle_desired_gap(v, a, p)).epsilon(1e-9));
        CHECK(idm_acceleration(v, g, a, p) ==
              doctest::Approx(oracle_idm(v, g, a, p)).epsilon(1e-9));

        MobilParams m;
        m.politeness = angle(rng);
        auto random_option = [&] {
            MobilOption o;
            o.feasible = coin(rng);
            o.ego_before = acc(rng);
            o.ego_after = acc(rng);
            o.new_follower_before = acc(rng);
            o.new_follower_after = acc(rng);
            o.old_follower_before = acc(rng);
            o.old_follower_after = acc(rng);
            return o;
        };
        const auto left = random_option(), right = random_option();
        const auto decision = mobil_decision(left, right, m);
        const int expected = oracle_mobil(left, right, m);
        const int got = decision == LaneDecision::ChangeLeft    ? -1
                        : decision == LaneDecision::ChangeRight ? +1
                                                                : 0;
        CHECK(got == expected);
    }
}

TEST_CASE("velocity noise has the configured scale") {
    IdmParams p;  // sigma_vel = 0.2, dt = 1/15 -> accel noise std = 3.0
    Rng rng(23);
    const int n = 20000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double a = noisy_acceleration(1.0, p, rng) - 1.0;
        sum += a;
        sum2 += a * a;
    }
    const double mean = sum / n;
    const double std = std::sqrt(sum2 / n - mean * mean);
    CHECK(std::abs(mean) < 0.1);
    CHECK(std == doctest::Approx(p.sigma_vel / p.dt).epsilon(0.05));

    IdmParams silent = p;
    silent.sigma_vel = 0.0;
    CHECK(noisy_acceleration(1.0, silent, rng) == 1.0);
}

TEST_CASE("human SVO distribution sampling matches its atom weights") {
    const auto dist = SvoDistribution::default_human();
    dist.validate();
    Rng rng(29);
    std::unordered_map<long long, int> counts;
    const int n = 100000;
    for (int i = 0; i < n; ++i)
        counts[std::llround(sample_human_svo(dist, rng) * 1e9)]++;
    for (const auto& [angle, weight] : dist.atoms) {
        const double freq =
            counts[std::llround(angle * 1e9)] / static_cast<double>(n);
        CHECK(freq == doctest::Approx(weight).epsilon(0.1));
    }
}

TEST_CASE("MOBIL scene options respect geometry") {
    RoadNet road;
    IdmParams idm;
    std::vector<VehicleState> states(2);
    states[0].id = 0;
    states[0].l = 100.0;
    states[0].d = road.lane_center(1);
    states[0].lane = 1;
    states[0].speed = 20.0;
    states[1].id = 1;
    states[1].l = 103.0;
    states[1].d = road.lane_center(0);
    states[1].lane = 0;
    states[1].speed = 20.0;

    // overlap in the target lane -> infeasible
    const auto blocked = compute_mobil_option(states, states[0], 0, road, idm);
    CHECK_FALSE(blocked.feasible);
    // nonexistent lane -> infeasible
    CHECK_FALSE(compute_mobil_option(states, states[0], -1, road, idm).feasible);
    // a highway vehicle cannot move onto the ramp
    states[0].d = road.lane_center(2);
    states[0].lane = 2;
    CHECK_FALSE(compute_mobil_option(states, states[0], 3, road, idm).feasible);
    // free target lane is feasible
    states[0].d = road.lane_center(1);
    states[0].lane = 1;
    states[1].l = 250.0;
    CHECK(compute_mobil_option(states, states[0], 0, road, idm).feasible);
}
