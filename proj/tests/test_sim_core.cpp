#include <doctest.h>

#include "mergesim/collision.hpp"
#include "mergesim/episode_init.hpp"
#include "mergesim/kinematics.hpp"
#include "mergesim/pid.hpp"
#include "mergesim/road.hpp"

#include <cmath>

using namespace mergesim;

TEST_CASE("road geometry and lane mapping") {
    RoadNet road;
    CHECK(road.ramp_lane() == 3);
    CHECK(road.total_width() == doctest::Approx(16.0));
    CHECK(road.lane_of(0.1) == 0);
    CHECK(road.lane_of(5.9) == 1);
    CHECK(road.lane_center(2) == doctest::Approx(10.0));
    CHECK(road.in_merge_window(150.0));
    CHECK(road.in_merge_window(250.0));
    CHECK_FALSE(road.in_merge_window(149.9));

    // the ramp lane only exists up to the barrier
    CHECK(road.contains(200.0, road.lane_center(road.ramp_lane())));
    CHECK_FALSE(road.contains(300.0, road.lane_center(road.ramp_lane())));
    CHECK(road.contains(300.0, road.lane_center(1)));
}

TEST_CASE("frenet mapping is the identity on a straight road") {
    RoadNet road;
    const auto [x, y] = frenet_to_cartesian(road, 123.0, 6.5);
    CHECK(x == doctest::Approx(123.0));
    CHECK(y == doctest::Approx(6.5));
    const auto [l, d] = cartesian_to_frenet(road, x, y);
    CHECK(l == doctest::Approx(123.0));
    CHECK(d == doctest::Approx(6.5));
    CHECK_THROWS_AS(frenet_to_cartesian(road, -1.0, 6.5), std::domain_error);
}

TEST_CASE("bicycle model matches the closed-form heading increment") {
    RoadNet road;
    VehicleParams params;
    VehicleState s;
    s.l = 100.0;
    s.d = road.lane_center(1);
    s.speed = 20.0;
    const double dt = 1.0 / 15.0;

    ControlSignal ctrl{0.0, 0.1};
    const auto next = step_vehicle(s, ctrl, dt, road, params);
    const double expected_dyaw = 20.0 * std::tan(0.1) / params.wheelbase * dt;
    CHECK(next.yaw == doctest::Approx(expected_dyaw).epsilon(1e-12));
    CHECK(next.l == doctest::Approx(100.0 + 20.0 * dt).epsilon(1e-12));
    CHECK(next.speed == doctest::Approx(20.0));
}

TEST_CASE("speed never goes negative and invalid input throws") {
    RoadNet road;
    VehicleParams params;
    VehicleState s;
    s.d = road.lane_center(0);
    s.speed = 0.1;
    ControlSignal brake{-8.0, 0.0};
    const auto next = step_vehicle(s, brake, 1.0 / 15.0, road, params);
    CHECK(next.speed >= 0.0);

    CHECK_THROWS_AS(step_vehicle(s, brake, 0.0, road, params), std::invalid_argument);
    ControlSignal bad{std::nan(""), 0.0};
    CHECK_THROWS_AS(step_vehicle(s, bad, 1.0 / 15.0, road, params), std::invalid_argument);
}

TEST_CASE("PID lane change settles within 4 seconds") {
    RoadNet road;
    PidParams pid;
    VehicleState s;
    s.l = 50.0;
    s.d = road.lane_center(2);
    s.lane = 2;
    s.speed = 24.0;
    ControllerState ctrl{1, 24.0};

    const double dt = 1.0 / 15.0;
    for (int i = 0; i < 60; ++i) {  // 4 s
        const auto u = pid_control(s, ctrl, road, pid);
        s = step_vehicle(s, u, dt, road, pid.vehicle);
    }
    CHECK(std::abs(s.d - road.lane_center(1)) < 0.1);
    CHECK(std::abs(s.yaw) < 0.05);
    CHECK(s.lane == 1);
}

TEST_CASE("meta actions update setpoints and degrade safely") {
    RoadNet road;
    PidParams pid;
    VehicleState s;
    s.l = 100.0;
    s.d = road.lane_center(0);
    s.lane = 0;
    s.speed = 20.0;
    ControllerState ctrl{0, 20.0};

    const auto accel = apply_meta_action(s, MetaAction::Accelerate, road, ctrl, pid);
    CHECK(accel.target_speed == doctest::Approx(25.0));
    const auto decel = apply_meta_action(s, MetaAction::Decelerate, road, ctrl, pid);
    CHECK(decel.target_speed == doctest::Approx(15.0));

    // LaneLeft off the road edge degrades to Idle
    const auto left = apply_meta_action(s, MetaAction::LaneLeft, road, ctrl, pid);
    CHECK(left.target_lane == 0);

    // a highway vehicle can never target the ramp
    s.d = road.lane_center(2);
    s.lane = 2;
    ControllerState c2{2, 20.0};
    const auto right = apply_meta_action(s, MetaAction::LaneRight, road, c2, pid);
    CHECK(right.target_lane == 2);
}

TEST_CASE("collision detection on oriented rectangles") {
    VehicleState a, b;
    a.id = 0;
    a.l = 100.0;
    a.d = 6.0;
    b.id = 1;
    b.d = 6.0;

    b.l = 104.0;  // 5 m long vehicles, 4 m apart center-to-center: overlap
    CHECK(rectangles_overlap(a, b));
    b.l = 106.0;
    CHECK_FALSE(rectangles_overlap(a, b));

    // yawed vehicle clips the neighbor lane
    b.l = 100.0;
    b.d = 8.5;
    b.yaw = 0.0;
    CHECK_FALSE(rectangles_overlap(a, b));
    b.yaw = 0.5;
    CHECK(rectangles_overlap(a, b));

    std::vector<VehicleState> states{a, b};
    const auto pairs = detect_collisions(states);
    CHECK(pairs.size() == 1);
    CHECK(pairs[0].first == 0);
    CHECK(pairs[0].second == 1);
}

TEST_CASE("ramp barrier check") {
    RoadNet road;
    VehicleState v;
    v.d = road.lane_center(road.ramp_lane());
    v.lane = road.ramp_lane();
    v.l = 240.0;
    CHECK_FALSE(ramp_barrier_check(v, road));
    v.l = 248.0;  // front bumper 250.5 >= 250
    CHECK(ramp_barrier_check(v, road));
    v.d = road.lane_center(2);
    v.lane = 2;
    CHECK_FALSE(ramp_barrier_check(v, road));
}

TEST_CASE("clipped gaussian stays inside the window") {
    Rng rng(7);
    for (int i = 0; i < 2000; ++i) {
        const double x = clipped_gaussian(95.0, 4.0, 2.0, rng);
        CHECK(x >= 93.0);
        CHECK(x <= 97.0);
    }
    CHECK(clipped_gaussian(95.0, 4.0, 0.0, rng) == doctest::Approx(95.0));
}

TEST_CASE("episode initialization places everyone without overlap") {
    RoadNet road;
    EpisodeInit init;
    Rng rng(11);
    const auto states = initialize_episode(init, road, 20, 4, false, rng);
    REQUIRE(states.size() == 25);

    const auto& mission = states.back();
    CHECK(mission.id == 24);
    CHECK(mission.is_mission);
    CHECK_FALSE(mission.autonomous);
    CHECK(mission.lane == road.ramp_lane());
    CHECK(mission.l >= 93.0);
    CHECK(mission.l <= 97.0);
    CHECK(mission.speed >= 22.0);
    CHECK(mission.speed <= 26.0);

    for (size_t i = 0; i < states.size(); ++i) {
        CHECK(states[i].id == static_cast<int>(i));
        if (i < 4) CHECK(states[i].autonomous);
        for (size_t j = i + 1; j < states.size(); ++j) {
            if (states[i].lane != states[j].lane) continue;
            const double gap = std::abs(states[i].l - states[j].l) -
                               0.5 * (states[i].length + states[j].length);
            CHECK(gap >= init.min_gap - 1e-9);
        }
    }

    // autonomous mission vehicle
    Rng rng2(12);
    const auto av_mission = initialize_episode(init, road, 20, 4, true, rng2);
    CHECK(av_mission.back().autonomous);
    CHECK(av_mission.back().is_mission);
}
