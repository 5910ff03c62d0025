#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "replica/error.hpp"
#include "replica/scene.hpp"
#include "replica/sim/json.hpp"
#include "replica/sim/ops.hpp"

using namespace replica;
using namespace replica::sim;
using replica::test::add_agv;
using replica::test::add_box;
using replica::test::add_drone;
using replica::test::add_route;
using replica::test::add_zone;

namespace {

constexpr double kPi = std::numbers::pi;

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected replica::Error");
    return ErrorCode::InvalidConfig;
}

// Drone over a landing pad carrying box1 with the given box-to-drone yaw offset.
WorldState carrying_over_pad(double drone_yaw, double attach_yaw, double pad_yaw) {
    WorldState w;
    add_zone(w, "landing", ZoneKind::LandingPad, {3, 3, 0}, 0.6, pad_yaw);
    add_drone(w, "d", {3, 3, 1.0}, drone_yaw);
    auto& b = add_box(w, "box1", {3, 3, 0.7}, wrap_angle(drone_yaw + attach_yaw));
    b.carried_by = RobotId("d");
    b.attach_offset = {0, 0, -0.3};
    b.attach_yaw = attach_yaw;
    w.drones.at(RobotId("d")).carried = BoxId("box1");
    return w;
}

double settle(WorldState& w, const RobotId& id, int max_steps = 10000) {
    const double t0 = w.sim_time;
    for (int i = 0; i < max_steps && w.drone(id).target_yaw; ++i) step(w, w.config.dt);
    REQUIRE_FALSE(w.drone(id).target_yaw);
    return w.sim_time - t0;
}

}  // namespace

TEST_CASE("wrap_angle maps into (-pi, pi]") {
    CHECK(wrap_angle(kPi) == kPi);
    CHECK(wrap_angle(-kPi) == kPi);
    CHECK(wrap_angle(3 * kPi / 2) == doctest::Approx(-kPi / 2));
    CHECK(wrap_angle(0.0) == 0.0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-100, 100);
    for (int i = 0; i < 10000; ++i) {
        const double a = u(rng);
        const double r = wrap_angle(a);
        CHECK(r > -kPi);
        CHECK(r <= kPi);
        CHECK(std::abs(std::remainder(a - r, 2 * kPi)) < 1e-9);
    }
}

TEST_CASE("AGV straight line: ten steps of 0.1 s at 1 m/s") {
    WorldState w;
    add_agv(w, "a", {0, 0, 0}, 0.0);
    command_agv(w, RobotId("a"), 1.0, 0.0);
    for (int i = 0; i < 10; ++i) step(w, 0.1);
    const auto& p = w.agv(RobotId("a")).pose.position;
    CHECK(std::abs(p.x - 1.0) < 1e-9);
    CHECK(std::abs(p.y) < 1e-9);
    CHECK(std::abs(p.z) < 1e-9);
    CHECK(w.sim_time == doctest::Approx(1.0));
}

TEST_CASE("AGV rotation in place with a substepped dt") {
    WorldState w;
    add_agv(w, "a", {0, 0, 0}, 0.0);
    command_agv(w, RobotId("a"), 0.0, kPi / 2);
    step(w, 1.0);
    const auto& a = w.agv(RobotId("a"));
    CHECK(a.pose.yaw == doctest::Approx(kPi / 2).epsilon(1e-12));
    CHECK(a.pose.position == Vec3{});
}

TEST_CASE("AGV unicycle arc against the closed form") {
    WorldState w;
    w.config.dt = 0.01;
    add_agv(w, "a", {0, 0, 0}, 0.0);
    command_agv(w, RobotId("a"), 1.0, 1.0);
    int n = 0;
    while (w.sim_time + 0.01 <= kPi) {
        step(w, 0.01);
        ++n;
    }
    if (kPi - w.sim_time > 0) step(w, kPi - w.sim_time);
    const auto& p = w.agv(RobotId("a")).pose.position;
    const double t = w.sim_time;
    CHECK(t == doctest::Approx(kPi));
    CHECK(std::hypot(p.x - std::sin(t), p.y - (1 - std::cos(t))) < 0.02);
}

TEST_CASE("AGV forward run has no lateral drift") {
    WorldState w;
    const double yaw = 0.7;
    add_agv(w, "a", {0, 0, 0}, yaw);
    command_agv(w, RobotId("a"), 1.0, 0.0);
    for (int i = 0; i < 10000; ++i) step(w, w.config.dt);
    const auto& p = w.agv(RobotId("a")).pose.position;
    const double lateral = -std::sin(yaw) * p.x + std::cos(yaw) * p.y;
    CHECK(std::abs(lateral) < 1e-9);
}

TEST_CASE("drone pure yaw leaves position unchanged") {
    WorldState w;
    add_drone(w, "d", {1.25, -3.5, 2.0});
    command_drone(w, RobotId("d"), {}, 1.3);
    for (int i = 0; i < 1000; ++i) step(w, w.config.dt);
    CHECK(distance(w.drone(RobotId("d")).pose.position, {1.25, -3.5, 2.0}) < 1e-9);
}

TEST_CASE("drone speed and yaw rate are clamped") {
    WorldState w;
    add_drone(w, "d", {0, 0, 1});
    command_drone(w, RobotId("d"), {9, 0, 0}, 10.0);
    const auto& d = w.drone(RobotId("d"));
    CHECK(d.commanded_velocity.norm() == doctest::Approx(2.0));
    CHECK(d.commanded_velocity.x == doctest::Approx(2.0));
    CHECK(d.commanded_yaw_rate == doctest::Approx(w.config.omega_max));
    CHECK(code_of([&] { command_drone(w, RobotId("nope"), {}, 0); }) == ErrorCode::UnknownRobot);
    CHECK(code_of([&] { command_drone(w, RobotId("d"), {NAN, 0, 0}, 0); }) == ErrorCode::InvalidMagnitude);
}

TEST_CASE("step rejects non-positive dt") {
    WorldState w;
    CHECK(code_of([&] { step(w, 0.0); }) == ErrorCode::InvalidConfig);
    CHECK(code_of([&] { step(w, -1.0); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("grasp, release and re-grasp") {
    WorldState w;
    add_zone(w, "takeoff", ZoneKind::TakeoffPad, {0, 0, 0}, 0.5);
    add_zone(w, "landing", ZoneKind::LandingPad, {4, 1, 0}, 0.6);
    add_drone(w, "d", {0, 0, 0.45});
    add_box(w, "b", {0, 0, 0.15}, 0.4);
    const RobotId d("d");

    CHECK(code_of([&] { release(w, d); }) == ErrorCode::NotCarrying);
    grasp(w, d);
    CHECK(w.drone(d).carried == BoxId("b"));
    CHECK(w.boxes.at(BoxId("b")).carried_by == d);
    CHECK(code_of([&] { grasp(w, d); }) == ErrorCode::AlreadyCarrying);

    command_drone(w, d, {1.0, 0.25, 0}, 0);
    step(w, 4.0);
    command_drone(w, d, {}, 0);
    CHECK(w.boxes.at(BoxId("b")).pose.position.x == doctest::Approx(4.0));

    // Drift slightly off the pad center before letting go.
    w.drone(d).pose.position = {4.1, 0.95, 0.45};
    release(w, d);
    const auto& box = w.boxes.at(BoxId("b"));
    CHECK(box.pose.position.x == doctest::Approx(4.1));
    CHECK(box.pose.position.y == doctest::Approx(0.95));
    CHECK(box.pose.position.z == doctest::Approx(w.config.box_half_height));
    CHECK_FALSE(box.carried_by);

    w.config.grasp_requires_takeoff_pad = false;
    grasp(w, d);
    CHECK(w.drone(d).carried == BoxId("b"));
}

TEST_CASE("release over the landing pad center puts the box on the pad") {
    auto w = carrying_over_pad(0.0, 0.0, 0.0);
    release(w, RobotId("d"));
    const auto& box = w.boxes.at(BoxId("box1"));
    const auto& pad = w.zones.at(ZoneId("landing")).center;
    CHECK(box.pose.position.x == doctest::Approx(pad.x));
    CHECK(box.pose.position.y == doctest::Approx(pad.y));
    CHECK(box.pose.position.z == w.config.box_half_height);
}

TEST_CASE("grasp needs a box within range") {
    WorldState w;
    add_zone(w, "takeoff", ZoneKind::TakeoffPad, {0, 0, 0}, 0.5);
    add_drone(w, "d", {0, 0, 0.45});
    // Grasp point is 0.15 m above the floor; put the box 2 * grasp_radius away from it.
    add_box(w, "b", {0.6, 0, 0.15});
    CHECK(code_of([&] { grasp(w, RobotId("d")); }) == ErrorCode::NoBoxInRange);
    CHECK(w.drone(RobotId("d")).carried == std::nullopt);
}

TEST_CASE("rotate_quarter settles at +90 degrees within the slew time") {
    WorldState w;
    add_drone(w, "d", {0, 0, 1});
    const RobotId d("d");
    rotate_quarter(w, d);
    const double t = settle(w, d);
    CHECK(std::abs(t - (kPi / 2) / w.config.omega_max) <= w.config.dt + 1e-9);
    CHECK(w.drone(d).pose.yaw == doctest::Approx(kPi / 2).epsilon(1e-12));
}

TEST_CASE("four quarter turns return to the start") {
    WorldState w;
    add_drone(w, "d", {0, 0, 1}, 0.3);
    const RobotId d("d");
    for (int i = 0; i < 4; ++i) {
        rotate_quarter(w, d);
        settle(w, d);
    }
    CHECK(std::abs(wrap_angle(w.drone(d).pose.yaw - 0.3)) < 1e-6);
}

TEST_CASE("quarter turn across the wrap point") {
    WorldState w;
    add_drone(w, "d", {0, 0, 1}, 3 * kPi / 4);
    const RobotId d("d");
    rotate_quarter(w, d);
    settle(w, d);
    CHECK(w.drone(d).pose.yaw == doctest::Approx(-3 * kPi / 4));
}

TEST_CASE("align_to_pad squares the carried box with the pad") {
    const double pad_yaw = 0.25;
    SUBCASE("small offset") {
        auto w = carrying_over_pad(pad_yaw + 0.2, 0.0, pad_yaw);
        align_to_pad(w, RobotId("d"));
        settle(w, RobotId("d"));
        CHECK(w.boxes.at(BoxId("box1")).pose.yaw == doctest::Approx(pad_yaw));
    }
    SUBCASE("offset past 45 degrees") {
        auto w = carrying_over_pad(pad_yaw + 0.9, 0.0, pad_yaw);
        align_to_pad(w, RobotId("d"));
        settle(w, RobotId("d"));
        CHECK(w.boxes.at(BoxId("box1")).pose.yaw == doctest::Approx(pad_yaw + kPi / 2));
    }
    SUBCASE("nearest quarter-turn grid") {
        // Oracle: scan k for the multiple of pi/2 closest to the box offset.
        for (int i = -60; i <= 60; ++i) {
            const double offset = i * 0.05 + 0.013;
            const double attach = 0.37;
            const double drone_yaw = wrap_angle(pad_yaw + offset - attach);
            auto w = carrying_over_pad(drone_yaw, attach, pad_yaw);
            int best_k = 0;
            for (int k = -4; k <= 4; ++k) {
                if (std::abs(offset - k * kPi / 2) < std::abs(offset - best_k * kPi / 2)) best_k = k;
            }
            align_to_pad(w, RobotId("d"));
            settle(w, RobotId("d"));
            const double box_yaw = w.boxes.at(BoxId("box1")).pose.yaw;
            CHECK(std::abs(wrap_angle(box_yaw - (pad_yaw + best_k * kPi / 2))) < 1e-9);
        }
    }
    SUBCASE("errors") {
        auto w = carrying_over_pad(0, 0, 0);
        w.config.vision_available = false;
        CHECK(code_of([&] { align_to_pad(w, RobotId("d")); }) == ErrorCode::VisionUnavailable);
        w.config.vision_available = true;
        release(w, RobotId("d"));
        CHECK(code_of([&] { align_to_pad(w, RobotId("d")); }) == ErrorCode::NotCarrying);
    }
}

TEST_CASE("assign_route follows collinear waypoints") {
    WorldState w;
    add_route(w, "R", {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}});
    add_agv(w, "a", {0, 0, 0}, 0.0);
    const RobotId a("a");
    assign_route(w, a, RouteId("R"));
    CHECK(code_of([&] { command_agv(w, a, 1, 0); }) == ErrorCode::RouteActive);
    CHECK(code_of([&] { assign_route(w, a, RouteId("R")); }) == ErrorCode::RouteActive);
    int steps = 0;
    while (w.agv(a).active_route && steps < 10000) {
        step(w, w.config.dt);
        ++steps;
    }
    CHECK(std::abs(w.sim_time - 2.0) <= 2 * w.config.dt);
    CHECK(planar_distance(w.agv(a).pose.position, {2, 0, 0}) < 1e-3);
    command_agv(w, a, 0.5, 0);  // manual control is back
}

TEST_CASE("assign_route preconditions") {
    WorldState w;
    add_route(w, "R", {{0, 0, 0}, {1, 0, 0}});
    add_agv(w, "a", {5, 0, 0});
    CHECK(code_of([&] { assign_route(w, RobotId("a"), RouteId("R")); }) == ErrorCode::NotAtRouteStart);
    CHECK(code_of([&] { assign_route(w, RobotId("a"), RouteId("Q")); }) == ErrorCode::UnknownRoute);
    CHECK_FALSE(w.agv(RobotId("a")).active_route);
}

TEST_CASE("go_to_charge drives to the charging zone and aborts a route") {
    WorldState w;
    add_zone(w, "charger", ZoneKind::Charging, {-3, 4, 0}, 0.8);
    add_route(w, "R", {{0, 0, 0}, {1, 0, 0}});
    add_agv(w, "a", {0, 0, 0});
    const RobotId a("a");
    assign_route(w, a, RouteId("R"));
    go_to_charge(w, a);
    CHECK_FALSE(w.agv(a).active_route);
    for (int i = 0; i < 2000 && w.agv(a).autopilot_engaged(); ++i) step(w, w.config.dt);
    CHECK_FALSE(w.agv(a).autopilot_engaged());
    CHECK(planar_distance(w.agv(a).pose.position, {-3, 4, 0}) < 1e-3);
}

TEST_CASE("autopilot_fly reaches a 4 m target in about 2 s") {
    WorldState w;
    add_drone(w, "d", {0, 0, 1});
    const RobotId d("d");
    autopilot_fly(w, d, {4, 0, 1});
    CHECK(w.drone(d).autonomous_flight);
    CHECK(code_of([&] { command_drone(w, d, {1, 0, 0}, 0); }) == ErrorCode::AutonomousFlightActive);
    for (int i = 0; i < 10000 && w.drone(d).autonomous_flight; ++i) step(w, w.config.dt);
    CHECK(std::abs(w.sim_time - 2.0) <= 2 * w.config.dt);
    CHECK(distance(w.drone(d).pose.position, {4, 0, 1}) <= w.config.arrival_radius);
}

TEST_CASE("autopilot_fly inside the arrival radius does nothing") {
    WorldState w;
    add_drone(w, "d", {0, 0, 1});
    autopilot_fly(w, RobotId("d"), {0.3, 0, 1});
    CHECK_FALSE(w.drone(RobotId("d")).autonomous_flight);
}

TEST_CASE("proximity boundary and tie-breaks") {
    WorldState w;
    add_zone(w, "pad", ZoneKind::TakeoffPad, {0, 0, 0}, 0.5);
    auto& d = add_drone(w, "d", {0, 0, 2});
    CHECK(proximity(w, RobotId("d"), ZoneKind::TakeoffPad) == ZoneId("pad"));
    w.drones.at(RobotId("d")).pose.position = {0.51, 0, 2};
    CHECK(proximity(w, RobotId("d"), ZoneKind::TakeoffPad) == std::nullopt);
    (void)d;

    WorldState v;
    add_zone(v, "a", ZoneKind::WorkTable, {0, 0, 0}, 2.0);
    add_zone(v, "b", ZoneKind::WorkTable, {1, 0, 0}, 2.0);
    add_agv(v, "r", {0.8, 0, 0});
    CHECK(proximity(v, RobotId("r"), ZoneKind::WorkTable) == ZoneId("b"));
    v.agvs.at(RobotId("r")).pose.position = {0.5, 0, 0};
    CHECK(proximity(v, RobotId("r"), ZoneKind::WorkTable) == ZoneId("a"));
    CHECK(proximity(v, RobotId("r"), ZoneKind::Charging) == std::nullopt);
    CHECK(code_of([&] { proximity(v, RobotId("x"), ZoneKind::Charging); }) == ErrorCode::UnknownRobot);
}

TEST_CASE("carried box tracks the drone") {
    auto w = carrying_over_pad(0, 0.3, 0);
    const RobotId d("d");
    command_drone(w, d, {1, 0, 0.5}, 0.4);
    for (int i = 0; i < 100; ++i) step(w, w.config.dt);
    const auto& dr = w.drone(d);
    const auto& box = w.boxes.at(BoxId("box1"));
    CHECK(distance(box.pose.position, dr.pose.position + Vec3{0, 0, -0.3}) < 1e-12);
    CHECK(wrap_angle(box.pose.yaw - dr.pose.yaw - 0.3) == doctest::Approx(0).epsilon(1e-12));
}

TEST_CASE("default scene loads and round-trips") {
    const auto scene = default_scene();
    CHECK(scene.world.drones.size() == 1);
    CHECK(scene.world.agvs.size() == 2);
    CHECK(scene.tasks.agv_route);
    CHECK(scene.tasks.drone_lift);
    const auto again = scene_from_json(scene_to_json(scene));
    CHECK(again == scene);
    validate(scene.world);

    // Out-of-range yaw is wrapped on load.
    auto j = scene_to_json(scene);
    j["drones"][0]["yaw"] = 7.0;
    CHECK(scene_from_json(j).world.drones.begin()->second.pose.yaw == doctest::Approx(7.0 - 2 * kPi));

    auto dup = scene_to_json(scene);
    dup["agvs"].push_back(dup["agvs"][0]);
    CHECK(code_of([&] { scene_from_json(dup); }) == ErrorCode::InvalidScene);
}
