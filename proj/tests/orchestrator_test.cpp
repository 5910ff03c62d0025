#include <doctest.h>

#include <algorithm>
#include <array>
#include <set>

#include "replica/error.hpp"
#include "replica/orchestrator/plan.hpp"
#include "replica/orchestrator/session.hpp"
#include "replica/scene.hpp"
#include "replica/sim/ops.hpp"

using namespace replica;
using namespace replica::orchestrator;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected replica::Error");
    return ErrorCode::InvalidConfig;
}

std::array<int, 4> usage(const std::vector<SessionPlan>& plan) {
    std::array<int, 4> n{};
    for (const auto& p : plan) ++n.at(static_cast<std::size_t>(p.sequence));
    return n;
}

}  // namespace

TEST_CASE("condition sequences cover both modality orders and task orders") {
    std::set<std::pair<Modality, TaskKind>> first;
    for (int s = 0; s < 4; ++s) {
        const auto p = condition_sequence(s);
        CHECK(p.modality_order[0] != p.modality_order[1]);
        CHECK(p.task_order[0][0] != p.task_order[0][1]);
        CHECK(p.task_order[1][0] == p.task_order[0][1]);
        first.insert({p.modality_order[0], p.task_order[0][0]});
    }
    CHECK(first.size() == 4);
}

TEST_CASE("latin_plan balance") {
    CHECK(usage(latin_plan(24, 7)) == std::array<int, 4>{6, 6, 6, 6});
    CHECK(usage(latin_plan(4, 1)) == std::array<int, 4>{1, 1, 1, 1});
    for (int n = 1; n <= 100; ++n) {
        const auto u = usage(latin_plan(n, 99));
        CHECK(*std::max_element(u.begin(), u.end()) - *std::min_element(u.begin(), u.end()) <= 1);
    }
    const auto plan = latin_plan(24, 7);
    for (std::size_t i = 0; i < plan.size(); ++i) {
        CHECK(plan[i].subject_id == static_cast<int>(i) + 1);
        const auto seq = condition_sequence(plan[i].sequence);
        CHECK(plan[i].modality_order == seq.modality_order);
        CHECK(plan[i].task_order == seq.task_order);
    }
}

TEST_CASE("latin_plan is deterministic in the seed") {
    CHECK(latin_plan(24, 7) == latin_plan(24, 7));
    bool differs = false;
    for (std::uint64_t s = 1; s < 10 && !differs; ++s) differs = latin_plan(24, 7) != latin_plan(24, 7 + s);
    CHECK(differs);
}

TEST_CASE("plan JSON round trip") {
    const auto plan = latin_plan(9, 3);
    CHECK(plans_from_json(to_json(plan)) == plan);
    auto j = to_json(plan);
    j["subjects"][0]["modality_order"] = nlohmann::json::array({"MR", "MR"});
    CHECK(code_of([&] { plans_from_json(j); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("session: start state and modality lookup") {
    const auto scene = default_scene();
    const auto plan = latin_plan(4, 1)[0];
    const auto s0 = start_session(plan, 0, scene.tasks, scene.world);
    const auto s1 = start_session(plan, 1, scene.tasks, scene.world);
    CHECK(s0.phase.kind == PhaseKind::PrimaryOnly);
    CHECK(s0.modality == plan.modality_order[0]);
    CHECK(s1.modality == plan.modality_order[1]);
    CHECK(s0.modality != s1.modality);
    CHECK_FALSE(s0.notified_at[0]);
    CHECK_FALSE(s0.activated_at[0]);
    CHECK_FALSE(s0.completed_at[0]);
    CHECK(kind_of(s0.tasks[0]) == plan.task_order[0][0]);

    TaskBindings none;
    CHECK(code_of([&] { start_session(plan, 0, none, scene.world); }) == ErrorCode::SceneNotReady);
    auto broken = scene.tasks;
    broken.drone_lift->box = BoxId("ghost");
    CHECK(code_of([&] { start_session(plan, 0, broken, scene.world); }) == ErrorCode::SceneNotReady);
}

TEST_CASE("session: 30 s notification threshold and activation") {
    const auto scene = default_scene();
    auto plan = condition_sequence(0);
    auto s = start_session(plan, 0, scene.tasks, scene.world);

    CHECK_FALSE(tick(s, scene.world, 29.98).notification);
    const auto out = tick(s, scene.world, 30.0);
    REQUIRE(out.notification);
    CHECK(out.notification->issued_at == to_micros(30.0));
    CHECK(out.notification->channel == channel_for(s.modality));
    CHECK(s.notified_at[0] == to_micros(30.0));
    CHECK(s.phase.kind == PhaseKind::SecondaryPending);

    record_activation(s, 33.2);
    CHECK(s.activated_at[0] == to_micros(33.2));
    CHECK(to_seconds(*s.activated_at[0]) == 33.2);
    CHECK(code_of([&] { record_activation(s, 34.0); }) == ErrorCode::NotPending);
}

TEST_CASE("channel follows modality") {
    CHECK(channel_for(Modality::Joypad) == Channel::WorkTableScreen);
    CHECK(channel_for(Modality::MrReplica) == Channel::HeadsetOverlay);
}

TEST_CASE("session runs to Done through both tasks") {
    const auto scene = default_scene();
    auto world = scene.world;
    const auto plan = condition_sequence(0);
    auto s = start_session(plan, 0, scene.tasks, world);
    // Task 0: notified at 30, done at 80. The timer restarts at completion,
    // so task 1 is notified at 110 and done at 150.
    const std::array<double, 2> start{0.0, 80.0};
    for (int k = 0; k < 2; ++k) {
        const double base = start[static_cast<std::size_t>(k)];
        CHECK_FALSE(tick(s, world, base + 29.98).notification);
        REQUIRE(tick(s, world, base + 30).notification);
        record_activation(s, base + 32);
        CHECK_FALSE(tick(s, world, base + 40).completed_task);
        // Make the task's completion predicate true.
        if (const auto* agv = std::get_if<AgvRouteTask>(&s.tasks[static_cast<std::size_t>(k)])) {
            auto& a = world.agvs.at(agv->agv);
            a.active_route.reset();  // the scene starts it on a background route
            a.pose.position = world.route(agv->route).waypoints.front();
            sim::assign_route(world, agv->agv, agv->route);
        } else {
            const auto& lift = std::get<DroneLiftTask>(s.tasks[static_cast<std::size_t>(k)]);
            auto& box = world.boxes.at(lift.box);
            const auto& pad = world.zones.at(lift.landing_zone);
            box.pose.position = pad.center + sim::Vec3{0.2, 0, world.config.box_half_height};
        }
        const auto done = tick(s, world, base + (k == 0 ? 80 : 70));
        CHECK(done.completed_task == k);
        CHECK(done.finished == (k == 1));
    }
    CHECK(to_seconds(*s.completed_at[1] - *s.notified_at[0]) == 120.0);
    CHECK(s.phase.kind == PhaseKind::Done);
}

TEST_CASE("task_done predicates") {
    const auto scene = default_scene();
    auto world = scene.world;
    const auto& lift = *scene.tasks.drone_lift;
    CHECK_FALSE(task_done(lift, world));
    auto& box = world.boxes.at(lift.box);
    const auto& pad = world.zones.at(lift.landing_zone);
    box.pose.position = pad.center + sim::Vec3{pad.radius - 0.2, 0, 0.15};
    CHECK(task_done(lift, world));
    box.carried_by = lift.drone;
    CHECK_FALSE(task_done(lift, world));

    const auto& route = *scene.tasks.agv_route;
    CHECK_FALSE(task_done(route, world));
    world.agvs.at(route.agv).active_route.reset();
    world.agvs.at(route.agv).pose.position = world.zones.at(route.entry_zone).center;
    CHECK_FALSE(task_done(route, world));
    sim::assign_route(world, route.agv, route.route);
    CHECK(task_done(route, world));
}
