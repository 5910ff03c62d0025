#include "replica/orchestrator/session.hpp"

#include <algorithm>
#include <string>

#include "replica/error.hpp"
#include "replica/sim/geometry.hpp"

namespace replica::orchestrator {

TaskKind kind_of(const SecondaryTask& task) noexcept {
    return std::holds_alternative<AgvRouteTask>(task) ? TaskKind::AgvRoute : TaskKind::DroneLift;
}

std::string_view to_string(Channel c) noexcept {
    return c == Channel::WorkTableScreen ? "WorkTableScreen" : "HeadsetOverlay";
}

std::string_view to_string(PhaseKind p) noexcept {
    switch (p) {
        case PhaseKind::PrimaryOnly: return "PrimaryOnly";
        case PhaseKind::SecondaryPending: return "SecondaryPending";
        case PhaseKind::SecondaryActive: return "SecondaryActive";
        case PhaseKind::Done: return "Done";
    }
    return "PrimaryOnly";
}

namespace {

[[noreturn]] void not_ready(const std::string& what) { throw Error(ErrorCode::SceneNotReady, what); }

void check_binding(const AgvRouteTask& t, const sim::WorldState& w) {
    if (!w.agvs.contains(t.agv)) not_ready("task AGV '" + t.agv.str() + "' missing from scene");
    if (!w.routes.contains(t.route)) not_ready("task route '" + t.route.str() + "' missing from scene");
    auto z = w.zones.find(t.entry_zone);
    if (z == w.zones.end() || z->second.kind != sim::ZoneKind::RouteEntry) {
        not_ready("task entry zone '" + t.entry_zone.str() + "' missing from scene");
    }
}

void check_binding(const DroneLiftTask& t, const sim::WorldState& w) {
    if (!w.drones.contains(t.drone)) not_ready("task drone '" + t.drone.str() + "' missing from scene");
    if (!w.boxes.contains(t.box)) not_ready("task box '" + t.box.str() + "' missing from scene");
    auto to = w.zones.find(t.takeoff_zone);
    if (to == w.zones.end() || to->second.kind != sim::ZoneKind::TakeoffPad) {
        not_ready("task takeoff pad '" + t.takeoff_zone.str() + "' missing from scene");
    }
    auto land = w.zones.find(t.landing_zone);
    if (land == w.zones.end() || land->second.kind != sim::ZoneKind::LandingPad) {
        not_ready("task landing pad '" + t.landing_zone.str() + "' missing from scene");
    }
}

}  // namespace

SessionState start_session(const SessionPlan& plan, int which, const TaskBindings& bindings,
                           const sim::WorldState& world, const SessionSettings& settings, double now) {
    if (which != 0 && which != 1) throw Error(ErrorCode::InvalidConfig, "session index must be 0 or 1");
    if (!bindings.agv_route || !bindings.drone_lift) not_ready("scene does not bind both secondary tasks");
    check_binding(*bindings.agv_route, world);
    check_binding(*bindings.drone_lift, world);

    SessionState s;
    s.subject = plan.subject_id;
    s.session_index = which;
    s.modality = plan.modality_order[static_cast<std::size_t>(which)];
    for (std::size_t k = 0; k < 2; ++k) {
        const auto kind = plan.task_order[static_cast<std::size_t>(which)][k];
        s.tasks[k] = kind == TaskKind::AgvRoute ? SecondaryTask{*bindings.agv_route} : SecondaryTask{*bindings.drone_lift};
    }
    s.settings = settings;
    s.primary_started_at = to_micros(now);
    s.last_tick = s.primary_started_at;
    return s;
}

TickOutcome tick(SessionState& session, const sim::WorldState& world, double now) {
    const Micros t = to_micros(now);
    if (t < session.last_tick) throw Error(ErrorCode::InvalidConfig, "session clock went backwards");
    session.last_tick = t;

    TickOutcome out;
    auto& phase = session.phase;
    switch (phase.kind) {
        case PhaseKind::PrimaryOnly:
            if (t - session.primary_started_at >= to_micros(session.settings.notify_after)) {
                const int k = session.notified_at[0] ? 1 : 0;
                session.notified_at[static_cast<std::size_t>(k)] = t;
                phase = {PhaseKind::SecondaryPending, k};
                out.notification = Notification{session.tasks[static_cast<std::size_t>(k)], k,
                                                channel_for(session.modality), t};
            }
            break;
        case PhaseKind::SecondaryPending:
            break;
        case PhaseKind::SecondaryActive: {
            const auto k = static_cast<std::size_t>(phase.task);
            if (task_done(session.tasks[k], world)) {
                session.completed_at[k] = t;
                out.completed_task = phase.task;
                if (k == 1) {
                    phase = {PhaseKind::Done, 1};
                    out.finished = true;
                } else {
                    phase = {PhaseKind::PrimaryOnly, 1};
                    session.primary_started_at = t;
                }
            }
            break;
        }
        case PhaseKind::Done:
            break;
    }
    return out;
}

void record_activation(SessionState& session, double now) {
    if (session.phase.kind != PhaseKind::SecondaryPending) {
        throw Error(ErrorCode::NotPending, "no secondary task is awaiting activation");
    }
    const auto k = static_cast<std::size_t>(session.phase.task);
    const Micros t = std::max(to_micros(now), *session.notified_at[k]);
    session.activated_at[k] = t;
    session.phase.kind = PhaseKind::SecondaryActive;
}

bool task_done(const SecondaryTask& task, const sim::WorldState& world) {
    if (const auto* agv_task = std::get_if<AgvRouteTask>(&task)) {
        auto a = world.agvs.find(agv_task->agv);
        return a != world.agvs.end() && a->second.last_assigned_route == agv_task->route;
    }
    const auto& lift = std::get<DroneLiftTask>(task);
    auto b = world.boxes.find(lift.box);
    auto pad = world.zones.find(lift.landing_zone);
    if (b == world.boxes.end() || pad == world.zones.end()) return false;
    const auto& box = b->second;
    return !box.carried_by && sim::planar_distance(box.pose.position, pad->second.center) < pad->second.radius;
}

}  // namespace replica::orchestrator
