#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <variant>

#include "replica/orchestrator/plan.hpp"
#include "replica/sim/world.hpp"
#include "replica/time.hpp"

namespace replica::orchestrator {

/// Guide the AGV into the entry zone, then command the route from there.
struct AgvRouteTask {
    RobotId agv;
    RouteId route;
    ZoneId entry_zone;
    friend bool operator==(const AgvRouteTask&, const AgvRouteTask&) = default;
};

/// Carry the box from the takeoff pad and release it on the landing pad.
struct DroneLiftTask {
    RobotId drone;
    BoxId box;
    ZoneId takeoff_zone;
    ZoneId landing_zone;
    friend bool operator==(const DroneLiftTask&, const DroneLiftTask&) = default;
};

using SecondaryTask = std::variant<AgvRouteTask, DroneLiftTask>;

TaskKind kind_of(const SecondaryTask& task) noexcept;

/// Scene-provided instances of both task kinds.
struct TaskBindings {
    std::optional<AgvRouteTask> agv_route;
    std::optional<DroneLiftTask> drone_lift;
    friend bool operator==(const TaskBindings&, const TaskBindings&) = default;
};

enum class Channel { WorkTableScreen, HeadsetOverlay };

constexpr Channel channel_for(Modality m) noexcept {
    return m == Modality::Joypad ? Channel::WorkTableScreen : Channel::HeadsetOverlay;
}
std::string_view to_string(Channel c) noexcept;

struct Notification {
    SecondaryTask task;
    int task_index = 0;
    Channel channel = Channel::HeadsetOverlay;
    Micros issued_at = 0;
    friend bool operator==(const Notification&, const Notification&) = default;
};

enum class PhaseKind { PrimaryOnly, SecondaryPending, SecondaryActive, Done };
std::string_view to_string(PhaseKind p) noexcept;

struct Phase {
    PhaseKind kind = PhaseKind::PrimaryOnly;
    int task = 0;  // index of the pending/active task
    friend bool operator==(const Phase&, const Phase&) = default;
};

struct SessionSettings {
    double notify_after = 30.0;  // seconds of primary-task time before each notification
    double timeout = 600.0;      // seconds; bound for scripted runs
    friend bool operator==(const SessionSettings&, const SessionSettings&) = default;
};

struct SessionState {
    int subject = 0;
    int session_index = 0;
    Modality modality = Modality::MrReplica;
    std::array<SecondaryTask, 2> tasks;
    Phase phase;
    std::array<std::optional<Micros>, 2> notified_at;
    std::array<std::optional<Micros>, 2> activated_at;
    std::array<std::optional<Micros>, 2> completed_at;
    Micros primary_started_at = 0;
    Micros last_tick = 0;
    SessionSettings settings;

    friend bool operator==(const SessionState&, const SessionState&) = default;
};

struct TickOutcome {
    std::optional<Notification> notification;
    std::optional<int> completed_task;
    bool finished = false;
};

/// Arms session `which` (0 or 1) of the plan. Throws SceneNotReady when the
/// scene lacks either task binding or a binding references a missing id.
SessionState start_session(const SessionPlan& plan, int which, const TaskBindings& bindings,
                           const sim::WorldState& world, const SessionSettings& settings = {}, double now = 0.0);

/// Advances the protocol to time now (seconds, nondecreasing).
TickOutcome tick(SessionState& session, const sim::WorldState& world, double now);

/// Marks the pending task as taken up by the operator. Throws NotPending.
void record_activation(SessionState& session, double now);

bool task_done(const SecondaryTask& task, const sim::WorldState& world);

}  // namespace replica::orchestrator
