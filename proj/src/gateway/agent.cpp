#include "replica/gateway/agent.hpp"

#include <algorithm>
#include <cmath>

#include "replica/sim/ops.hpp"

namespace replica::gateway {

namespace {

using interaction::Arrow;
using interaction::ButtonKind;
namespace ctl = interaction::controller;
namespace gst = interaction::gesture;

constexpr double kPositionEps = 1e-9;
constexpr double kArrivalEps = 1e-6;
constexpr double kHeadingEps = 1e-9;

RobotId task_robot(const orchestrator::SecondaryTask& task) {
    if (const auto* a = std::get_if<orchestrator::AgvRouteTask>(&task)) return a->agv;
    return std::get<orchestrator::DroneLiftTask>(task).drone;
}

// Walks the controller towards an open panel on `robot`, one gesture at a time.
std::optional<WireMessage> open_panel(const interaction::ControllerState& ctrl, const RobotId& robot) {
    if (std::holds_alternative<ctl::Hidden>(ctrl)) return msg::Gesture{gst::PalmUp{}};
    if (std::holds_alternative<ctl::PaletteShown>(ctrl)) return msg::Gesture{gst::GrabDevice{robot}};
    if (std::holds_alternative<ctl::DeviceGrabbed>(ctrl)) return msg::Gesture{gst::ReleaseDevice{}};
    if (std::get<ctl::PanelOpen>(ctrl).robot != robot) return msg::Gesture{gst::StowDevice{}};
    return std::nullopt;
}

void set_axis(msg::JoypadInput& j, Arrow arrow, double m) {
    switch (arrow) {
        case Arrow::PosX: j.lx = m; break;
        case Arrow::NegX: j.lx = -m; break;
        case Arrow::PosY: j.ly = m; break;
        case Arrow::NegY: j.ly = -m; break;
        case Arrow::PosZ: j.ry = m; break;
        case Arrow::NegZ: j.ry = -m; break;
        case Arrow::YawCw: j.rx = m; break;
        case Arrow::YawCcw: j.rx = -m; break;
        case Arrow::Forward: j.ly = m; break;
        case Arrow::Backward: j.ly = -m; break;
    }
}

msg::JoyButton joy_button(ButtonKind kind) {
    switch (kind) {
        case ButtonKind::Grasp:
        case ButtonKind::Route: return msg::JoyButton::A;
        case ButtonKind::Release:
        case ButtonKind::LiftForks:
        case ButtonKind::LowerForks: return msg::JoyButton::B;
        case ButtonKind::Rotate90: return msg::JoyButton::X;
        case ButtonKind::Align:
        case ButtonKind::GoToCharge: return msg::JoyButton::Y;
    }
    return msg::JoyButton::A;
}

}  // namespace

AgentDriver::AgentDriver(ScriptedAgent agent, std::uint64_t seed) : agent_(agent), rng_(seed) {}

double AgentDriver::uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

std::optional<AgentDriver::Intent> AgentDriver::drone_intent(const sim::WorldState& w,
                                                             const orchestrator::DroneLiftTask& task) {
    const auto& cfg = w.config;
    const auto& d = w.drone(task.drone);
    const auto& box = w.boxes.at(task.box);
    const bool stopped = d.commanded_velocity == sim::Vec3{};

    // Single-arrow moves, scaled on the last tick so the drone lands on the target.
    auto move = [&](const sim::Vec3& err) -> std::optional<Intent> {
        const std::array<std::tuple<double, Arrow, Arrow>, 3> axes{
            {{err.x, Arrow::PosX, Arrow::NegX}, {err.y, Arrow::PosY, Arrow::NegY}, {err.z, Arrow::PosZ, Arrow::NegZ}}};
        for (const auto& [e, pos, neg] : axes) {
            if (std::abs(e) <= kPositionEps) continue;
            const double m = std::min(1.0, std::abs(e) / (cfg.v_max_drone * cfg.dt));
            return Intent{{{e > 0 ? pos : neg, m}}, {}};
        }
        return std::nullopt;
    };

    if (box.carried_by == d.id) {
        const auto& pad = w.zones.at(task.landing_zone);
        const sim::Vec3 err{pad.center.x - d.pose.position.x, pad.center.y - d.pose.position.y, 0.0};
        if (auto m = move(err)) return m;
        if (!stopped) return Intent{};
        if (d.target_yaw) return std::nullopt;
        if (agent_.align_before_release && cfg.vision_available && !aligned_) {
            aligned_ = true;
            return Intent{{}, interaction::Button{ButtonKind::Align, {}}};
        }
        return Intent{{}, interaction::Button{ButtonKind::Release, {}}};
    }
    aligned_ = false;
    if (box.carried_by) return std::nullopt;
    if (interaction::drone_op_state(w, d.id) == interaction::DroneOpState::ReadyToPick) {
        if (!stopped) return Intent{};
        return Intent{{}, interaction::Button{ButtonKind::Grasp, {}}};
    }
    const sim::Vec3 above = box.pose.position + sim::Vec3{0.0, 0.0, cfg.carry_offset};
    if (auto m = move(above - d.pose.position)) return m;
    return stopped ? std::nullopt : std::optional<Intent>(Intent{});
}

std::optional<AgentDriver::Intent> AgentDriver::agv_intent(const sim::WorldState& w,
                                                           const orchestrator::AgvRouteTask& task) {
    const auto& cfg = w.config;
    const auto& a = w.agv(task.agv);
    if (a.last_assigned_route == task.route || a.autopilot_engaged()) return std::nullopt;

    const auto& start = w.route(task.route).waypoints.front();
    const double dx = start.x - a.pose.position.x;
    const double dy = start.y - a.pose.position.y;
    const double dist = std::hypot(dx, dy);
    if (dist < kArrivalEps) {
        if (a.forward_speed != 0.0 || a.yaw_rate != 0.0) return Intent{};
        return Intent{{}, interaction::Button{ButtonKind::Route, task.route}};
    }
    // Turn on the spot, then drive straight.
    const double e = sim::wrap_angle(std::atan2(dy, dx) - a.pose.yaw);
    if (std::abs(e) > kHeadingEps) {
        const double m = std::min(1.0, std::abs(e) / (cfg.omega_max * cfg.dt));
        return Intent{{{e > 0 ? Arrow::YawCcw : Arrow::YawCw, m}}, {}};
    }
    return Intent{{{Arrow::Forward, std::min(1.0, dist / (cfg.v_max_agv * cfg.dt))}}, {}};
}

std::optional<WireMessage> AgentDriver::deliver(const Engine& engine, const RobotId& robot, const Intent& intent) {
    if (last_ && last_->first == robot && last_->second == intent) return std::nullopt;
    last_ = {robot, intent};
    if (engine.session()->modality == orchestrator::Modality::MrReplica) {
        if (intent.button) return msg::PanelAction{interaction::ButtonAction{*intent.button}};
        return msg::PanelAction{interaction::ArrowAction{intent.arrows}};
    }
    msg::JoypadInput j;
    j.robot = robot;
    for (const auto& in : intent.arrows) set_axis(j, in.arrow, in.magnitude);
    if (intent.button) j.pressed.push_back(joy_button(intent.button->kind));
    return j;
}

std::optional<WireMessage> AgentDriver::next(const Engine& engine) {
    if (!engine.session_running()) return std::nullopt;
    const auto& s = *engine.session();
    const auto& ctrl = engine.controller();
    const bool mr = s.modality == orchestrator::Modality::MrReplica;

    switch (s.phase.kind) {
        case orchestrator::PhaseKind::PrimaryOnly:
        case orchestrator::PhaseKind::Done:
            last_.reset();
            if (mr && std::holds_alternative<ctl::PanelOpen>(ctrl)) return msg::Gesture{gst::StowDevice{}};
            if (mr && std::holds_alternative<ctl::DeviceGrabbed>(ctrl)) return msg::Gesture{gst::ReleaseDevice{}};
            return std::nullopt;

        case orchestrator::PhaseKind::SecondaryPending: {
            const int k = s.phase.task;
            const auto key = std::make_pair(s.session_index, k);
            if (!due_.contains(key)) {
                const double delay = mr ? agent_.reaction_delay_mr : agent_.reaction_delay_joypad;
                due_[key] = *s.notified_at[static_cast<std::size_t>(k)] + to_micros(delay + agent_.reaction_jitter * uniform());
            }
            if (!agent_.activates || engine.now() < due_[key]) return std::nullopt;
            const auto robot = task_robot(s.tasks[static_cast<std::size_t>(k)]);
            if (mr) return open_panel(ctrl, robot);
            last_ = {robot, Intent{}};
            msg::JoypadInput j;
            j.robot = robot;
            return j;
        }

        case orchestrator::PhaseKind::SecondaryActive: {
            const auto& task = s.tasks[static_cast<std::size_t>(s.phase.task)];
            const auto robot = task_robot(task);
            if (mr) {
                if (auto g = open_panel(ctrl, robot)) return g;
            }
            const auto& w = engine.world();
            std::optional<Intent> intent;
            if (const auto* lift = std::get_if<orchestrator::DroneLiftTask>(&task)) {
                intent = drone_intent(w, *lift);
            } else {
                intent = agv_intent(w, std::get<orchestrator::AgvRouteTask>(task));
            }
            if (!intent) return std::nullopt;
            return deliver(engine, robot, *intent);
        }
    }
    return std::nullopt;
}

stats::Questionnaire AgentDriver::questionnaire(int subject) {
    stats::Questionnaire q;
    q.subject = subject;
    for (auto m : {orchestrator::Modality::MrReplica, orchestrator::Modality::Joypad}) {
        stats::SusResponse r;
        for (auto& item : r.items) item = 1 + static_cast<int>(rng_() % 5);
        q.sus[m] = r;
    }
    for (auto& p : q.preferred) p = (rng_() & 1) ? orchestrator::Modality::MrReplica : orchestrator::Modality::Joypad;
    return q;
}

}  // namespace replica::gateway
