#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "replica/gateway/protocol.hpp"
#include "replica/interaction/controller.hpp"
#include "replica/orchestrator/session.hpp"
#include "replica/scene.hpp"
#include "replica/stats/timings.hpp"

namespace replica::gateway {

struct EngineOptions {
    orchestrator::SessionSettings settings;
    int snapshot_rate = 30;     // Hz
    double camera_range = 8.0;  // m, CameraFrame cutoff
};

struct FinishedSession {
    int subject = 0;
    int session = 0;
    orchestrator::Modality modality = orchestrator::Modality::MrReplica;
    bool aborted = false;
    std::vector<stats::LogEvent> log;
};

/// The simulation/orchestration loop. Single-threaded: handle() applies one
/// inbound message, advance() runs one fixed tick; both return the outbound
/// messages they produced in order. Transport and persistence live elsewhere.
class Engine {
public:
    Engine(Scene scene, std::vector<orchestrator::SessionPlan> plans, EngineOptions options = {});

    /// The reply (Ack or Err) comes first, followed by any events it caused.
    std::vector<Message> handle(const Message& in);
    std::vector<Message> advance();

    const Scene& scene() const noexcept { return scene_; }
    const sim::WorldState& world() const noexcept { return world_; }
    const interaction::ControllerState& controller() const noexcept { return controller_; }
    const std::optional<orchestrator::SessionState>& session() const noexcept { return session_; }
    bool session_running() const noexcept;
    const std::vector<stats::LogEvent>& log() const noexcept { return log_; }
    const std::vector<stats::Questionnaire>& questionnaires() const noexcept { return questionnaires_; }
    bool camera_view() const noexcept { return camera_view_; }
    const EngineOptions& options() const noexcept { return options_; }

    std::uint64_t tick_count() const noexcept { return ticks_; }
    /// Session clock (0 when no session has started).
    Micros now() const noexcept;

    /// Sessions that ended since the last call, oldest first.
    std::vector<FinishedSession> take_finished();

    Message hello_ack(std::uint64_t id) const;
    msg::AffordanceUpdate affordance_update() const;
    msg::Snapshot snapshot() const;

private:
    void on_gesture(const msg::Gesture& g, std::vector<Message>& out);
    void on_panel(const msg::PanelAction& p, std::vector<Message>& out);
    void on_joypad(const msg::JoypadInput& j, std::vector<Message>& out);
    nlohmann::json on_session(const msg::SessionControl& c, std::vector<Message>& out);
    void require_modality(orchestrator::Modality m) const;
    void activate(std::vector<Message>& out);
    void execute(const interaction::Command& c);
    void record(stats::LogKind kind, nlohmann::json payload);
    void emit_state_colors(std::vector<Message>& out, bool force);
    void emit_affordances(std::vector<Message>& out, bool force);
    void finish(bool aborted, std::vector<Message>& out);
    msg::SessionEvent session_event(const char* name) const;
    std::optional<msg::CameraFrame> camera_frame() const;

    Scene scene_;
    std::vector<orchestrator::SessionPlan> plans_;
    EngineOptions options_;
    Micros dt_us_ = 0;

    sim::WorldState world_;
    interaction::ControllerState controller_;
    std::map<RobotId, bool> hand_near_;
    bool camera_view_ = false;

    std::optional<orchestrator::SessionState> session_;
    bool running_ = false;
    std::uint64_t ticks_ = 0;          // since construction
    std::uint64_t session_ticks_ = 0;  // since the current session started
    std::vector<stats::LogEvent> log_;
    std::vector<FinishedSession> finished_;
    std::vector<stats::Questionnaire> questionnaires_;

    std::map<RobotId, interaction::DroneOpState> last_states_;
    std::optional<msg::AffordanceUpdate> last_affordances_;
};

/// Joypad stick/button mapping onto panel actions for the given robot.
/// Drone: left stick x/y, right stick y climbs, right stick x yaws
/// (positive = clockwise); A grasp, B release, X rotate 90, Y align.
/// AGV: left stick y drives, right stick x yaws; A takes the route that
/// starts at the vehicle, B toggles the forks, Y goes to charge.
std::vector<interaction::Action> joypad_actions(const sim::WorldState& world, const msg::JoypadInput& input);

}  // namespace replica::gateway
