#include "replica/gateway/engine.hpp"

#include <algorithm>
#include <limits>

#include "replica/interaction/dispatch.hpp"
#include "replica/sim/json.hpp"
#include "replica/sim/ops.hpp"

namespace replica::gateway {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

using interaction::Arrow;
using interaction::ArrowInput;
using interaction::ButtonKind;

void push_axis(std::vector<ArrowInput>& inputs, double value, Arrow pos, Arrow neg) {
    if (value > 0.0) inputs.push_back({pos, value});
    else if (value < 0.0) inputs.push_back({neg, -value});
    else if (value != value) inputs.push_back({pos, value});  // NaN: let dispatch reject it
}

nlohmann::json scene_summary(const Scene& scene) {
    auto ids = [](const auto& map) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& [id, _] : map) out.push_back(id.str());
        return out;
    };
    const auto& w = scene.world;
    return {{"name", scene.name}, {"drones", ids(w.drones)}, {"agvs", ids(w.agvs)}, {"boxes", ids(w.boxes)},
            {"zones", ids(w.zones)},  {"routes", ids(w.routes)}, {"dt", w.config.dt}};
}

RobotId task_robot(const orchestrator::SecondaryTask& task) {
    if (const auto* a = std::get_if<orchestrator::AgvRouteTask>(&task)) return a->agv;
    return std::get<orchestrator::DroneLiftTask>(task).drone;
}

}  // namespace

std::vector<interaction::Action> joypad_actions(const sim::WorldState& world, const msg::JoypadInput& input) {
    std::vector<interaction::Action> out;
    const bool drone = world.is_drone(input.robot);
    if (!drone && !world.is_agv(input.robot)) throw Error(ErrorCode::UnknownRobot, "unknown robot '" + input.robot.str() + "'");

    const bool sticks = input.lx != 0.0 || input.ly != 0.0 || input.rx != 0.0 || input.ry != 0.0;
    if (sticks || input.pressed.empty()) {
        interaction::ArrowAction arrows;
        if (drone) {
            push_axis(arrows.inputs, input.lx, Arrow::PosX, Arrow::NegX);
            push_axis(arrows.inputs, input.ly, Arrow::PosY, Arrow::NegY);
            push_axis(arrows.inputs, input.ry, Arrow::PosZ, Arrow::NegZ);
            push_axis(arrows.inputs, input.rx, Arrow::YawCw, Arrow::YawCcw);
        } else {
            push_axis(arrows.inputs, input.ly, Arrow::Forward, Arrow::Backward);
            push_axis(arrows.inputs, input.rx, Arrow::YawCw, Arrow::YawCcw);
        }
        out.emplace_back(std::move(arrows));
    }

    for (auto b : input.pressed) {
        interaction::Button button;
        if (drone) {
            switch (b) {
                case msg::JoyButton::A: button.kind = ButtonKind::Grasp; break;
                case msg::JoyButton::B: button.kind = ButtonKind::Release; break;
                case msg::JoyButton::X: button.kind = ButtonKind::Rotate90; break;
                case msg::JoyButton::Y: button.kind = ButtonKind::Align; break;
            }
        } else {
            const auto& agv = world.agv(input.robot);
            switch (b) {
                case msg::JoyButton::A: {
                    std::optional<RouteId> best;
                    double best_d = std::numeric_limits<double>::infinity();
                    for (const auto& [id, route] : world.routes) {
                        const double d = sim::planar_distance(agv.pose.position, route.waypoints.front());
                        if (d <= world.config.arrival_radius && d < best_d) {
                            best = id;
                            best_d = d;
                        }
                    }
                    if (!best) throw Error(ErrorCode::NotAtRouteStart, "no route starts at AGV '" + input.robot.str() + "'");
                    button = {ButtonKind::Route, best};
                    break;
                }
                case msg::JoyButton::B: button.kind = agv.fork_raised ? ButtonKind::LowerForks : ButtonKind::LiftForks; break;
                case msg::JoyButton::Y: button.kind = ButtonKind::GoToCharge; break;
                case msg::JoyButton::X:
                    throw Error(ErrorCode::AffordanceNotAvailable, "button X has no AGV mapping");
            }
        }
        out.emplace_back(interaction::ButtonAction{button});
    }
    return out;
}

Engine::Engine(Scene scene, std::vector<orchestrator::SessionPlan> plans, EngineOptions options)
    : scene_(std::move(scene)), plans_(std::move(plans)), options_(options) {
    sim::validate(scene_.world);
    dt_us_ = to_micros(scene_.world.config.dt);
    if (dt_us_ <= 0) throw Error(ErrorCode::InvalidConfig, "dt must be at least one microsecond");
    if (options_.snapshot_rate <= 0) throw Error(ErrorCode::InvalidConfig, "snapshot rate must be positive");
    world_ = scene_.world;
}

bool Engine::session_running() const noexcept { return running_; }

Micros Engine::now() const noexcept { return static_cast<Micros>(session_ticks_) * dt_us_; }

std::vector<FinishedSession> Engine::take_finished() { return std::exchange(finished_, {}); }

Message Engine::hello_ack(std::uint64_t id) const {
    nlohmann::json info = {{"protocol", kProtocolVersion}, {"scene", scene_summary(scene_)}, {"sim_time", world_.sim_time}};
    return {0, msg::Ack{id, info}};
}

msg::AffordanceUpdate Engine::affordance_update() const {
    msg::AffordanceUpdate u;
    u.state = controller_;
    u.camera_view = camera_view_;
    if (const auto* robot = interaction::bound_robot(controller_)) {
        u.affordances = interaction::current_affordances(world_, *robot);
        auto near = hand_near_.find(*robot);
        u.arrows_shown = interaction::present(u.affordances, near != hand_near_.end() && near->second).arrows_shown;
    } else {
        u.affordances.arrows_visible = false;
    }
    return u;
}

msg::Snapshot Engine::snapshot() const { return {world_.sim_time, sim::bodies_json(world_)}; }

std::optional<msg::CameraFrame> Engine::camera_frame() const {
    const sim::DroneBody* cam = nullptr;
    if (const auto* robot = interaction::bound_robot(controller_); robot && world_.is_drone(*robot)) {
        cam = &world_.drone(*robot);
    } else if (!world_.drones.empty()) {
        cam = &world_.drones.begin()->second;
    }
    if (!cam) return std::nullopt;

    msg::CameraFrame f{cam->id, world_.sim_time, {}};
    auto see = [&](const std::string& id, std::string kind, const sim::Vec3& p, double yaw) {
        const auto rel = p - cam->pose.position;
        if (rel.norm() > options_.camera_range) return;
        f.items.push_back({id, std::move(kind), sim::rotate_yaw(rel, -cam->pose.yaw), sim::wrap_angle(yaw - cam->pose.yaw)});
    };
    for (const auto& [id, b] : world_.boxes) see(id.str(), "box", b.pose.position, b.pose.yaw);
    for (const auto& [id, a] : world_.agvs) see(id.str(), "agv", a.pose.position, a.pose.yaw);
    for (const auto& [id, d] : world_.drones) {
        if (id != cam->id) see(id.str(), "drone", d.pose.position, d.pose.yaw);
    }
    for (const auto& [id, z] : world_.zones) see(id.str(), std::string(sim::to_string(z.kind)), z.center, z.pad_yaw);
    return f;
}

void Engine::record(stats::LogKind kind, nlohmann::json payload) {
    if (!running_) return;
    log_.push_back({now(), kind, std::move(payload)});
}

msg::SessionEvent Engine::session_event(const char* name) const {
    msg::SessionEvent e;
    e.event = name;
    if (session_) {
        e.subject = session_->subject;
        e.session = session_->session_index;
        e.modality = session_->modality;
        e.phase = std::string(orchestrator::to_string(session_->phase.kind));
    }
    e.t = now();
    return e;
}

void Engine::emit_state_colors(std::vector<Message>& out, bool force) {
    for (const auto& [id, _] : world_.drones) {
        const auto state = interaction::drone_op_state(world_, id);
        auto it = last_states_.find(id);
        if (!force && it != last_states_.end() && it->second == state) continue;
        last_states_[id] = state;
        const auto color = interaction::avatar_color(state);
        out.push_back({0, msg::StateColor{id, state, color}});
        record(stats::LogKind::StateChange,
               {{"robot", id.str()}, {"op_state", interaction::to_string(state)}, {"color", interaction::to_string(color)}});
    }
}

void Engine::emit_affordances(std::vector<Message>& out, bool force) {
    auto update = affordance_update();
    if (!force && last_affordances_ && *last_affordances_ == update) return;
    last_affordances_ = update;
    out.push_back({0, std::move(update)});
}

void Engine::require_modality(orchestrator::Modality m) const {
    if (running_ && session_->modality != m) {
        throw Error(ErrorCode::WrongModality, "the running session uses the " +
                                                  std::string(orchestrator::to_string(session_->modality)) + " modality");
    }
}

void Engine::activate(std::vector<Message>& out) {
    if (!running_ || session_->phase.kind != orchestrator::PhaseKind::SecondaryPending) return;
    const int k = session_->phase.task;
    orchestrator::record_activation(*session_, to_seconds(now()));
    record(stats::LogKind::InteractionActivated, {{"task", k}});
    out.push_back({0, session_event("activated")});
}

void Engine::execute(const interaction::Command& c) {
    interaction::apply(world_, c);
    record(stats::LogKind::Command, {{"robot", interaction::command_robot(c).str()}, {"command", interaction::describe(c)}});
}

void Engine::on_gesture(const msg::Gesture& g, std::vector<Message>& out) {
    require_modality(orchestrator::Modality::MrReplica);
    if (std::holds_alternative<interaction::gesture::ThumbUp>(g.event)) {
        camera_view_ = interaction::camera_toggle(camera_view_, g.event);
    } else if (const auto* near = std::get_if<interaction::gesture::HandNearRobot>(&g.event)) {
        world_.robot_position(near->robot);  // UnknownRobot
        hand_near_[near->robot] = near->near;
    } else {
        if (const auto* grab = std::get_if<interaction::gesture::GrabDevice>(&g.event)) world_.robot_position(grab->robot);
        controller_ = interaction::lifecycle_step(controller_, g.event);
        if (std::holds_alternative<interaction::controller::PanelOpen>(controller_)) activate(out);
    }
    emit_affordances(out, true);
}

void Engine::on_panel(const msg::PanelAction& p, std::vector<Message>& out) {
    require_modality(orchestrator::Modality::MrReplica);
    const auto command = interaction::dispatch(controller_, world_, p.action);
    execute(command);
    activate(out);
}

void Engine::on_joypad(const msg::JoypadInput& j, std::vector<Message>& out) {
    require_modality(orchestrator::Modality::Joypad);
    const auto actions = joypad_actions(world_, j);
    activate(out);
    for (const auto& a : actions) {
        // Each action is validated against the affordances left by the previous one.
        execute(interaction::dispatch_to(world_, j.robot, a));
    }
}

nlohmann::json Engine::on_session(const msg::SessionControl& c, std::vector<Message>& out) {
    switch (c.command) {
        case msg::SessionCommand::Start: {
            if (running_) throw Error(ErrorCode::InvalidConfig, "a session is already running");
            auto plan = std::find_if(plans_.begin(), plans_.end(), [&](const auto& p) { return p.subject_id == c.subject; });
            if (plan == plans_.end()) {
                throw Error(ErrorCode::NoSession, "subject " + std::to_string(c.subject) + " is not in the study plan");
            }
            // Every session starts from the scene layout; the world clock keeps running
            // so snapshot times stay monotonic.
            auto fresh = scene_.world;
            fresh.sim_time = world_.sim_time;
            auto state = orchestrator::start_session(*plan, c.session, scene_.tasks, fresh, options_.settings, 0.0);
            world_ = std::move(fresh);
            session_ = std::move(state);
            controller_ = interaction::controller::Hidden{};
            hand_near_.clear();
            camera_view_ = false;
            session_ticks_ = 0;
            log_.clear();
            running_ = true;
            nlohmann::json kinds = nlohmann::json::array();
            for (const auto& t : session_->tasks) kinds.push_back(orchestrator::to_string(orchestrator::kind_of(t)));
            record(stats::LogKind::SessionStart, {{"subject", c.subject},
                                                  {"session", c.session},
                                                  {"modality", orchestrator::to_string(session_->modality)},
                                                  {"sequence", plan->sequence},
                                                  {"tasks", kinds}});
            out.push_back({0, session_event("started")});
            emit_state_colors(out, true);
            emit_affordances(out, true);
            return {{"subject", c.subject}, {"session", c.session}, {"modality", orchestrator::to_string(session_->modality)}};
        }
        case msg::SessionCommand::Stop:
            if (!running_) throw Error(ErrorCode::NoSession, "no session is running");
            finish(true, out);
            return nullptr;
        case msg::SessionCommand::Status: {
            if (!session_) return {{"running", false}};
            return {{"running", running_},
                    {"subject", session_->subject},
                    {"session", session_->session_index},
                    {"modality", orchestrator::to_string(session_->modality)},
                    {"phase", orchestrator::to_string(session_->phase.kind)},
                    {"task", session_->phase.task},
                    {"t", to_seconds(now())}};
        }
    }
    return nullptr;
}

void Engine::finish(bool aborted, std::vector<Message>& out) {
    record(stats::LogKind::SessionEnd, {{"aborted", aborted}});
    running_ = false;
    finished_.push_back({session_->subject, session_->session_index, session_->modality, aborted, log_});
    out.push_back({0, session_event(aborted ? "stopped" : "finished")});
}

std::vector<Message> Engine::handle(const Message& in) {
    std::vector<Message> events;
    nlohmann::json info;
    try {
        std::visit(overloaded{
                       [&](const msg::Hello& h) {
                           if (h.protocol != kProtocolVersion) {
                               throw Error(ErrorCode::MalformedMessage,
                                           "unsupported protocol version " + std::to_string(h.protocol));
                           }
                           info = std::get<msg::Ack>(hello_ack(in.id).body).info;
                       },
                       [&](const msg::Gesture& g) { on_gesture(g, events); },
                       [&](const msg::PanelAction& p) { on_panel(p, events); },
                       [&](const msg::JoypadInput& j) { on_joypad(j, events); },
                       [&](const msg::QuestionnaireSubmit& q) {
                           auto it = std::find_if(questionnaires_.begin(), questionnaires_.end(),
                                                  [&](const auto& x) { return x.subject == q.answers.subject; });
                           if (it != questionnaires_.end()) *it = q.answers;
                           else questionnaires_.push_back(q.answers);
                       },
                       [&](const msg::SessionControl& c) { info = on_session(c, events); },
                       [&](const auto&) {
                           throw Error(ErrorCode::MalformedMessage,
                                       std::string(type_name(in.body)) + " is an outbound message");
                       },
                   },
                   in.body);
    } catch (const Error& e) {
        std::vector<Message> out{{0, msg::Err{in.id, e.code(), e.what()}}};
        return out;
    }
    std::vector<Message> out{{0, msg::Ack{in.id, std::move(info)}}};
    emit_state_colors(events, false);
    if (!std::holds_alternative<msg::Gesture>(in.body)) emit_affordances(events, false);
    for (auto& e : events) out.push_back(std::move(e));
    return out;
}

std::vector<Message> Engine::advance() {
    std::vector<Message> out;
    sim::step(world_, world_.config.dt);
    ++ticks_;
    if (running_) ++session_ticks_;
    emit_state_colors(out, false);

    if (running_) {
        const auto outcome = orchestrator::tick(*session_, world_, to_seconds(now()));
        if (outcome.notification) {
            const auto& n = *outcome.notification;
            const auto kind = orchestrator::kind_of(n.task);
            const auto robot = task_robot(n.task);
            record(stats::LogKind::TaskNotified, {{"task", n.task_index},
                                                  {"task_kind", orchestrator::to_string(kind)},
                                                  {"robot", robot.str()},
                                                  {"channel", orchestrator::to_string(n.channel)}});
            out.push_back({0, msg::NotificationMsg{n.task_index, kind, robot, n.channel, n.issued_at}});
            out.push_back({0, session_event("notified")});
        }
        if (outcome.completed_task) {
            record(stats::LogKind::TaskCompleted, {{"task", *outcome.completed_task}});
            out.push_back({0, session_event("completed")});
        }
        if (outcome.finished) finish(false, out);
    }
    emit_affordances(out, false);

    // Snapshots at snapshot_rate, aligned to whole tick boundaries.
    const auto rate = static_cast<std::uint64_t>(options_.snapshot_rate);
    const auto dt = static_cast<std::uint64_t>(dt_us_);
    if ((ticks_ * dt * rate) / 1'000'000 != ((ticks_ - 1) * dt * rate) / 1'000'000) {
        out.push_back({0, snapshot()});
        if (camera_view_) {
            if (auto frame = camera_frame()) out.push_back({0, std::move(*frame)});
        }
    }
    return out;
}

}  // namespace replica::gateway
