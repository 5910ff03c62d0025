#include "replica/interaction/dispatch.hpp"

#include <cmath>

#include "replica/error.hpp"
#include "replica/sim/ops.hpp"

namespace replica::interaction {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

Command arrows_to_command(const sim::WorldState& world, const RobotId& robot, const ArrowAction& action,
                          const AffordanceSet& aff) {
    const auto& cfg = world.config;
    sim::Vec3 v;
    double forward = 0.0;
    double yaw = 0.0;
    for (const auto& in : action.inputs) {
        if (!std::isfinite(in.magnitude) || in.magnitude < 0.0 || in.magnitude > 1.0) {
            throw Error(ErrorCode::InvalidMagnitude, "arrow magnitude must lie in [0, 1]");
        }
        if (!aff.has(in.arrow)) {
            throw Error(ErrorCode::AffordanceNotAvailable,
                        "arrow " + std::string(to_string(in.arrow)) + " is not available for '" + robot.str() + "'");
        }
        const double m = in.magnitude;
        switch (in.arrow) {
            case Arrow::PosX: v.x += m * cfg.v_max_drone; break;
            case Arrow::NegX: v.x -= m * cfg.v_max_drone; break;
            case Arrow::PosY: v.y += m * cfg.v_max_drone; break;
            case Arrow::NegY: v.y -= m * cfg.v_max_drone; break;
            case Arrow::PosZ: v.z += m * cfg.v_max_drone; break;
            case Arrow::NegZ: v.z -= m * cfg.v_max_drone; break;
            case Arrow::YawCcw: yaw += m * cfg.omega_max; break;
            case Arrow::YawCw: yaw -= m * cfg.omega_max; break;
            case Arrow::Forward: forward += m * cfg.v_max_agv; break;
            case Arrow::Backward: forward -= m * cfg.v_max_agv; break;
        }
    }
    if (world.is_drone(robot)) return cmd::DroneVelocity{robot, v, yaw};
    return cmd::AgvVelocity{robot, forward, yaw};
}

Command button_to_command(const RobotId& robot, const Button& b) {
    switch (b.kind) {
        case ButtonKind::Grasp: return cmd::Grasp{robot};
        case ButtonKind::Release: return cmd::Release{robot};
        case ButtonKind::Rotate90: return cmd::RotateQuarter{robot};
        case ButtonKind::Align: return cmd::Align{robot};
        case ButtonKind::Route: return cmd::AssignRoute{robot, *b.route};
        case ButtonKind::LiftForks: return cmd::SetForks{robot, true};
        case ButtonKind::LowerForks: return cmd::SetForks{robot, false};
        case ButtonKind::GoToCharge: return cmd::GoToCharge{robot};
    }
    throw Error(ErrorCode::AffordanceNotAvailable, "unhandled button");
}

}  // namespace

Command dispatch_to(const sim::WorldState& world, const RobotId& robot, const Action& action) {
    const AffordanceSet aff = current_affordances(world, robot);
    if (const auto* arrows = std::get_if<ArrowAction>(&action)) return arrows_to_command(world, robot, *arrows, aff);
    const auto& button = std::get<ButtonAction>(action).button;
    if (!aff.has(button)) {
        throw Error(ErrorCode::AffordanceNotAvailable,
                    "button " + to_string(button) + " is not available for '" + robot.str() + "'");
    }
    return button_to_command(robot, button);
}

Command dispatch(const ControllerState& ctrl, const sim::WorldState& world, const Action& action) {
    const auto* panel = std::get_if<controller::PanelOpen>(&ctrl);
    if (!panel) throw Error(ErrorCode::PanelNotOpen, "no interaction panel is open");
    return dispatch_to(world, panel->robot, action);
}

void apply(sim::WorldState& world, const Command& command) {
    std::visit(overloaded{
                   [&](const cmd::DroneVelocity& c) { sim::command_drone(world, c.robot, c.velocity, c.yaw_rate); },
                   [&](const cmd::AgvVelocity& c) { sim::command_agv(world, c.robot, c.forward_speed, c.yaw_rate); },
                   [&](const cmd::Grasp& c) { sim::grasp(world, c.robot); },
                   [&](const cmd::Release& c) { sim::release(world, c.robot); },
                   [&](const cmd::RotateQuarter& c) { sim::rotate_quarter(world, c.robot); },
                   [&](const cmd::Align& c) { sim::align_to_pad(world, c.robot); },
                   [&](const cmd::AssignRoute& c) { sim::assign_route(world, c.robot, c.route); },
                   [&](const cmd::SetForks& c) { sim::set_forks(world, c.robot, c.raised); },
                   [&](const cmd::GoToCharge& c) { sim::go_to_charge(world, c.robot); },
               },
               command);
}

std::string describe(const Command& command) {
    return std::visit(overloaded{
                          [](const cmd::DroneVelocity&) { return std::string("drone_velocity"); },
                          [](const cmd::AgvVelocity&) { return std::string("agv_velocity"); },
                          [](const cmd::Grasp&) { return std::string("grasp"); },
                          [](const cmd::Release&) { return std::string("release"); },
                          [](const cmd::RotateQuarter&) { return std::string("rotate_quarter"); },
                          [](const cmd::Align&) { return std::string("align"); },
                          [](const cmd::AssignRoute&) { return std::string("assign_route"); },
                          [](const cmd::SetForks&) { return std::string("set_forks"); },
                          [](const cmd::GoToCharge&) { return std::string("go_to_charge"); },
                      },
                      command);
}

const RobotId& command_robot(const Command& command) noexcept {
    return std::visit([](const auto& c) -> const RobotId& { return c.robot; }, command);
}

}  // namespace replica::interaction
