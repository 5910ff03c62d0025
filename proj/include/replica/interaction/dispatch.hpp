#pragma once

#include <string>
#include <variant>
#include <vector>

#include "replica/interaction/affordance.hpp"
#include "replica/interaction/controller.hpp"
#include "replica/sim/world.hpp"

namespace replica::interaction {

struct ArrowInput {
    Arrow arrow = Arrow::PosX;
    double magnitude = 0.0;  // held fraction of the maximum rate, in [0, 1]

    friend bool operator==(const ArrowInput&, const ArrowInput&) = default;
};

/// One or more held arrows. A panel sends a single arrow; a joypad stick may
/// hold several at once. Magnitude 0 stops the corresponding motion.
struct ArrowAction {
    std::vector<ArrowInput> inputs;
    friend bool operator==(const ArrowAction&, const ArrowAction&) = default;
};

struct ButtonAction {
    Button button;
    friend bool operator==(const ButtonAction&, const ButtonAction&) = default;
};

using Action = std::variant<ArrowAction, ButtonAction>;

// sim-core commands produced by dispatch.
namespace cmd {
struct DroneVelocity {
    RobotId robot;
    sim::Vec3 velocity;
    double yaw_rate = 0.0;
    friend bool operator==(const DroneVelocity&, const DroneVelocity&) = default;
};
struct AgvVelocity {
    RobotId robot;
    double forward_speed = 0.0;
    double yaw_rate = 0.0;
    friend bool operator==(const AgvVelocity&, const AgvVelocity&) = default;
};
struct Grasp {
    RobotId robot;
    friend bool operator==(const Grasp&, const Grasp&) = default;
};
struct Release {
    RobotId robot;
    friend bool operator==(const Release&, const Release&) = default;
};
struct RotateQuarter {
    RobotId robot;
    friend bool operator==(const RotateQuarter&, const RotateQuarter&) = default;
};
struct Align {
    RobotId robot;
    friend bool operator==(const Align&, const Align&) = default;
};
struct AssignRoute {
    RobotId robot;
    RouteId route;
    friend bool operator==(const AssignRoute&, const AssignRoute&) = default;
};
struct SetForks {
    RobotId robot;
    bool raised = false;
    friend bool operator==(const SetForks&, const SetForks&) = default;
};
struct GoToCharge {
    RobotId robot;
    friend bool operator==(const GoToCharge&, const GoToCharge&) = default;
};
}  // namespace cmd

using Command = std::variant<cmd::DroneVelocity, cmd::AgvVelocity, cmd::Grasp, cmd::Release, cmd::RotateQuarter,
                             cmd::Align, cmd::AssignRoute, cmd::SetForks, cmd::GoToCharge>;

/// Validates an action against the live affordances of the robot whose panel
/// is open and translates it into a sim-core command.
/// Throws PanelNotOpen, AffordanceNotAvailable, InvalidMagnitude, UnknownRobot.
Command dispatch(const ControllerState& ctrl, const sim::WorldState& world, const Action& action);

/// Same validation path without a controller; used by the joypad modality.
Command dispatch_to(const sim::WorldState& world, const RobotId& robot, const Action& action);

/// Executes a command on the world (sim-core errors propagate).
void apply(sim::WorldState& world, const Command& command);

std::string describe(const Command& command);
const RobotId& command_robot(const Command& command) noexcept;

}  // namespace replica::interaction
