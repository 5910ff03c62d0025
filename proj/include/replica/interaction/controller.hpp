#pragma once

#include <string_view>
#include <variant>

#include "replica/sim/world.hpp"

namespace replica::interaction {

// Controller lifecycle of the handheld virtual replica:
//   Hidden --PalmUp--> PaletteShown --Grab(r)--> DeviceGrabbed(r)
//          --ReleaseDevice--> PanelOpen(r) --StowDevice--> Hidden
namespace controller {
struct Hidden {
    friend bool operator==(const Hidden&, const Hidden&) = default;
};
struct PaletteShown {
    friend bool operator==(const PaletteShown&, const PaletteShown&) = default;
};
struct DeviceGrabbed {
    RobotId robot;
    friend bool operator==(const DeviceGrabbed&, const DeviceGrabbed&) = default;
};
struct PanelOpen {
    RobotId robot;
    friend bool operator==(const PanelOpen&, const PanelOpen&) = default;
};
}  // namespace controller

using ControllerState =
    std::variant<controller::Hidden, controller::PaletteShown, controller::DeviceGrabbed, controller::PanelOpen>;

namespace gesture {
struct PalmUp {
    friend bool operator==(const PalmUp&, const PalmUp&) = default;
};
struct ThumbUp {
    friend bool operator==(const ThumbUp&, const ThumbUp&) = default;
};
struct GrabDevice {
    RobotId robot;
    friend bool operator==(const GrabDevice&, const GrabDevice&) = default;
};
struct ReleaseDevice {
    friend bool operator==(const ReleaseDevice&, const ReleaseDevice&) = default;
};
struct StowDevice {
    friend bool operator==(const StowDevice&, const StowDevice&) = default;
};
struct HandNearRobot {
    RobotId robot;
    bool near = false;
    friend bool operator==(const HandNearRobot&, const HandNearRobot&) = default;
};
}  // namespace gesture

using GestureEvent = std::variant<gesture::PalmUp, gesture::ThumbUp, gesture::GrabDevice, gesture::ReleaseDevice,
                                  gesture::StowDevice, gesture::HandNearRobot>;

/// Applies one gesture to the lifecycle. Pairs outside the transition table
/// throw Error(InvalidTransition); the caller's state is never modified.
ControllerState lifecycle_step(const ControllerState& state, const GestureEvent& event);

/// ThumbUp flips the onboard-camera view; every other event leaves it alone.
bool camera_toggle(bool view, const GestureEvent& event) noexcept;

std::string_view state_name(const ControllerState& state) noexcept;
std::string_view gesture_name(const GestureEvent& event) noexcept;

/// Robot bound to the state (DeviceGrabbed / PanelOpen), if any.
const RobotId* bound_robot(const ControllerState& state) noexcept;

}  // namespace replica::interaction
