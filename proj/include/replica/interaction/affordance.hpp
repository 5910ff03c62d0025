#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "replica/sim/world.hpp"

namespace replica::interaction {

/// Operational state of a drone, derived from the world on demand.
enum class DroneOpState { Freedrive, ReadyToPick, Picking, ReadyToRelease };

enum class AvatarColor { DarkGrey, Green, Red, Yellow };

inline constexpr std::array kDroneOpStates{DroneOpState::Freedrive, DroneOpState::ReadyToPick, DroneOpState::Picking,
                                           DroneOpState::ReadyToRelease};

/// Drone arrows are world-frame axes translated to the drone; AGV arrows
/// follow the vehicle heading and never include lateral motion.
enum class Arrow { PosX, NegX, PosY, NegY, PosZ, NegZ, YawCw, YawCcw, Forward, Backward };

inline constexpr std::array kDroneArrows{Arrow::PosX, Arrow::NegX, Arrow::PosY,  Arrow::NegY,
                                         Arrow::PosZ, Arrow::NegZ, Arrow::YawCw, Arrow::YawCcw};
inline constexpr std::array kAgvArrows{Arrow::Forward, Arrow::Backward, Arrow::YawCw, Arrow::YawCcw};

enum class ButtonKind { Grasp, Release, Rotate90, Align, Route, LiftForks, LowerForks, GoToCharge };

struct Button {
    ButtonKind kind = ButtonKind::Grasp;
    std::optional<RouteId> route;  // only for ButtonKind::Route

    friend bool operator==(const Button&, const Button&) = default;
};

struct AffordanceSet {
    std::set<Arrow> arrows;
    std::vector<Button> buttons;
    bool arrows_visible = true;

    bool has(Arrow a) const { return arrows.contains(a); }
    bool has(const Button& b) const;

    friend bool operator==(const AffordanceSet&, const AffordanceSet&) = default;
};

/// Presentation of an open panel. Arrows are drawn only while the operator's
/// hand hovers near the robot; this never changes what dispatch accepts.
struct PanelView {
    AffordanceSet affordances;
    bool arrows_shown = false;

    friend bool operator==(const PanelView&, const PanelView&) = default;
};

DroneOpState drone_op_state(const sim::WorldState& world, const RobotId& drone_id);

AffordanceSet affordances_for(DroneOpState state, bool autonomous_flight, bool vision_available);
AffordanceSet agv_affordances(const sim::AgvBody& agv, const std::vector<RouteId>& routes);

/// Live affordances of any robot in the world.
AffordanceSet current_affordances(const sim::WorldState& world, const RobotId& robot);

PanelView present(const AffordanceSet& affordances, bool hand_near) noexcept;

constexpr AvatarColor avatar_color(DroneOpState state) noexcept {
    switch (state) {
        case DroneOpState::Freedrive: return AvatarColor::DarkGrey;
        case DroneOpState::ReadyToPick: return AvatarColor::Green;
        case DroneOpState::Picking: return AvatarColor::Red;
        case DroneOpState::ReadyToRelease: return AvatarColor::Yellow;
    }
    return AvatarColor::DarkGrey;
}

std::string_view to_string(DroneOpState s) noexcept;
std::string_view to_string(AvatarColor c) noexcept;
std::string_view to_string(Arrow a) noexcept;
std::string to_string(const Button& b);

// Parsers throw Error(MalformedMessage) on unknown names.
DroneOpState parse_drone_op_state(std::string_view s);
Arrow parse_arrow(std::string_view s);
Button parse_button(std::string_view s);

}  // namespace replica::interaction
