#include "replica/interaction/affordance.hpp"

#include <algorithm>

#include "replica/error.hpp"
#include "replica/sim/ops.hpp"

namespace replica::interaction {

bool AffordanceSet::has(const Button& b) const {
    return std::find(buttons.begin(), buttons.end(), b) != buttons.end();
}

DroneOpState drone_op_state(const sim::WorldState& world, const RobotId& drone_id) {
    const auto& d = world.drone(drone_id);
    if (d.carried) {
        return sim::proximity(world, drone_id, sim::ZoneKind::LandingPad) ? DroneOpState::ReadyToRelease
                                                                          : DroneOpState::Picking;
    }
    const bool at_pad = !world.config.grasp_requires_takeoff_pad ||
                        sim::proximity(world, drone_id, sim::ZoneKind::TakeoffPad).has_value();
    if (at_pad && sim::box_in_grasp_range(world, drone_id)) return DroneOpState::ReadyToPick;
    return DroneOpState::Freedrive;
}

AffordanceSet affordances_for(DroneOpState state, bool autonomous_flight, bool vision_available) {
    AffordanceSet out;
    out.arrows.insert(kDroneArrows.begin(), kDroneArrows.end());
    switch (state) {
        case DroneOpState::Freedrive:
            break;
        case DroneOpState::ReadyToPick:
            out.buttons = {{ButtonKind::Grasp, {}}};
            break;
        case DroneOpState::Picking:
            if (autonomous_flight) {
                out.arrows.clear();
                out.arrows_visible = false;
            }
            break;
        case DroneOpState::ReadyToRelease:
            out.buttons = {{ButtonKind::Release, {}}, {ButtonKind::Rotate90, {}}};
            if (vision_available) out.buttons.push_back({ButtonKind::Align, {}});
            break;
    }
    return out;
}

AffordanceSet agv_affordances(const sim::AgvBody& agv, const std::vector<RouteId>& routes) {
    AffordanceSet out;
    if (agv.autopilot_engaged()) {
        out.arrows_visible = false;
    } else {
        out.arrows.insert(kAgvArrows.begin(), kAgvArrows.end());
        for (const auto& r : routes) out.buttons.push_back({ButtonKind::Route, r});
    }
    out.buttons.push_back({agv.fork_raised ? ButtonKind::LowerForks : ButtonKind::LiftForks, {}});
    out.buttons.push_back({ButtonKind::GoToCharge, {}});
    return out;
}

AffordanceSet current_affordances(const sim::WorldState& world, const RobotId& robot) {
    if (world.is_drone(robot)) {
        const auto& d = world.drone(robot);
        return affordances_for(drone_op_state(world, robot), d.autonomous_flight, world.config.vision_available);
    }
    std::vector<RouteId> routes;
    routes.reserve(world.routes.size());
    for (const auto& [id, r] : world.routes) routes.push_back(id);
    return agv_affordances(world.agv(robot), routes);
}

PanelView present(const AffordanceSet& affordances, bool hand_near) noexcept {
    return {affordances, affordances.arrows_visible && hand_near};
}

std::string_view to_string(DroneOpState s) noexcept {
    switch (s) {
        case DroneOpState::Freedrive: return "Freedrive";
        case DroneOpState::ReadyToPick: return "ReadyToPick";
        case DroneOpState::Picking: return "Picking";
        case DroneOpState::ReadyToRelease: return "ReadyToRelease";
    }
    return "Freedrive";
}

std::string_view to_string(AvatarColor c) noexcept {
    switch (c) {
        case AvatarColor::DarkGrey: return "DarkGrey";
        case AvatarColor::Green: return "Green";
        case AvatarColor::Red: return "Red";
        case AvatarColor::Yellow: return "Yellow";
    }
    return "DarkGrey";
}

namespace {

constexpr std::array<std::pair<Arrow, std::string_view>, 10> kArrowNames{{
    {Arrow::PosX, "+x"},
    {Arrow::NegX, "-x"},
    {Arrow::PosY, "+y"},
    {Arrow::NegY, "-y"},
    {Arrow::PosZ, "+z"},
    {Arrow::NegZ, "-z"},
    {Arrow::YawCw, "yaw_cw"},
    {Arrow::YawCcw, "yaw_ccw"},
    {Arrow::Forward, "forward"},
    {Arrow::Backward, "backward"},
}};

constexpr std::array<std::pair<ButtonKind, std::string_view>, 8> kButtonNames{{
    {ButtonKind::Grasp, "Grasp"},
    {ButtonKind::Release, "Release"},
    {ButtonKind::Rotate90, "Rotate90"},
    {ButtonKind::Align, "Align"},
    {ButtonKind::Route, "Route"},
    {ButtonKind::LiftForks, "LiftForks"},
    {ButtonKind::LowerForks, "LowerForks"},
    {ButtonKind::GoToCharge, "GoToCharge"},
}};

constexpr std::string_view kRoutePrefix = "Route:";

}  // namespace

std::string_view to_string(Arrow a) noexcept {
    for (const auto& [arrow, name] : kArrowNames) {
        if (arrow == a) return name;
    }
    return "?";
}

std::string to_string(const Button& b) {
    if (b.kind == ButtonKind::Route) return std::string(kRoutePrefix) + (b.route ? b.route->str() : std::string());
    for (const auto& [kind, name] : kButtonNames) {
        if (kind == b.kind) return std::string(name);
    }
    return "?";
}

DroneOpState parse_drone_op_state(std::string_view s) {
    for (auto st : kDroneOpStates) {
        if (to_string(st) == s) return st;
    }
    throw Error(ErrorCode::MalformedMessage, "unknown drone state '" + std::string(s) + "'");
}

Arrow parse_arrow(std::string_view s) {
    for (const auto& [arrow, name] : kArrowNames) {
        if (name == s) return arrow;
    }
    throw Error(ErrorCode::MalformedMessage, "unknown arrow '" + std::string(s) + "'");
}

Button parse_button(std::string_view s) {
    if (s.starts_with(kRoutePrefix)) {
        auto id = s.substr(kRoutePrefix.size());
        if (id.empty()) throw Error(ErrorCode::MalformedMessage, "route button needs a route id");
        return {ButtonKind::Route, RouteId(std::string(id))};
    }
    for (const auto& [kind, name] : kButtonNames) {
        if (name == s && kind != ButtonKind::Route) return {kind, {}};
    }
    throw Error(ErrorCode::MalformedMessage, "unknown button '" + std::string(s) + "'");
}

}  // namespace replica::interaction
