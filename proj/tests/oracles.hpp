#pragma once

// Hand-written reference tables for the interaction layer. Nothing here calls
// into the library's derivation code; the tests compare the library against it.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "replica/interaction/affordance.hpp"
#include "replica/interaction/controller.hpp"
#include "replica/interaction/dispatch.hpp"
#include "replica/sim/world.hpp"

namespace replica::oracle {

using namespace replica::interaction;

// (state, event) -> next state name, or "" when rejected.
inline const std::map<std::pair<std::string, std::string>, std::string>& transition_table() {
    static const std::map<std::pair<std::string, std::string>, std::string> t = [] {
        std::map<std::pair<std::string, std::string>, std::string> m;
        for (const char* s : {"Hidden", "PaletteShown", "DeviceGrabbed", "PanelOpen"}) {
            for (const char* e : {"PalmUp", "ThumbUp", "GrabDevice", "ReleaseDevice", "StowDevice", "HandNearRobot"}) {
                m[{s, e}] = "";
            }
        }
        m[{"Hidden", "PalmUp"}] = "PaletteShown";
        m[{"PaletteShown", "GrabDevice"}] = "DeviceGrabbed";
        m[{"DeviceGrabbed", "ReleaseDevice"}] = "PanelOpen";
        m[{"PanelOpen", "StowDevice"}] = "Hidden";
        return m;
    }();
    return t;
}

inline std::string color_name(DroneOpState s) {
    switch (s) {
        case DroneOpState::Freedrive: return "DarkGrey";
        case DroneOpState::ReadyToPick: return "Green";
        case DroneOpState::Picking: return "Red";
        case DroneOpState::ReadyToRelease: return "Yellow";
    }
    return "?";
}

struct ExpectedAffordances {
    std::set<std::string> arrows;
    std::vector<std::string> buttons;
    bool arrows_visible = true;
};

inline const std::set<std::string> kAllDroneArrows{"+x", "-x", "+y", "-y", "+z", "-z", "yaw_cw", "yaw_ccw"};
inline const std::set<std::string> kAllAgvArrows{"forward", "backward", "yaw_cw", "yaw_ccw"};

inline ExpectedAffordances drone_table(DroneOpState s, bool autonomous, bool vision) {
    switch (s) {
        case DroneOpState::Freedrive: return {kAllDroneArrows, {}, true};
        case DroneOpState::ReadyToPick: return {kAllDroneArrows, {"Grasp"}, true};
        case DroneOpState::Picking:
            if (autonomous) return {{}, {}, false};
            return {kAllDroneArrows, {}, true};
        case DroneOpState::ReadyToRelease:
            if (vision) return {kAllDroneArrows, {"Release", "Rotate90", "Align"}, true};
            return {kAllDroneArrows, {"Release", "Rotate90"}, true};
    }
    return {};
}

inline ExpectedAffordances agv_table(bool route_active, bool forks_raised, const std::vector<std::string>& routes) {
    ExpectedAffordances e;
    if (!route_active) {
        e.arrows = kAllAgvArrows;
        for (const auto& r : routes) e.buttons.push_back("Route:" + r);
    } else {
        e.arrows_visible = false;
    }
    e.buttons.push_back(forks_raised ? "LowerForks" : "LiftForks");
    e.buttons.push_back("GoToCharge");
    return e;
}

inline ExpectedAffordances flatten(const AffordanceSet& a) {
    ExpectedAffordances e;
    for (auto x : a.arrows) e.arrows.insert(std::string(to_string(x)));
    for (const auto& b : a.buttons) e.buttons.push_back(to_string(b));
    e.arrows_visible = a.arrows_visible;
    return e;
}

inline bool same(const ExpectedAffordances& a, const ExpectedAffordances& b) {
    return a.arrows == b.arrows && a.buttons == b.buttons && a.arrows_visible == b.arrows_visible;
}

inline bool strictly_inside(const sim::Vec3& p, const sim::Zone& z) {
    const double dx = p.x - z.center.x;
    const double dy = p.y - z.center.y;
    return dx * dx + dy * dy < z.radius * z.radius;
}

// State predicate written from the definition: carrying decides between the
// two carrying states by landing-pad presence; otherwise a free box within
// grasp range (and the takeoff pad, when required) makes the drone ready.
inline DroneOpState expected_state(const sim::WorldState& w, const RobotId& id) {
    const auto& d = w.drones.at(id);
    auto over = [&](sim::ZoneKind kind) {
        for (const auto& [_, z] : w.zones) {
            if (z.kind == kind && strictly_inside(d.pose.position, z)) return true;
        }
        return false;
    };
    if (d.carried) return over(sim::ZoneKind::LandingPad) ? DroneOpState::ReadyToRelease : DroneOpState::Picking;
    const sim::Vec3 gp{d.pose.position.x, d.pose.position.y, d.pose.position.z - w.config.carry_offset};
    bool box_near = false;
    for (const auto& [_, b] : w.boxes) {
        if (!b.carried_by && sim::distance(gp, b.pose.position) <= w.config.grasp_radius) box_near = true;
    }
    const bool pad_ok = !w.config.grasp_requires_takeoff_pad || over(sim::ZoneKind::TakeoffPad);
    return pad_ok && box_near ? DroneOpState::ReadyToPick : DroneOpState::Freedrive;
}

inline ExpectedAffordances expected_affordances(const sim::WorldState& w, const RobotId& id) {
    if (w.drones.contains(id)) {
        return drone_table(expected_state(w, id), w.drones.at(id).autonomous_flight, w.config.vision_available);
    }
    const auto& a = w.agvs.at(id);
    std::vector<std::string> routes;
    for (const auto& [rid, _] : w.routes) routes.push_back(rid.str());
    return agv_table(a.active_route.has_value() || a.charge_target.has_value(), a.fork_raised, routes);
}

// Affordances a command needs: the arrows whose components it carries, or its button.
inline ExpectedAffordances required_by(const Command& c) {
    ExpectedAffordances need;
    if (const auto* v = std::get_if<cmd::DroneVelocity>(&c)) {
        if (v->velocity.x > 0) need.arrows.insert("+x");
        if (v->velocity.x < 0) need.arrows.insert("-x");
        if (v->velocity.y > 0) need.arrows.insert("+y");
        if (v->velocity.y < 0) need.arrows.insert("-y");
        if (v->velocity.z > 0) need.arrows.insert("+z");
        if (v->velocity.z < 0) need.arrows.insert("-z");
        if (v->yaw_rate > 0) need.arrows.insert("yaw_ccw");
        if (v->yaw_rate < 0) need.arrows.insert("yaw_cw");
    } else if (const auto* a = std::get_if<cmd::AgvVelocity>(&c)) {
        if (a->forward_speed > 0) need.arrows.insert("forward");
        if (a->forward_speed < 0) need.arrows.insert("backward");
        if (a->yaw_rate > 0) need.arrows.insert("yaw_ccw");
        if (a->yaw_rate < 0) need.arrows.insert("yaw_cw");
    } else if (std::holds_alternative<cmd::Grasp>(c)) {
        need.buttons = {"Grasp"};
    } else if (std::holds_alternative<cmd::Release>(c)) {
        need.buttons = {"Release"};
    } else if (std::holds_alternative<cmd::RotateQuarter>(c)) {
        need.buttons = {"Rotate90"};
    } else if (std::holds_alternative<cmd::Align>(c)) {
        need.buttons = {"Align"};
    } else if (const auto* r = std::get_if<cmd::AssignRoute>(&c)) {
        need.buttons = {"Route:" + r->route.str()};
    } else if (const auto* f = std::get_if<cmd::SetForks>(&c)) {
        need.buttons = {f->raised ? "LiftForks" : "LowerForks"};
    } else if (std::holds_alternative<cmd::GoToCharge>(c)) {
        need.buttons = {"GoToCharge"};
    }
    return need;
}

// True when every affordance the command needs is live. A stop command (all
// zero) needs an arrow set that is present at all.
inline bool licensed(const Command& c, const ExpectedAffordances& live) {
    const auto need = required_by(c);
    for (const auto& a : need.arrows) {
        if (!live.arrows.contains(a)) return false;
    }
    for (const auto& b : need.buttons) {
        if (std::find(live.buttons.begin(), live.buttons.end(), b) == live.buttons.end()) return false;
    }
    const bool is_motion = std::holds_alternative<cmd::DroneVelocity>(c) || std::holds_alternative<cmd::AgvVelocity>(c);
    if (is_motion && live.arrows.empty()) return false;
    return true;
}

}  // namespace replica::oracle
