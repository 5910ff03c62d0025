#include "replica/sim/world.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "replica/error.hpp"

namespace replica::sim {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidScene, what); }

void check_pose(const Pose& p, const std::string& who) {
    if (!p.position.finite() || !std::isfinite(p.yaw)) invalid(who + ": non-finite pose");
    if (p.yaw <= -std::numbers::pi || p.yaw > std::numbers::pi) invalid(who + ": yaw outside (-pi, pi]");
}

}  // namespace

const DroneBody& WorldState::drone(const RobotId& id) const {
    auto it = drones.find(id);
    if (it == drones.end()) throw Error(ErrorCode::UnknownRobot, "unknown drone '" + id.str() + "'");
    return it->second;
}

DroneBody& WorldState::drone(const RobotId& id) {
    return const_cast<DroneBody&>(std::as_const(*this).drone(id));
}

const AgvBody& WorldState::agv(const RobotId& id) const {
    auto it = agvs.find(id);
    if (it == agvs.end()) throw Error(ErrorCode::UnknownRobot, "unknown AGV '" + id.str() + "'");
    return it->second;
}

AgvBody& WorldState::agv(const RobotId& id) {
    return const_cast<AgvBody&>(std::as_const(*this).agv(id));
}

const Route& WorldState::route(const RouteId& id) const {
    auto it = routes.find(id);
    if (it == routes.end()) throw Error(ErrorCode::UnknownRoute, "unknown route '" + id.str() + "'");
    return it->second;
}

Vec3 WorldState::robot_position(const RobotId& id) const {
    if (auto d = drones.find(id); d != drones.end()) return d->second.pose.position;
    if (auto a = agvs.find(id); a != agvs.end()) return a->second.pose.position;
    throw Error(ErrorCode::UnknownRobot, "unknown robot '" + id.str() + "'");
}

void validate(const WorldState& world) {
    const auto& c = world.config;
    if (!(c.dt > 0) || !(c.v_max_drone > 0) || !(c.v_max_agv > 0) || !(c.omega_max > 0) ||
        !(c.grasp_radius > 0) || !(c.arrival_radius > 0) || !(c.heading_tolerance > 0) ||
        !(c.waypoint_tolerance > 0) || !(c.carry_offset >= 0) || !(c.box_half_height >= 0)) {
        invalid("world config values must be positive");
    }
    if (!std::isfinite(world.sim_time) || world.sim_time < 0) invalid("sim_time must be finite and >= 0");

    for (const auto& [id, d] : world.drones) {
        if (id != d.id) invalid("drone key mismatch: " + id.str());
        if (world.agvs.contains(id)) invalid("robot id used twice: " + id.str());
        check_pose(d.pose, "drone " + id.str());
        if (d.carried) {
            auto b = world.boxes.find(*d.carried);
            if (b == world.boxes.end() || b->second.carried_by != id) {
                invalid("drone " + id.str() + " carries an unlinked box");
            }
        }
    }
    for (const auto& [id, a] : world.agvs) {
        if (id != a.id) invalid("AGV key mismatch: " + id.str());
        check_pose(a.pose, "AGV " + id.str());
        if (a.pose.position.z != 0.0) invalid("AGV " + id.str() + " must sit on the floor");
        if (a.active_route && !world.routes.contains(*a.active_route)) invalid("AGV " + id.str() + " follows unknown route");
    }
    for (const auto& [id, b] : world.boxes) {
        if (id != b.id) invalid("box key mismatch: " + id.str());
        check_pose(b.pose, "box " + id.str());
        if (b.carried_by) {
            auto d = world.drones.find(*b.carried_by);
            if (d == world.drones.end() || d->second.carried != id) invalid("box " + id.str() + " has an unlinked carrier");
        }
    }
    for (const auto& [id, z] : world.zones) {
        if (id != z.id) invalid("zone key mismatch: " + id.str());
        if (!(z.radius > 0) || !z.center.finite()) invalid("zone " + id.str() + " needs a finite center and radius > 0");
    }
    for (const auto& [id, r] : world.routes) {
        if (id != r.id) invalid("route key mismatch: " + id.str());
        if (r.waypoints.size() < 2) invalid("route " + id.str() + " needs at least two waypoints");
        for (std::size_t i = 0; i < r.waypoints.size(); ++i) {
            if (!r.waypoints[i].finite() || r.waypoints[i].z != 0.0) invalid("route " + id.str() + " waypoints must be finite with z = 0");
            if (i > 0 && r.waypoints[i] == r.waypoints[i - 1]) invalid("route " + id.str() + " repeats a waypoint");
        }
    }
}

}  // namespace replica::sim
