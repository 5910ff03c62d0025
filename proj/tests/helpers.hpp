#pragma once

#include <string>

#include "replica/sim/world.hpp"

namespace replica::test {

inline sim::DroneBody& add_drone(sim::WorldState& w, const std::string& id, sim::Vec3 p, double yaw = 0.0) {
    auto& d = w.drones[RobotId(id)];
    d.id = RobotId(id);
    d.pose = {p, yaw};
    return d;
}

inline sim::AgvBody& add_agv(sim::WorldState& w, const std::string& id, sim::Vec3 p, double yaw = 0.0) {
    auto& a = w.agvs[RobotId(id)];
    a.id = RobotId(id);
    a.pose = {p, yaw};
    return a;
}

inline sim::BoxItem& add_box(sim::WorldState& w, const std::string& id, sim::Vec3 p, double yaw = 0.0) {
    auto& b = w.boxes[BoxId(id)];
    b.id = BoxId(id);
    b.pose = {p, yaw};
    return b;
}

inline sim::Zone& add_zone(sim::WorldState& w, const std::string& id, sim::ZoneKind kind, sim::Vec3 c, double radius,
                           double pad_yaw = 0.0) {
    auto& z = w.zones[ZoneId(id)];
    z = {ZoneId(id), kind, c, radius, pad_yaw};
    return z;
}

inline sim::Route& add_route(sim::WorldState& w, const std::string& id, std::vector<sim::Vec3> pts) {
    auto& r = w.routes[RouteId(id)];
    r = {RouteId(id), std::move(pts)};
    return r;
}

}  // namespace replica::test
