#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "replica/sim/geometry.hpp"

namespace replica {

/// String-backed identifier, distinct per Tag so ids of different entities
/// never mix. Ordering is lexicographic, which the proximity tie-break uses.
template <typename Tag>
class Id {
public:
    Id() = default;
    explicit Id(std::string value) : value_(std::move(value)) {}

    const std::string& str() const noexcept { return value_; }
    bool empty() const noexcept { return value_.empty(); }

    friend auto operator<=>(const Id&, const Id&) = default;
    friend bool operator==(const Id&, const Id&) = default;

private:
    std::string value_;
};

using RobotId = Id<struct RobotTag>;
using BoxId = Id<struct BoxTag>;
using ZoneId = Id<struct ZoneTag>;
using RouteId = Id<struct RouteTag>;

}  // namespace replica

namespace replica::sim {

struct WorldConfig {
    double dt = 0.02;                             // integration substep, s
    double v_max_drone = 2.0;                     // m/s
    double v_max_agv = 1.0;                       // m/s
    double omega_max = std::numbers::pi / 2.0;    // rad/s
    double grasp_radius = 0.3;                    // m
    double arrival_radius = 0.5;                  // m
    double heading_tolerance = 0.05;              // rad, route autopilot
    double waypoint_tolerance = 1e-3;             // m, route autopilot
    double carry_offset = 0.3;                    // box hangs this far below the drone, m
    double box_half_height = 0.15;                // m
    bool vision_available = true;                 // enables the Align button
    bool grasp_requires_takeoff_pad = true;
    bool autonomous_picking = false;              // grasp starts an autonomous flight to the landing pad

    friend bool operator==(const WorldConfig&, const WorldConfig&) = default;
};

struct DroneBody {
    RobotId id;
    Pose pose;
    Vec3 commanded_velocity;
    double commanded_yaw_rate = 0.0;
    std::optional<BoxId> carried;
    bool autonomous_flight = false;
    std::optional<Vec3> autopilot_target;
    std::optional<double> target_yaw;  // pending rate-limited slew

    friend bool operator==(const DroneBody&, const DroneBody&) = default;
};

struct AgvBody {
    RobotId id;
    Pose pose;  // position.z == 0
    double forward_speed = 0.0;
    double yaw_rate = 0.0;
    std::optional<RouteId> active_route;
    std::size_t route_progress = 0;  // index of the waypoint being approached
    bool fork_raised = false;
    std::optional<Vec3> charge_target;  // set while driving to the charging zone
    std::optional<RouteId> last_assigned_route;

    /// True while any autopilot (route or charge trip) owns the vehicle.
    bool autopilot_engaged() const noexcept { return active_route.has_value() || charge_target.has_value(); }

    friend bool operator==(const AgvBody&, const AgvBody&) = default;
};

struct BoxItem {
    BoxId id;
    Pose pose;
    std::optional<RobotId> carried_by;
    // Rigid attachment relative to the carrier, valid while carried.
    Vec3 attach_offset;
    double attach_yaw = 0.0;

    friend bool operator==(const BoxItem&, const BoxItem&) = default;
};

enum class ZoneKind { TakeoffPad, LandingPad, RouteEntry, WorkTable, Charging };

struct Zone {
    ZoneId id;
    ZoneKind kind = ZoneKind::WorkTable;
    Vec3 center;
    double radius = 1.0;
    double pad_yaw = 0.0;

    friend bool operator==(const Zone&, const Zone&) = default;
};

struct Route {
    RouteId id;
    std::vector<Vec3> waypoints;  // z = 0, at least two, consecutive distinct

    friend bool operator==(const Route&, const Route&) = default;
};

struct WorldState {
    double sim_time = 0.0;
    WorldConfig config;
    std::map<RobotId, DroneBody> drones;
    std::map<RobotId, AgvBody> agvs;
    std::map<BoxId, BoxItem> boxes;
    std::map<ZoneId, Zone> zones;
    std::map<RouteId, Route> routes;

    bool is_drone(const RobotId& id) const { return drones.contains(id); }
    bool is_agv(const RobotId& id) const { return agvs.contains(id); }

    // Throw UnknownRobot / UnknownRoute.
    const DroneBody& drone(const RobotId& id) const;
    DroneBody& drone(const RobotId& id);
    const AgvBody& agv(const RobotId& id) const;
    AgvBody& agv(const RobotId& id);
    const Route& route(const RouteId& id) const;
    Vec3 robot_position(const RobotId& id) const;

    friend bool operator==(const WorldState&, const WorldState&) = default;
};

/// Checks every structural invariant (finite poses, wrapped yaws, resolvable
/// references, route shape). Throws Error(InvalidScene) on the first violation.
void validate(const WorldState& world);

}  // namespace replica::sim
