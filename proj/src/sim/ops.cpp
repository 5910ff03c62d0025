#include "replica/sim/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "replica/error.hpp"

namespace replica::sim {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

double clamp_abs(double v, double limit) { return std::clamp(v, -limit, limit); }

void require_finite(double v) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidMagnitude, "command values must be finite");
}

std::optional<ZoneId> nearest_zone(const WorldState& world, const Vec3& at, ZoneKind kind, bool require_inside) {
    std::optional<ZoneId> best;
    double best_d = std::numeric_limits<double>::infinity();
    // std::map iterates ids in order, so a strict < keeps the smallest id on ties.
    for (const auto& [id, zone] : world.zones) {
        if (zone.kind != kind) continue;
        const double d = planar_distance(zone.center, at);
        if (require_inside && !(d < zone.radius)) continue;
        if (d < best_d) {
            best_d = d;
            best = id;
        }
    }
    return best;
}

void update_drone_autopilot(const WorldConfig& cfg, DroneBody& d, double h) {
    if (d.autonomous_flight && d.autopilot_target) {
        const Vec3 delta = *d.autopilot_target - d.pose.position;
        const double dist = delta.norm();
        if (dist <= cfg.v_max_drone * h) {
            // Final leg: land exactly on the target this substep.
            d.commanded_velocity = dist > 0 ? delta * (1.0 / h) : Vec3{};
        } else {
            d.commanded_velocity = delta * (cfg.v_max_drone / dist);
        }
    }
    if (d.target_yaw) {
        const double diff = wrap_angle(*d.target_yaw - d.pose.yaw);
        d.commanded_yaw_rate = std::abs(diff) <= cfg.omega_max * h ? diff / h : std::copysign(cfg.omega_max, diff);
    }
}

std::optional<Vec3> agv_goal(const WorldState& world, AgvBody& a) {
    const auto tol = world.config.waypoint_tolerance;
    if (a.active_route) {
        const auto& wps = world.route(*a.active_route).waypoints;
        while (a.route_progress < wps.size() && planar_distance(a.pose.position, wps[a.route_progress]) <= tol) {
            ++a.route_progress;
        }
        if (a.route_progress >= wps.size()) {
            a.active_route.reset();
            a.route_progress = 0;
            a.forward_speed = 0.0;
            a.yaw_rate = 0.0;
            return std::nullopt;
        }
        return wps[a.route_progress];
    }
    if (a.charge_target) {
        if (planar_distance(a.pose.position, *a.charge_target) <= tol) {
            a.charge_target.reset();
            a.forward_speed = 0.0;
            a.yaw_rate = 0.0;
            return std::nullopt;
        }
        return a.charge_target;
    }
    return std::nullopt;
}

// Turn in place until the heading error drops below tolerance, then drive
// while trimming the residual error.
void update_agv_autopilot(const WorldState& world, AgvBody& a, double h) {
    const auto goal = agv_goal(world, a);
    if (!goal) return;
    const auto& cfg = world.config;
    const double dx = goal->x - a.pose.position.x;
    const double dy = goal->y - a.pose.position.y;
    const double dist = std::hypot(dx, dy);
    const double err = wrap_angle(std::atan2(dy, dx) - a.pose.yaw);
    a.yaw_rate = clamp_abs(err / h, cfg.omega_max);
    a.forward_speed = std::abs(err) > cfg.heading_tolerance ? 0.0 : std::min(cfg.v_max_agv, dist / h);
}

}  // namespace

Vec3 grasp_point(const WorldState& world, const DroneBody& drone) {
    return drone.pose.position - Vec3{0.0, 0.0, world.config.carry_offset};
}

void substep(WorldState& world, double h) {
    const auto& cfg = world.config;
    for (auto& [id, d] : world.drones) {
        update_drone_autopilot(cfg, d, h);
        d.pose.position += d.commanded_velocity * h;
        d.pose.yaw = wrap_angle(d.pose.yaw + d.commanded_yaw_rate * h);

        if (d.autonomous_flight && d.autopilot_target &&
            distance(d.pose.position, *d.autopilot_target) <= 1e-9) {
            d.pose.position = *d.autopilot_target;
            d.autonomous_flight = false;
            d.autopilot_target.reset();
            d.commanded_velocity = {};
        }
        if (d.target_yaw && std::abs(wrap_angle(*d.target_yaw - d.pose.yaw)) <= 1e-12) {
            d.pose.yaw = *d.target_yaw;
            d.target_yaw.reset();
            d.commanded_yaw_rate = 0.0;
        }
        if (d.carried) {
            auto& box = world.boxes.at(*d.carried);
            box.pose.position = d.pose.position + box.attach_offset;
            box.pose.yaw = wrap_angle(d.pose.yaw + box.attach_yaw);
        }
    }
    for (auto& [id, a] : world.agvs) {
        update_agv_autopilot(world, a, h);
        const double yaw = a.pose.yaw;
        a.pose.position.x += a.forward_speed * std::cos(yaw) * h;
        a.pose.position.y += a.forward_speed * std::sin(yaw) * h;
        a.pose.yaw = wrap_angle(yaw + a.yaw_rate * h);
        if (a.autopilot_engaged()) agv_goal(world, a);  // retire reached waypoints eagerly
    }
    world.sim_time += h;
}

void step(WorldState& world, double dt) {
    if (!(dt > 0) || !std::isfinite(dt)) throw Error(ErrorCode::InvalidConfig, "step requires dt > 0");
    const auto n = static_cast<long>(std::max(1.0, std::ceil(dt / world.config.dt - 1e-9)));
    const double h = dt / static_cast<double>(n);
    for (long i = 0; i < n; ++i) substep(world, h);
}

void command_drone(WorldState& world, const RobotId& id, Vec3 velocity, double yaw_rate) {
    auto& d = world.drone(id);
    require_finite(velocity.x);
    require_finite(velocity.y);
    require_finite(velocity.z);
    require_finite(yaw_rate);
    if (d.autonomous_flight) throw Error(ErrorCode::AutonomousFlightActive, "drone '" + id.str() + "' is in autonomous flight");
    const double speed = velocity.norm();
    const double vmax = world.config.v_max_drone;
    d.commanded_velocity = speed > vmax ? velocity * (vmax / speed) : velocity;
    if (yaw_rate != 0.0 || !d.target_yaw) {
        d.target_yaw.reset();
        d.commanded_yaw_rate = clamp_abs(yaw_rate, world.config.omega_max);
    }
}

void command_agv(WorldState& world, const RobotId& id, double forward_speed, double yaw_rate) {
    auto& a = world.agv(id);
    require_finite(forward_speed);
    require_finite(yaw_rate);
    if (a.autopilot_engaged()) throw Error(ErrorCode::RouteActive, "AGV '" + id.str() + "' is following a route");
    a.forward_speed = clamp_abs(forward_speed, world.config.v_max_agv);
    a.yaw_rate = clamp_abs(yaw_rate, world.config.omega_max);
}

std::optional<BoxId> box_in_grasp_range(const WorldState& world, const RobotId& drone_id) {
    const auto& d = world.drone(drone_id);
    const Vec3 gp = grasp_point(world, d);
    std::optional<BoxId> best;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& [id, box] : world.boxes) {
        if (box.carried_by) continue;
        const double dist = distance(gp, box.pose.position);
        if (dist <= world.config.grasp_radius && dist < best_d) {
            best_d = dist;
            best = id;
        }
    }
    return best;
}

void grasp(WorldState& world, const RobotId& drone_id) {
    auto& d = world.drone(drone_id);
    if (d.carried) throw Error(ErrorCode::AlreadyCarrying, "drone '" + drone_id.str() + "' already carries a box");
    if (world.config.grasp_requires_takeoff_pad && !proximity(world, drone_id, ZoneKind::TakeoffPad)) {
        throw Error(ErrorCode::NoBoxInRange, "drone '" + drone_id.str() + "' is not over a takeoff pad");
    }
    const auto box_id = box_in_grasp_range(world, drone_id);
    if (!box_id) throw Error(ErrorCode::NoBoxInRange, "no free box within grasp radius of '" + drone_id.str() + "'");

    // Resolve everything that can throw before mutating.
    std::optional<Vec3> flight_target;
    if (world.config.autonomous_picking) {
        if (auto pad = nearest_zone(world, d.pose.position, ZoneKind::LandingPad, false)) {
            const auto& c = world.zones.at(*pad).center;
            flight_target = Vec3{c.x, c.y, d.pose.position.z};
        }
    }

    auto& box = world.boxes.at(*box_id);
    box.carried_by = drone_id;
    box.attach_offset = Vec3{0.0, 0.0, -world.config.carry_offset};
    box.attach_yaw = wrap_angle(box.pose.yaw - d.pose.yaw);
    box.pose.position = d.pose.position + box.attach_offset;
    box.pose.yaw = wrap_angle(d.pose.yaw + box.attach_yaw);
    d.carried = box_id;
    if (flight_target) autopilot_fly(world, drone_id, *flight_target);
}

void release(WorldState& world, const RobotId& drone_id) {
    auto& d = world.drone(drone_id);
    if (!d.carried) throw Error(ErrorCode::NotCarrying, "drone '" + drone_id.str() + "' carries nothing");
    auto& box = world.boxes.at(*d.carried);
    box.carried_by.reset();
    box.attach_offset = {};
    box.attach_yaw = 0.0;
    box.pose.position = Vec3{d.pose.position.x, d.pose.position.y, world.config.box_half_height};
    d.carried.reset();
}

void rotate_quarter(WorldState& world, const RobotId& drone_id) {
    auto& d = world.drone(drone_id);
    const double base = d.target_yaw.value_or(d.pose.yaw);
    d.target_yaw = wrap_angle(base + kHalfPi);
}

double aligned_yaw(double current_yaw, double box_yaw_offset, double pad_yaw) {
    const double box_yaw = current_yaw + box_yaw_offset;
    const double residual = std::remainder(box_yaw - pad_yaw, kHalfPi);
    return wrap_angle(current_yaw - residual);
}

void align_to_pad(WorldState& world, const RobotId& drone_id) {
    auto& d = world.drone(drone_id);
    if (!d.carried) throw Error(ErrorCode::NotCarrying, "drone '" + drone_id.str() + "' carries nothing to align");
    if (!world.config.vision_available) throw Error(ErrorCode::VisionUnavailable, "no onboard vision system");
    const auto pad = nearest_zone(world, d.pose.position, ZoneKind::LandingPad, false);
    if (!pad) throw Error(ErrorCode::InvalidScene, "scene has no landing pad");
    const auto& box = world.boxes.at(*d.carried);
    d.target_yaw = aligned_yaw(d.pose.yaw, box.attach_yaw, world.zones.at(*pad).pad_yaw);
}

void assign_route(WorldState& world, const RobotId& agv_id, const RouteId& route_id) {
    auto& a = world.agv(agv_id);
    const auto& route = world.route(route_id);
    if (a.autopilot_engaged()) throw Error(ErrorCode::RouteActive, "AGV '" + agv_id.str() + "' is already on autopilot");
    if (planar_distance(a.pose.position, route.waypoints.front()) > world.config.arrival_radius) {
        throw Error(ErrorCode::NotAtRouteStart, "AGV '" + agv_id.str() + "' is not at the start of route '" + route_id.str() + "'");
    }
    a.active_route = route_id;
    a.route_progress = 0;
    a.last_assigned_route = route_id;
    a.forward_speed = 0.0;
    a.yaw_rate = 0.0;
}

void autopilot_fly(WorldState& world, const RobotId& drone_id, Vec3 target) {
    auto& d = world.drone(drone_id);
    if (!target.finite()) throw Error(ErrorCode::InvalidMagnitude, "autopilot target must be finite");
    if (distance(d.pose.position, target) <= world.config.arrival_radius) {
        d.autonomous_flight = false;
        d.autopilot_target.reset();
        return;
    }
    d.autonomous_flight = true;
    d.autopilot_target = target;
    d.commanded_velocity = {};
}

void set_forks(WorldState& world, const RobotId& agv_id, bool raised) {
    world.agv(agv_id).fork_raised = raised;
}

void go_to_charge(WorldState& world, const RobotId& agv_id) {
    auto& a = world.agv(agv_id);
    const auto zone = nearest_zone(world, a.pose.position, ZoneKind::Charging, false);
    if (!zone) throw Error(ErrorCode::InvalidScene, "scene has no charging zone");
    const auto& c = world.zones.at(*zone).center;
    a.active_route.reset();
    a.route_progress = 0;
    a.charge_target = Vec3{c.x, c.y, 0.0};
    a.forward_speed = 0.0;
    a.yaw_rate = 0.0;
}

std::optional<ZoneId> proximity(const WorldState& world, const RobotId& robot, ZoneKind kind) {
    return nearest_zone(world, world.robot_position(robot), kind, true);
}

}  // namespace replica::sim
