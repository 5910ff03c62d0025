#pragma once

#include <optional>

#include "replica/sim/world.hpp"

// World transitions. Every operation either completes or throws
// replica::Error with the world left untouched.
namespace replica::sim {

/// Advances the world by dt seconds, split into equal substeps no longer than
/// config.dt. Autopilots update their commands before each substep's explicit
/// Euler integration. Requires dt > 0.
void step(WorldState& world, double dt);

/// Integrates a single substep of length h (no splitting).
void substep(WorldState& world, double h);

/// Manual drone velocity command in world-frame axes translated to the drone.
/// Speed is clamped to v_max_drone, yaw rate to omega_max. A nonzero yaw rate
/// cancels any pending slew.
void command_drone(WorldState& world, const RobotId& id, Vec3 velocity, double yaw_rate);

/// Manual AGV command: signed speed along the heading plus yaw rate.
void command_agv(WorldState& world, const RobotId& id, double forward_speed, double yaw_rate);

void grasp(WorldState& world, const RobotId& drone_id);
void release(WorldState& world, const RobotId& drone_id);

/// Schedules a +90 degree yaw slew relative to the current (or pending) target.
void rotate_quarter(WorldState& world, const RobotId& drone_id);

/// Schedules a slew that brings the carried box square with the nearest
/// landing pad, choosing the quarter-turn equivalent closest to the current yaw.
void align_to_pad(WorldState& world, const RobotId& drone_id);

void assign_route(WorldState& world, const RobotId& agv_id, const RouteId& route_id);

/// Starts autonomous flight towards target. If the drone is already within
/// arrival_radius, nothing moves and autonomous_flight stays false.
void autopilot_fly(WorldState& world, const RobotId& drone_id, Vec3 target);

void set_forks(WorldState& world, const RobotId& agv_id, bool raised);

/// Sends the AGV to the nearest charging zone with the turn-then-drive
/// autopilot, aborting any active route.
void go_to_charge(WorldState& world, const RobotId& agv_id);

/// Nearest zone of the given kind whose center lies strictly within its radius
/// of the robot's planar position. Ties break by id.
std::optional<ZoneId> proximity(const WorldState& world, const RobotId& robot, ZoneKind kind);

/// Free box closest to the drone's grasp point within grasp_radius.
std::optional<BoxId> box_in_grasp_range(const WorldState& world, const RobotId& drone_id);

/// Point below the drone where a carried box hangs.
Vec3 grasp_point(const WorldState& world, const DroneBody& drone);

/// Yaw the drone must settle at so the carried box is square with the pad.
double aligned_yaw(double current_yaw, double box_yaw_offset, double pad_yaw);

}  // namespace replica::sim
