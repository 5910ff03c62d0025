#include "replica/sim/json.hpp"

#include <array>
#include <string>

#include "replica/error.hpp"

namespace replica::sim {

namespace {

template <typename T>
void get_opt(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key) && !j[key].is_null()) out = j[key].get<T>();
}

template <typename T>
void get_opt(const nlohmann::json& j, const char* key, std::optional<T>& out) {
    if (j.contains(key) && !j[key].is_null()) {
        out = j[key].get<T>();
    } else {
        out.reset();
    }
}

template <typename T>
nlohmann::json opt_json(const std::optional<T>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json();
}

constexpr std::array<std::pair<ZoneKind, std::string_view>, 5> kZoneKinds{{
    {ZoneKind::TakeoffPad, "takeoff_pad"},
    {ZoneKind::LandingPad, "landing_pad"},
    {ZoneKind::RouteEntry, "route_entry"},
    {ZoneKind::WorkTable, "work_table"},
    {ZoneKind::Charging, "charging"},
}};

}  // namespace

void to_json(nlohmann::json& j, const Vec3& v) { j = nlohmann::json::array({v.x, v.y, v.z}); }

void from_json(const nlohmann::json& j, Vec3& v) {
    if (!j.is_array() || j.size() < 2 || j.size() > 3) throw Error(ErrorCode::InvalidScene, "a vector is [x, y] or [x, y, z]");
    v.x = j[0].get<double>();
    v.y = j[1].get<double>();
    v.z = j.size() == 3 ? j[2].get<double>() : 0.0;
}

void to_json(nlohmann::json& j, const Pose& p) { j = {{"position", p.position}, {"yaw", p.yaw}}; }

void from_json(const nlohmann::json& j, Pose& p) {
    p.position = j.at("position").get<Vec3>();
    p.yaw = wrap_angle(j.value("yaw", 0.0));
}

std::string_view to_string(ZoneKind k) noexcept {
    for (const auto& [kind, name] : kZoneKinds) {
        if (kind == k) return name;
    }
    return "work_table";
}

ZoneKind parse_zone_kind(std::string_view s) {
    for (const auto& [kind, name] : kZoneKinds) {
        if (name == s) return kind;
    }
    throw Error(ErrorCode::InvalidScene, "unknown zone kind '" + std::string(s) + "'");
}

void to_json(nlohmann::json& j, const WorldConfig& c) {
    j = {
        {"dt", c.dt},
        {"v_max_drone", c.v_max_drone},
        {"v_max_agv", c.v_max_agv},
        {"omega_max", c.omega_max},
        {"grasp_radius", c.grasp_radius},
        {"arrival_radius", c.arrival_radius},
        {"heading_tolerance", c.heading_tolerance},
        {"waypoint_tolerance", c.waypoint_tolerance},
        {"carry_offset", c.carry_offset},
        {"box_half_height", c.box_half_height},
        {"vision_available", c.vision_available},
        {"grasp_requires_takeoff_pad", c.grasp_requires_takeoff_pad},
        {"autonomous_picking", c.autonomous_picking},
    };
}

void apply_config(WorldConfig& c, const nlohmann::json& j) {
    if (j.is_null()) return;
    if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "world config must be an object");
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "dt") c.dt = value.get<double>();
            else if (key == "v_max_drone") c.v_max_drone = value.get<double>();
            else if (key == "v_max_agv") c.v_max_agv = value.get<double>();
            else if (key == "omega_max") c.omega_max = value.get<double>();
            else if (key == "grasp_radius") c.grasp_radius = value.get<double>();
            else if (key == "arrival_radius") c.arrival_radius = value.get<double>();
            else if (key == "heading_tolerance") c.heading_tolerance = value.get<double>();
            else if (key == "waypoint_tolerance") c.waypoint_tolerance = value.get<double>();
            else if (key == "carry_offset") c.carry_offset = value.get<double>();
            else if (key == "box_half_height") c.box_half_height = value.get<double>();
            else if (key == "vision_available") c.vision_available = value.get<bool>();
            else if (key == "grasp_requires_takeoff_pad") c.grasp_requires_takeoff_pad = value.get<bool>();
            else if (key == "autonomous_picking") c.autonomous_picking = value.get<bool>();
            else throw Error(ErrorCode::InvalidConfig, "unknown world config key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("bad world config value: ") + e.what());
    }
}

void to_json(nlohmann::json& j, const DroneBody& d) {
    j = {
        {"id", d.id},
        {"position", d.pose.position},
        {"yaw", d.pose.yaw},
        {"velocity", d.commanded_velocity},
        {"yaw_rate", d.commanded_yaw_rate},
        {"carried", opt_json(d.carried)},
        {"autonomous_flight", d.autonomous_flight},
        {"autopilot_target", opt_json(d.autopilot_target)},
        {"target_yaw", opt_json(d.target_yaw)},
    };
}

void from_json(const nlohmann::json& j, DroneBody& d) {
    d.id = j.at("id").get<RobotId>();
    d.pose.position = j.at("position").get<Vec3>();
    d.pose.yaw = wrap_angle(j.value("yaw", 0.0));
    get_opt(j, "velocity", d.commanded_velocity);
    get_opt(j, "yaw_rate", d.commanded_yaw_rate);
    get_opt(j, "carried", d.carried);
    get_opt(j, "autonomous_flight", d.autonomous_flight);
    get_opt(j, "autopilot_target", d.autopilot_target);
    get_opt(j, "target_yaw", d.target_yaw);
}

void to_json(nlohmann::json& j, const AgvBody& a) {
    j = {
        {"id", a.id},
        {"position", a.pose.position},
        {"yaw", a.pose.yaw},
        {"forward_speed", a.forward_speed},
        {"yaw_rate", a.yaw_rate},
        {"route", opt_json(a.active_route)},
        {"route_progress", a.route_progress},
        {"fork_raised", a.fork_raised},
        {"charge_target", opt_json(a.charge_target)},
        {"last_assigned_route", opt_json(a.last_assigned_route)},
    };
}

void from_json(const nlohmann::json& j, AgvBody& a) {
    a.id = j.at("id").get<RobotId>();
    a.pose.position = j.at("position").get<Vec3>();
    a.pose.yaw = wrap_angle(j.value("yaw", 0.0));
    get_opt(j, "forward_speed", a.forward_speed);
    get_opt(j, "yaw_rate", a.yaw_rate);
    get_opt(j, "route", a.active_route);
    get_opt(j, "route_progress", a.route_progress);
    get_opt(j, "fork_raised", a.fork_raised);
    get_opt(j, "charge_target", a.charge_target);
    get_opt(j, "last_assigned_route", a.last_assigned_route);
}

void to_json(nlohmann::json& j, const BoxItem& b) {
    j = {
        {"id", b.id},
        {"position", b.pose.position},
        {"yaw", b.pose.yaw},
        {"carried_by", opt_json(b.carried_by)},
    };
    if (b.carried_by) {
        j["attach_offset"] = b.attach_offset;
        j["attach_yaw"] = b.attach_yaw;
    }
}

void from_json(const nlohmann::json& j, BoxItem& b) {
    b.id = j.at("id").get<BoxId>();
    b.pose.position = j.at("position").get<Vec3>();
    b.pose.yaw = wrap_angle(j.value("yaw", 0.0));
    get_opt(j, "carried_by", b.carried_by);
    get_opt(j, "attach_offset", b.attach_offset);
    get_opt(j, "attach_yaw", b.attach_yaw);
}

void to_json(nlohmann::json& j, const Zone& z) {
    j = {{"id", z.id}, {"kind", to_string(z.kind)}, {"center", z.center}, {"radius", z.radius}, {"pad_yaw", z.pad_yaw}};
}

void from_json(const nlohmann::json& j, Zone& z) {
    z.id = j.at("id").get<ZoneId>();
    z.kind = parse_zone_kind(j.at("kind").get<std::string>());
    z.center = j.at("center").get<Vec3>();
    z.radius = j.at("radius").get<double>();
    z.pad_yaw = wrap_angle(j.value("pad_yaw", 0.0));
}

void to_json(nlohmann::json& j, const Route& r) { j = {{"id", r.id}, {"waypoints", r.waypoints}}; }

void from_json(const nlohmann::json& j, Route& r) {
    r.id = j.at("id").get<RouteId>();
    r.waypoints = j.at("waypoints").get<std::vector<Vec3>>();
}

nlohmann::json bodies_json(const WorldState& w) {
    nlohmann::json drones = nlohmann::json::array();
    for (const auto& [_, d] : w.drones) drones.push_back(d);
    nlohmann::json agvs = nlohmann::json::array();
    for (const auto& [_, a] : w.agvs) agvs.push_back(a);
    nlohmann::json boxes = nlohmann::json::array();
    for (const auto& [_, b] : w.boxes) boxes.push_back(b);
    return {{"sim_time", w.sim_time}, {"drones", drones}, {"agvs", agvs}, {"boxes", boxes}};
}

}  // namespace replica::sim
