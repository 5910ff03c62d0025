#include "replica/scene.hpp"

#include <cstdlib>
#include <fstream>

#include "replica/error.hpp"
#include "replica/sim/json.hpp"
#include "replica/sim/ops.hpp"

namespace replica {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidScene, what); }

template <typename Map, typename T>
void insert_unique(Map& map, T value, const char* what) {
    auto id = value.id;
    if (!map.emplace(id, std::move(value)).second) invalid(std::string("duplicate ") + what + " id '" + id.str() + "'");
}

}  // namespace

Scene scene_from_json(const nlohmann::json& j) {
    if (!j.is_object()) invalid("scene must be a JSON object");
    Scene scene;
    try {
        scene.name = j.value("name", std::string("scene"));
        auto& w = scene.world;
        if (j.contains("config")) {
            try {
                sim::apply_config(w.config, j["config"]);
            } catch (const Error& e) {
                invalid(e.what());
            }
        }
        for (const auto& z : j.value("zones", nlohmann::json::array())) insert_unique(w.zones, z.get<sim::Zone>(), "zone");
        for (const auto& r : j.value("routes", nlohmann::json::array())) insert_unique(w.routes, r.get<sim::Route>(), "route");
        for (const auto& d : j.value("drones", nlohmann::json::array())) insert_unique(w.drones, d.get<sim::DroneBody>(), "drone");
        for (const auto& a : j.value("agvs", nlohmann::json::array())) insert_unique(w.agvs, a.get<sim::AgvBody>(), "AGV");
        for (const auto& b : j.value("boxes", nlohmann::json::array())) insert_unique(w.boxes, b.get<sim::BoxItem>(), "box");

        if (j.contains("tasks")) {
            const auto& t = j["tasks"];
            if (t.contains("agv_route")) {
                const auto& a = t["agv_route"];
                scene.tasks.agv_route = orchestrator::AgvRouteTask{a.at("agv").get<RobotId>(), a.at("route").get<RouteId>(),
                                                                   a.at("entry_zone").get<ZoneId>()};
            }
            if (t.contains("drone_lift")) {
                const auto& d = t["drone_lift"];
                scene.tasks.drone_lift =
                    orchestrator::DroneLiftTask{d.at("drone").get<RobotId>(), d.at("box").get<BoxId>(),
                                                d.at("takeoff_zone").get<ZoneId>(), d.at("landing_zone").get<ZoneId>()};
            }
        }
    } catch (const nlohmann::json::exception& e) {
        invalid(std::string("malformed scene: ") + e.what());
    }
    // Boxes listed as carried must be attached under their drone.
    for (auto& [id, box] : scene.world.boxes) {
        if (!box.carried_by) continue;
        auto d = scene.world.drones.find(*box.carried_by);
        if (d == scene.world.drones.end()) invalid("box '" + id.str() + "' carried by unknown drone");
        if (d->second.carried && *d->second.carried != id) invalid("drone carries two boxes");
        d->second.carried = id;
        box.attach_offset = sim::Vec3{0.0, 0.0, -scene.world.config.carry_offset};
        box.attach_yaw = sim::wrap_angle(box.pose.yaw - d->second.pose.yaw);
        box.pose.position = d->second.pose.position + box.attach_offset;
    }
    sim::validate(scene.world);
    return scene;
}

nlohmann::json scene_to_json(const Scene& scene) {
    const auto& w = scene.world;
    nlohmann::json j;
    j["name"] = scene.name;
    j["config"] = w.config;
    auto list = [](const auto& map) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& [_, v] : map) out.push_back(v);
        return out;
    };
    j["zones"] = list(w.zones);
    j["routes"] = list(w.routes);
    j["drones"] = list(w.drones);
    j["agvs"] = list(w.agvs);
    j["boxes"] = list(w.boxes);
    nlohmann::json tasks = nlohmann::json::object();
    if (scene.tasks.agv_route) {
        const auto& a = *scene.tasks.agv_route;
        tasks["agv_route"] = {{"agv", a.agv}, {"route", a.route}, {"entry_zone", a.entry_zone}};
    }
    if (scene.tasks.drone_lift) {
        const auto& d = *scene.tasks.drone_lift;
        tasks["drone_lift"] = {{"drone", d.drone}, {"box", d.box}, {"takeoff_zone", d.takeoff_zone}, {"landing_zone", d.landing_zone}};
    }
    j["tasks"] = tasks;
    return j;
}

Scene load_scene(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) invalid("cannot read scene " + path.string());
    try {
        return scene_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        invalid(path.string() + ": " + e.what());
    }
}

std::filesystem::path default_scene_path() {
    if (const char* dir = std::getenv("REPLICA_SCENE_DIR")) return std::filesystem::path(dir) / "warehouse.json";
    return std::filesystem::path(REPLICA_DATA_DIR) / "warehouse.json";
}

Scene default_scene() { return load_scene(default_scene_path()); }

}  // namespace replica
