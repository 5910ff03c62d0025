#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "replica/orchestrator/session.hpp"
#include "replica/sim/world.hpp"

namespace replica {

/// A declarative scene: world layout, world config and the secondary-task
/// bindings used by the experiment protocol.
struct Scene {
    std::string name;
    sim::WorldState world;
    orchestrator::TaskBindings tasks;

    friend bool operator==(const Scene&, const Scene&) = default;
};

/// Throws Error(InvalidScene) on schema violations or broken invariants.
Scene scene_from_json(const nlohmann::json& j);
nlohmann::json scene_to_json(const Scene& scene);
Scene load_scene(const std::filesystem::path& path);

/// Bundled warehouse layout: two AGVs on the left, a spare route on the
/// right, two work tables, the drone's takeoff pad and the landing pad.
std::filesystem::path default_scene_path();
Scene default_scene();

}  // namespace replica
