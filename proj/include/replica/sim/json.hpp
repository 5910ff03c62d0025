#pragma once

#include <nlohmann/json.hpp>

#include "replica/sim/world.hpp"

namespace replica {

template <typename Tag>
void to_json(nlohmann::json& j, const Id<Tag>& id) {
    j = id.str();
}

template <typename Tag>
void from_json(const nlohmann::json& j, Id<Tag>& id) {
    id = Id<Tag>(j.get<std::string>());
}

}  // namespace replica

namespace replica::sim {

// Vec3 is written as [x, y, z]; planar inputs [x, y] read with z = 0.
void to_json(nlohmann::json& j, const Vec3& v);
void from_json(const nlohmann::json& j, Vec3& v);
void to_json(nlohmann::json& j, const Pose& p);
void from_json(const nlohmann::json& j, Pose& p);

std::string_view to_string(ZoneKind k) noexcept;
ZoneKind parse_zone_kind(std::string_view s);

void to_json(nlohmann::json& j, const WorldConfig& c);
/// Overlays the keys present in j onto c; unknown keys throw InvalidConfig.
void apply_config(WorldConfig& c, const nlohmann::json& j);

void to_json(nlohmann::json& j, const DroneBody& d);
void from_json(const nlohmann::json& j, DroneBody& d);
void to_json(nlohmann::json& j, const AgvBody& a);
void from_json(const nlohmann::json& j, AgvBody& a);
void to_json(nlohmann::json& j, const BoxItem& b);
void from_json(const nlohmann::json& j, BoxItem& b);
void to_json(nlohmann::json& j, const Zone& z);
void from_json(const nlohmann::json& j, Zone& z);
void to_json(nlohmann::json& j, const Route& r);
void from_json(const nlohmann::json& j, Route& r);

/// Full dynamic state (config excluded): what snapshots and archives carry.
nlohmann::json bodies_json(const WorldState& w);

}  // namespace replica::sim
