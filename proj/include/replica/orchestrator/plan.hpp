#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace replica::orchestrator {

enum class Modality { MrReplica, Joypad };
enum class TaskKind { AgvRoute, DroneLift };

std::string_view to_string(Modality m) noexcept;
std::string_view to_string(TaskKind k) noexcept;
Modality parse_modality(std::string_view s);  // accepts "MR" and "Joypad" too
TaskKind parse_task_kind(std::string_view s);

inline constexpr int kConditionSequences = 4;

/// Counterbalanced assignment for one subject: the order of the two
/// modalities and, per session, the order of the two secondary tasks.
struct SessionPlan {
    int subject_id = 0;
    int sequence = 0;  // condition sequence index in [0, 4)
    std::array<Modality, 2> modality_order{};
    std::array<std::array<TaskKind, 2>, 2> task_order{};
    std::uint64_t seed = 0;

    friend bool operator==(const SessionPlan&, const SessionPlan&) = default;
};

/// Sequence s: bit 0 picks the modality order, bit 1 the task order of the
/// first session; the second session runs the tasks in reverse. Over the four
/// sequences every modality meets each task order twice.
SessionPlan condition_sequence(int sequence);

/// Latin-rectangle plan: subjects are taken in blocks of four and each block
/// receives a seeded permutation of the four sequences, so usage counts
/// differ by at most one for any subject count. Deterministic in seed.
std::vector<SessionPlan> latin_plan(int subjects, std::uint64_t seed);

nlohmann::json to_json(const std::vector<SessionPlan>& plan);
std::vector<SessionPlan> plans_from_json(const nlohmann::json& j);
void write_plan(const std::filesystem::path& path, const std::vector<SessionPlan>& plan);
std::vector<SessionPlan> read_plan(const std::filesystem::path& path);

nlohmann::json plan_to_json(const SessionPlan& p);
SessionPlan plan_from_json(const nlohmann::json& j);

}  // namespace replica::orchestrator
