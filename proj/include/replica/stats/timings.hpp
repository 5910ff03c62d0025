#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "replica/orchestrator/plan.hpp"
#include "replica/time.hpp"

namespace replica::stats {

enum class LogKind {
    SessionStart,
    TaskNotified,
    InteractionActivated,
    TaskCompleted,
    Command,
    StateChange,
    QuestionnaireAnswer,
    SessionEnd,
};

std::string_view to_string(LogKind k) noexcept;
LogKind parse_log_kind(std::string_view s);

/// One line of a session log. Serialized as a flat JSON object with "t"
/// (decimal seconds), "kind" and the payload fields.
struct LogEvent {
    Micros t = 0;
    LogKind kind = LogKind::Command;
    nlohmann::json payload = nlohmann::json::object();

    friend bool operator==(const LogEvent&, const LogEvent&) = default;
};

std::string format_log_line(const LogEvent& e);
LogEvent parse_log_line(std::string_view line);  // throws MalformedLog
std::vector<LogEvent> parse_log(std::string_view text);
std::vector<LogEvent> read_log(const std::filesystem::path& path);
void write_log(const std::filesystem::path& path, std::span<const LogEvent> events);

struct SessionTimings {
    Micros total = 0;
    std::array<Micros, 2> robot{};
    std::array<Micros, 2> reaction{};
    std::array<std::optional<orchestrator::TaskKind>, 2> task_kinds;
    std::optional<orchestrator::Modality> modality;
    std::optional<int> subject;

    double total_s() const noexcept { return to_seconds(total); }
    double robot_s(std::size_t k) const noexcept { return to_seconds(robot[k]); }
    double reaction_s(std::size_t k) const noexcept { return to_seconds(reaction[k]); }

    friend bool operator==(const SessionTimings&, const SessionTimings&) = default;
};

/// reaction[k] = activated(k) - notified(k); robot[k] = completed(k) - activated(k);
/// total = completed(1) - notified(0). Throws MalformedLog when the log lacks
/// exactly one notification, activation and completion per task or when they
/// are out of order.
SessionTimings derive_timings(std::span<const LogEvent> log);

nlohmann::json to_json(const SessionTimings& t);

}  // namespace replica::stats
