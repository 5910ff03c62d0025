#include "replica/stats/timings.hpp"

#include <array>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

#include "replica/error.hpp"

namespace replica::stats {

namespace {

constexpr std::array<std::pair<LogKind, std::string_view>, 8> kKindNames{{
    {LogKind::SessionStart, "SessionStart"},
    {LogKind::TaskNotified, "TaskNotified"},
    {LogKind::InteractionActivated, "InteractionActivated"},
    {LogKind::TaskCompleted, "TaskCompleted"},
    {LogKind::Command, "Command"},
    {LogKind::StateChange, "StateChange"},
    {LogKind::QuestionnaireAnswer, "QuestionnaireAnswer"},
    {LogKind::SessionEnd, "SessionEnd"},
}};

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::MalformedLog, what); }

}  // namespace

std::string_view to_string(LogKind k) noexcept {
    for (const auto& [kind, name] : kKindNames) {
        if (kind == k) return name;
    }
    return "Command";
}

LogKind parse_log_kind(std::string_view s) {
    for (const auto& [kind, name] : kKindNames) {
        if (name == s) return kind;
    }
    malformed("unknown log event kind '" + std::string(s) + "'");
}

std::string format_log_line(const LogEvent& e) {
    nlohmann::json j = e.payload.is_object() ? e.payload : nlohmann::json::object();
    j["t"] = to_seconds(e.t);
    j["kind"] = to_string(e.kind);
    return j.dump();
}

LogEvent parse_log_line(std::string_view line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        malformed(std::string("unparsable log line: ") + e.what());
    }
    if (!j.is_object() || !j.contains("t") || !j["t"].is_number() || !j.contains("kind") || !j["kind"].is_string()) {
        malformed("log line needs numeric 't' and string 'kind'");
    }
    LogEvent e;
    e.t = to_micros(j["t"].get<double>());
    e.kind = parse_log_kind(j["kind"].get<std::string>());
    j.erase("t");
    j.erase("kind");
    e.payload = std::move(j);
    return e;
}

std::vector<LogEvent> parse_log(std::string_view text) {
    std::vector<LogEvent> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) out.push_back(parse_log_line(line));
        pos = end + 1;
    }
    return out;
}

std::vector<LogEvent> read_log(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) malformed("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_log(ss.str());
}

void write_log(const std::filesystem::path& path, std::span<const LogEvent> events) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write " + path.string());
    for (const auto& e : events) out << format_log_line(e) << '\n';
}

SessionTimings derive_timings(std::span<const LogEvent> log) {
    std::array<std::optional<Micros>, 2> notified, activated, completed;
    SessionTimings out;

    auto task_index = [](const LogEvent& e) -> std::size_t {
        if (!e.payload.contains("task") || !e.payload["task"].is_number_integer()) {
            malformed(std::string(to_string(e.kind)) + " without task index");
        }
        const int k = e.payload["task"].get<int>();
        if (k != 0 && k != 1) malformed("task index must be 0 or 1");
        return static_cast<std::size_t>(k);
    };
    auto record = [&](std::array<std::optional<Micros>, 2>& slot, const LogEvent& e) {
        const auto k = task_index(e);
        if (slot[k]) malformed(std::string("duplicate ") + std::string(to_string(e.kind)) + " for task " + std::to_string(k));
        slot[k] = e.t;
        return k;
    };

    Micros last = std::numeric_limits<Micros>::min();
    for (const auto& e : log) {
        if (e.t < last) malformed("timestamps decrease");
        last = e.t;
        switch (e.kind) {
            case LogKind::SessionStart:
                if (e.payload.contains("modality") && e.payload["modality"].is_string()) {
                    try {
                        out.modality = orchestrator::parse_modality(e.payload["modality"].get<std::string>());
                    } catch (const Error&) {
                        malformed("bad modality in SessionStart");
                    }
                }
                if (e.payload.contains("subject") && e.payload["subject"].is_number_integer()) {
                    out.subject = e.payload["subject"].get<int>();
                }
                break;
            case LogKind::TaskNotified: {
                const auto k = record(notified, e);
                if (e.payload.contains("task_kind") && e.payload["task_kind"].is_string()) {
                    try {
                        out.task_kinds[k] = orchestrator::parse_task_kind(e.payload["task_kind"].get<std::string>());
                    } catch (const Error&) {
                        malformed("bad task_kind");
                    }
                }
                break;
            }
            case LogKind::InteractionActivated:
                record(activated, e);
                break;
            case LogKind::TaskCompleted:
                record(completed, e);
                break;
            default:
                break;
        }
    }

    for (std::size_t k = 0; k < 2; ++k) {
        if (!notified[k]) malformed("task " + std::to_string(k) + " was never notified");
        if (!activated[k]) malformed("task " + std::to_string(k) + " was never activated");
        if (!completed[k]) malformed("task " + std::to_string(k) + " was never completed");
        if (*activated[k] < *notified[k] || *completed[k] < *activated[k]) {
            malformed("task " + std::to_string(k) + " events out of order");
        }
        out.reaction[k] = *activated[k] - *notified[k];
        out.robot[k] = *completed[k] - *activated[k];
    }
    if (*notified[1] < *completed[0]) malformed("second task notified before the first completed");
    out.total = *completed[1] - *notified[0];
    return out;
}

nlohmann::json to_json(const SessionTimings& t) {
    nlohmann::json kinds = nlohmann::json::array();
    for (const auto& k : t.task_kinds) kinds.push_back(k ? nlohmann::json(orchestrator::to_string(*k)) : nlohmann::json());
    nlohmann::json j{
        {"total_time", t.total_s()},
        {"robot_time", {t.robot_s(0), t.robot_s(1)}},
        {"reaction_time", {t.reaction_s(0), t.reaction_s(1)}},
        {"task_kinds", kinds},
    };
    if (t.modality) j["modality"] = orchestrator::to_string(*t.modality);
    if (t.subject) j["subject"] = *t.subject;
    return j;
}

}  // namespace replica::stats
