#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "replica/gateway/agent.hpp"
#include "replica/gateway/engine.hpp"
#include "replica/orchestrator/plan.hpp"
#include "replica/scene.hpp"
#include "replica/stats/sus.hpp"
#include "replica/stats/timings.hpp"

namespace replica::gateway {

struct TracedMessage {
    std::uint64_t tick = 0;  // engine tick count when the message was handled
    Message message;
    friend bool operator==(const TracedMessage&, const TracedMessage&) = default;
};

struct ArchivedSession {
    int session = 0;
    orchestrator::Modality modality = orchestrator::Modality::MrReplica;
    std::vector<std::string> log;  // formatted log lines
    friend bool operator==(const ArchivedSession&, const ArchivedSession&) = default;
};

/// Everything needed to re-run a subject's two sessions and check the logs.
struct SessionArchive {
    orchestrator::SessionPlan plan;
    Scene scene;
    EngineOptions options;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::vector<TracedMessage> trace;
    std::uint64_t end_tick = 0;
    std::vector<ArchivedSession> sessions;
    std::vector<stats::Questionnaire> questionnaires;
};

/// Run configuration file: {"world": {...WorldConfig keys}, "notify_after": s,
/// "timeout": s, "snapshot_rate": Hz}. Unknown keys throw InvalidConfig.
void apply_run_config(const nlohmann::json& j, Scene& scene, EngineOptions& options);

/// FNV-1a 64 over the canonical scene and engine settings, hex encoded.
std::string config_hash(const Scene& scene, const EngineOptions& options);

/// Runs both sessions of the plan with the scripted agent and no client.
/// Throws ScriptStalled when a session exceeds the agent's step bound.
SessionArchive run_headless(const Scene& scene, const orchestrator::SessionPlan& plan, const ScriptedAgent& agent,
                            std::uint64_t seed, const EngineOptions& options = {});

struct ReplayResult {
    std::string verdict;  // "identical"
    std::vector<stats::SessionTimings> timings;
};

/// Re-simulates the inbound trace and compares every log line.
/// Throws ReplayDivergence on the first difference.
ReplayResult replay(const SessionArchive& archive);

std::vector<stats::LogEvent> session_log(const ArchivedSession& s);

nlohmann::json to_json(const SessionArchive& a);
SessionArchive archive_from_json(const nlohmann::json& j);
std::string serialize(const SessionArchive& a);
void save_archive(const std::filesystem::path& path, const SessionArchive& a);
SessionArchive load_archive(const std::filesystem::path& path);

/// subject_session_modality.ndjson, e.g. "s07_1_Joypad.ndjson" (session is 1-based).
std::string log_file_name(int subject, int session, orchestrator::Modality modality);

}  // namespace replica::gateway
