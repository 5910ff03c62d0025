#include "replica/gateway/headless.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "replica/sim/json.hpp"

namespace replica::gateway {

namespace {

[[noreturn]] void diverged(const std::string& what) { throw Error(ErrorCode::ReplayDivergence, what); }

nlohmann::json options_json(const EngineOptions& o) {
    return {{"notify_after", o.settings.notify_after},
            {"timeout", o.settings.timeout},
            {"snapshot_rate", o.snapshot_rate},
            {"camera_range", o.camera_range}};
}

EngineOptions options_from_json(const nlohmann::json& j) {
    EngineOptions o;
    o.settings.notify_after = j.at("notify_after").get<double>();
    o.settings.timeout = j.at("timeout").get<double>();
    o.snapshot_rate = j.at("snapshot_rate").get<int>();
    o.camera_range = j.at("camera_range").get<double>();
    return o;
}

std::vector<std::string> format_log(const std::vector<stats::LogEvent>& log) {
    std::vector<std::string> out;
    out.reserve(log.size());
    for (const auto& e : log) out.push_back(stats::format_log_line(e));
    return out;
}

}  // namespace

void apply_run_config(const nlohmann::json& j, Scene& scene, EngineOptions& options) {
    if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "world") sim::apply_config(scene.world.config, value);
            else if (key == "notify_after") options.settings.notify_after = value.get<double>();
            else if (key == "timeout") options.settings.timeout = value.get<double>();
            else if (key == "snapshot_rate") options.snapshot_rate = value.get<int>();
            else if (key == "camera_range") options.camera_range = value.get<double>();
            else throw Error(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("bad config value: ") + e.what());
    }
    if (!(options.settings.notify_after >= 0) || !(options.settings.timeout > 0) || options.snapshot_rate <= 0) {
        throw Error(ErrorCode::InvalidConfig, "config values out of range");
    }
    sim::validate(scene.world);
}

std::string config_hash(const Scene& scene, const EngineOptions& options) {
    const std::string text = scene_to_json(scene).dump() + options_json(options).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

SessionArchive run_headless(const Scene& scene, const orchestrator::SessionPlan& plan, const ScriptedAgent& agent,
                            std::uint64_t seed, const EngineOptions& options) {
    SessionArchive archive;
    archive.plan = plan;
    archive.scene = scene;
    archive.options = options;
    archive.seed = seed;
    archive.config_hash = config_hash(scene, options);

    Engine engine(scene, {plan}, options);
    AgentDriver driver(agent, seed);
    std::uint64_t next_id = 1;
    auto send = [&](WireMessage body) {
        Message m{next_id++, std::move(body)};
        archive.trace.push_back({engine.tick_count(), m});
        engine.handle(m);
    };

    const auto bound = static_cast<std::uint64_t>(std::ceil(agent.step_bound / scene.world.config.dt));
    for (int which = 0; which < 2; ++which) {
        send(msg::SessionControl{msg::SessionCommand::Start, plan.subject_id, which});
        for (std::uint64_t steps = 0; engine.session_running(); ++steps) {
            if (steps >= bound) {
                throw Error(ErrorCode::ScriptStalled, "session " + std::to_string(which) + " of subject " +
                                                          std::to_string(plan.subject_id) + " exceeded " +
                                                          std::to_string(bound) + " steps");
            }
            if (auto m = driver.next(engine)) send(std::move(*m));
            engine.advance();
        }
    }
    send(msg::QuestionnaireSubmit{driver.questionnaire(plan.subject_id)});

    archive.end_tick = engine.tick_count();
    for (auto& f : engine.take_finished()) archive.sessions.push_back({f.session, f.modality, format_log(f.log)});
    archive.questionnaires = engine.questionnaires();
    return archive;
}

std::vector<stats::LogEvent> session_log(const ArchivedSession& s) {
    std::vector<stats::LogEvent> out;
    out.reserve(s.log.size());
    for (const auto& line : s.log) out.push_back(stats::parse_log_line(line));
    return out;
}

ReplayResult replay(const SessionArchive& archive) {
    if (config_hash(archive.scene, archive.options) != archive.config_hash) {
        diverged("config hash does not match the archived scene and settings");
    }
    Engine engine(archive.scene, {archive.plan}, archive.options);
    for (const auto& t : archive.trace) {
        if (t.tick < engine.tick_count()) diverged("trace ticks are not ordered");
        while (engine.tick_count() < t.tick) engine.advance();
        engine.handle(t.message);
    }
    while (engine.tick_count() < archive.end_tick) engine.advance();

    const auto finished = engine.take_finished();
    if (finished.size() != archive.sessions.size()) {
        diverged("replay finished " + std::to_string(finished.size()) + " sessions, archive has " +
                 std::to_string(archive.sessions.size()));
    }
    ReplayResult result{"identical", {}};
    for (std::size_t i = 0; i < finished.size(); ++i) {
        const auto lines = format_log(finished[i].log);
        const auto& expected = archive.sessions[i].log;
        for (std::size_t n = 0; n < std::max(lines.size(), expected.size()); ++n) {
            const std::string got = n < lines.size() ? lines[n] : "<end of log>";
            const std::string want = n < expected.size() ? expected[n] : "<end of log>";
            if (got != want) {
                diverged("session " + std::to_string(i) + " line " + std::to_string(n + 1) + ": replay produced " + got +
                         ", archive has " + want);
            }
        }
        result.timings.push_back(stats::derive_timings(finished[i].log));
    }
    if (engine.questionnaires() != archive.questionnaires) diverged("questionnaire answers differ");
    return result;
}

nlohmann::json to_json(const SessionArchive& a) {
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& t : a.trace) trace.push_back({{"tick", t.tick}, {"message", to_json(t.message)}});
    nlohmann::json sessions = nlohmann::json::array();
    for (const auto& s : a.sessions) {
        sessions.push_back({{"session", s.session}, {"modality", orchestrator::to_string(s.modality)}, {"log", s.log}});
    }
    nlohmann::json questionnaires = nlohmann::json::array();
    for (const auto& q : a.questionnaires) questionnaires.push_back(stats::to_json(q));
    return {{"format", 1},
            {"seed", a.seed},
            {"config_hash", a.config_hash},
            {"plan", orchestrator::plan_to_json(a.plan)},
            {"scene", scene_to_json(a.scene)},
            {"options", options_json(a.options)},
            {"trace", trace},
            {"end_tick", a.end_tick},
            {"sessions", sessions},
            {"questionnaires", questionnaires}};
}

SessionArchive archive_from_json(const nlohmann::json& j) {
    try {
        if (j.at("format").get<int>() != 1) throw Error(ErrorCode::InvalidConfig, "unsupported archive format");
        SessionArchive a;
        a.seed = j.at("seed").get<std::uint64_t>();
        a.config_hash = j.at("config_hash").get<std::string>();
        a.plan = orchestrator::plan_from_json(j.at("plan"));
        a.scene = scene_from_json(j.at("scene"));
        a.options = options_from_json(j.at("options"));
        for (const auto& t : j.at("trace")) a.trace.push_back({t.at("tick").get<std::uint64_t>(), from_json(t.at("message"))});
        a.end_tick = j.at("end_tick").get<std::uint64_t>();
        for (const auto& s : j.at("sessions")) {
            a.sessions.push_back({s.at("session").get<int>(), orchestrator::parse_modality(s.at("modality").get<std::string>()),
                                  s.at("log").get<std::vector<std::string>>()});
        }
        for (const auto& q : j.at("questionnaires")) a.questionnaires.push_back(stats::questionnaire_from_json(q));
        return a;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("malformed archive: ") + e.what());
    }
}

std::string serialize(const SessionArchive& a) { return to_json(a).dump(1) + "\n"; }

void save_archive(const std::filesystem::path& path, const SessionArchive& a) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write " + path.string());
    out << serialize(a);
}

SessionArchive load_archive(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidConfig, "cannot read " + path.string());
    try {
        return archive_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
    }
}

std::string log_file_name(int subject, int session, orchestrator::Modality modality) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "s%02d_%d_%s.ndjson", subject, session + 1, std::string(orchestrator::to_string(modality)).c_str());
    return buf;
}

}  // namespace replica::gateway
