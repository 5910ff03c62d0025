// replica: study service, planner, headless runner and analysis front end.

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

#include <CLI11.hpp>

#include "replica/error.hpp"
#include "replica/gateway/headless.hpp"
#include "replica/gateway/server.hpp"
#include "replica/interaction/fixture.hpp"
#include "replica/orchestrator/plan.hpp"
#include "replica/scene.hpp"
#include "replica/stats/report.hpp"

namespace {

using namespace replica;

std::atomic<bool> g_interrupted{false};

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidConfig, "cannot read " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::InvalidConfig, path + ": " + e.what());
    }
}

struct Common {
    std::string scene;
    std::string config;

    std::pair<Scene, gateway::EngineOptions> load() const {
        Scene s = scene.empty() ? default_scene() : load_scene(scene);
        gateway::EngineOptions o;
        if (!config.empty()) gateway::apply_run_config(read_json(config), s, o);
        return {std::move(s), o};
    }
};

std::vector<orchestrator::SessionPlan> plan_from_flags(const std::string& file, int subjects, std::uint64_t seed) {
    if (!file.empty()) return orchestrator::read_plan(file);
    return orchestrator::latin_plan(subjects, seed);
}

int cmd_plan(int subjects, std::uint64_t seed, const std::string& out) {
    const auto plan = orchestrator::latin_plan(subjects, seed);
    if (out.empty()) {
        std::cout << orchestrator::to_json(plan).dump(2) << '\n';
    } else {
        orchestrator::write_plan(out, plan);
    }
    return 0;
}

int cmd_fixture(const std::string& out) {
    const auto text = interaction::conformance_fixture().dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream f(out);
    if (!f) throw Error(ErrorCode::InvalidConfig, "cannot write " + out);
    f << text;
    return 0;
}

int cmd_headless(const Common& common, const std::vector<orchestrator::SessionPlan>& plans, std::uint64_t seed,
                 const gateway::ScriptedAgent& agent, const std::string& out_dir) {
    auto [scene, options] = common.load();
    std::filesystem::create_directories(out_dir);
    nlohmann::json answers = nlohmann::json::array();
    for (const auto& plan : plans) {
        const auto start = std::chrono::steady_clock::now();
        const auto archive = gateway::run_headless(scene, plan, agent, seed ^ plan.seed, options);
        const auto dir = std::filesystem::path(out_dir);
        char name[32];
        std::snprintf(name, sizeof name, "archive_s%02d.json", plan.subject_id);
        gateway::save_archive(dir / name, archive);
        for (const auto& s : archive.sessions) {
            stats::write_log(dir / gateway::log_file_name(plan.subject_id, s.session, s.modality), gateway::session_log(s));
        }
        for (const auto& q : archive.questionnaires) answers.push_back(stats::to_json(q));
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << "subject " << plan.subject_id << ": " << archive.sessions.size() << " sessions, "
                  << archive.trace.size() << " inbound messages, " << secs << " s\n";
    }
    std::ofstream q(std::filesystem::path(out_dir) / "questionnaires.json");
    q << answers.dump(2) << '\n';
    return 0;
}

int cmd_analyze(const std::vector<std::string>& logs, const std::string& questionnaires, const std::string& out_dir) {
    std::vector<stats::SessionRecord> records;
    for (const auto& path : logs) {
        const auto timings = stats::derive_timings(stats::read_log(path));
        if (!timings.subject || !timings.modality) {
            throw Error(ErrorCode::MalformedLog, path + ": SessionStart lacks subject or modality");
        }
        records.push_back({*timings.subject, *timings.modality, timings});
    }
    std::vector<stats::Questionnaire> answers;
    if (!questionnaires.empty()) answers = stats::read_questionnaires(questionnaires);
    const auto report = stats::summarize_study(records, answers);
    stats::write_report(out_dir, report);
    std::cout << stats::render_text(report);
    return 0;
}

int cmd_replay(const std::vector<std::string>& archives) {
    for (const auto& path : archives) {
        const auto result = gateway::replay(gateway::load_archive(path));
        nlohmann::json timings = nlohmann::json::array();
        for (const auto& t : result.timings) timings.push_back(stats::to_json(t));
        std::cout << nlohmann::json{{"archive", path}, {"verdict", result.verdict}, {"timings", timings}}.dump() << '\n';
    }
    return 0;
}

int cmd_serve(const Common& common, const std::vector<orchestrator::SessionPlan>& plans, gateway::ServerOptions options) {
    auto [scene, engine_options] = common.load();
    gateway::Server server(gateway::Engine(std::move(scene), plans, engine_options), std::move(options));
    server.start();
    std::cerr << "replica: listening on port " << server.port() << '\n';
    std::signal(SIGINT, [](int) { g_interrupted = true; });
    std::signal(SIGTERM, [](int) { g_interrupted = true; });
    while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Virtual-replica teleoperation study service"};
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    app.add_option("--scene", common.scene, "Scene JSON (default: bundled warehouse)");
    app.add_option("--config", common.config, "Run configuration JSON");

    int subjects = 24;
    std::uint64_t seed = 7;
    std::string plan_file;
    std::string out;

    auto* plan = app.add_subcommand("plan", "Emit a counterbalanced study plan");
    plan->add_option("--subjects", subjects, "Number of subjects")->check(CLI::Range(1, 100000));
    plan->add_option("--seed", seed, "Plan seed");
    plan->add_option("-o,--out", out, "Output file (default: stdout)");

    auto* fixture = app.add_subcommand("fixture", "Write the conformance fixture");
    fixture->add_option("-o,--out", out, "Output file (default: stdout)");

    gateway::ScriptedAgent agent;
    std::string out_dir = "headless";
    auto* headless = app.add_subcommand("headless", "Run scripted sessions without a client");
    headless->add_option("--plan", plan_file, "Study plan JSON (default: generated)");
    headless->add_option("--subjects", subjects, "Subjects when generating a plan")->check(CLI::Range(1, 100000));
    headless->add_option("--seed", seed, "Seed for the plan and the agent");
    headless->add_option("--mr-delay", agent.reaction_delay_mr, "Agent reaction delay in the MR modality, s");
    headless->add_option("--joypad-delay", agent.reaction_delay_joypad, "Agent reaction delay with the joypad, s");
    headless->add_option("-o,--out", out_dir, "Output directory");

    std::vector<std::string> logs;
    std::string questionnaires;
    std::string report_dir = "report";
    auto* analyze = app.add_subcommand("analyze", "Derive timings and statistics from session logs");
    analyze->add_option("logs", logs, "Session log files (.ndjson)")->required()->check(CLI::ExistingFile);
    analyze->add_option("-q,--questionnaires", questionnaires, "Questionnaire answers JSON")->check(CLI::ExistingFile);
    analyze->add_option("-o,--out", report_dir, "Report directory");

    std::vector<std::string> archives;
    auto* replay = app.add_subcommand("replay", "Re-simulate archives and verify their logs");
    replay->add_option("archives", archives, "Archive files")->required()->check(CLI::ExistingFile);

    gateway::ServerOptions server_options;
    std::optional<unsigned short> port;
    std::optional<std::string> data_dir;
    auto* serve = app.add_subcommand("serve", "Host the WebSocket service");
    serve->add_option("--plan", plan_file, "Study plan JSON (default: generated)");
    serve->add_option("--subjects", subjects, "Subjects when generating a plan")->check(CLI::Range(1, 100000));
    serve->add_option("--seed", seed, "Plan seed");
    serve->add_option("--address", server_options.address, "Listen address");
    serve->add_option("--port", port, "Listen port (env REPLICA_PORT)");
    serve->add_option("--data-dir", data_dir, "Session log directory (env REPLICA_DATA_DIR)");
    serve->add_option("--speed", server_options.speed, "Simulated seconds per wall second");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (*plan) return cmd_plan(subjects, seed, out);
        if (*fixture) return cmd_fixture(out);
        if (*headless) return cmd_headless(common, plan_from_flags(plan_file, subjects, seed), seed, agent, out_dir);
        if (*analyze) return cmd_analyze(logs, questionnaires, report_dir);
        if (*replay) return cmd_replay(archives);
        if (*serve) {
            server_options = gateway::apply_env(server_options);
            if (port) server_options.port = *port;
            if (data_dir) server_options.data_dir = *data_dir;
            return cmd_serve(common, plan_from_flags(plan_file, subjects, seed), server_options);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
