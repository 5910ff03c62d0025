#include "replica/orchestrator/plan.hpp"

#include <fstream>
#include <numeric>
#include <random>
#include <string>

#include "replica/error.hpp"

namespace replica::orchestrator {

std::string_view to_string(Modality m) noexcept { return m == Modality::MrReplica ? "MrReplica" : "Joypad"; }
std::string_view to_string(TaskKind k) noexcept { return k == TaskKind::AgvRoute ? "AgvRoute" : "DroneLift"; }

Modality parse_modality(std::string_view s) {
    if (s == "MrReplica" || s == "MR" || s == "mr") return Modality::MrReplica;
    if (s == "Joypad" || s == "joypad") return Modality::Joypad;
    throw Error(ErrorCode::InvalidConfig, "unknown modality '" + std::string(s) + "'");
}

TaskKind parse_task_kind(std::string_view s) {
    if (s == "AgvRoute") return TaskKind::AgvRoute;
    if (s == "DroneLift") return TaskKind::DroneLift;
    throw Error(ErrorCode::InvalidConfig, "unknown task kind '" + std::string(s) + "'");
}

SessionPlan condition_sequence(int sequence) {
    if (sequence < 0 || sequence >= kConditionSequences) {
        throw Error(ErrorCode::InvalidConfig, "condition sequence out of range");
    }
    SessionPlan p;
    p.sequence = sequence;
    p.modality_order = (sequence & 1) ? std::array{Modality::Joypad, Modality::MrReplica}
                                      : std::array{Modality::MrReplica, Modality::Joypad};
    const auto first = (sequence & 2) ? std::array{TaskKind::DroneLift, TaskKind::AgvRoute}
                                      : std::array{TaskKind::AgvRoute, TaskKind::DroneLift};
    p.task_order = {first, std::array{first[1], first[0]}};
    return p;
}

std::vector<SessionPlan> latin_plan(int subjects, std::uint64_t seed) {
    if (subjects < 1) throw Error(ErrorCode::InvalidConfig, "a plan needs at least one subject");
    // mt19937_64 output is fully specified; the shuffle below avoids the
    // implementation-defined std::uniform_int_distribution.
    std::mt19937_64 rng(seed);
    std::vector<SessionPlan> plan;
    plan.reserve(static_cast<std::size_t>(subjects));
    std::array<int, kConditionSequences> block{};
    for (int i = 0; i < subjects; ++i) {
        if (i % kConditionSequences == 0) {
            std::iota(block.begin(), block.end(), 0);
            for (int k = kConditionSequences - 1; k > 0; --k) {
                const auto j = static_cast<int>(rng() % static_cast<std::uint64_t>(k + 1));
                std::swap(block[k], block[j]);
            }
        }
        SessionPlan p = condition_sequence(block[i % kConditionSequences]);
        p.subject_id = i + 1;
        p.seed = rng();
        plan.push_back(p);
    }
    return plan;
}

nlohmann::json plan_to_json(const SessionPlan& p) {
    return {
        {"subject", p.subject_id},
        {"sequence", p.sequence},
        {"modality_order", nlohmann::json::array({to_string(p.modality_order[0]), to_string(p.modality_order[1])})},
        {"task_order",
         nlohmann::json::array({nlohmann::json::array({to_string(p.task_order[0][0]), to_string(p.task_order[0][1])}),
                                nlohmann::json::array({to_string(p.task_order[1][0]), to_string(p.task_order[1][1])})})},
        {"seed", p.seed},
    };
}

SessionPlan plan_from_json(const nlohmann::json& j) {
    try {
        SessionPlan p;
        p.subject_id = j.at("subject").get<int>();
        p.sequence = j.at("sequence").get<int>();
        for (int s = 0; s < 2; ++s) {
            p.modality_order[s] = parse_modality(j.at("modality_order").at(s).get<std::string>());
            for (int t = 0; t < 2; ++t) {
                p.task_order[s][t] = parse_task_kind(j.at("task_order").at(s).at(t).get<std::string>());
            }
        }
        p.seed = j.at("seed").get<std::uint64_t>();
        if (p.modality_order[0] == p.modality_order[1]) throw Error(ErrorCode::InvalidConfig, "modality repeated in plan");
        for (const auto& order : p.task_order) {
            if (order[0] == order[1]) throw Error(ErrorCode::InvalidConfig, "task kind repeated in a session");
        }
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("malformed plan entry: ") + e.what());
    }
}

nlohmann::json to_json(const std::vector<SessionPlan>& plan) {
    nlohmann::json subjects = nlohmann::json::array();
    for (const auto& p : plan) subjects.push_back(plan_to_json(p));
    return {{"subjects", subjects}};
}

std::vector<SessionPlan> plans_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("subjects") || !j["subjects"].is_array()) {
        throw Error(ErrorCode::InvalidConfig, "plan file needs a 'subjects' array");
    }
    std::vector<SessionPlan> out;
    for (const auto& row : j["subjects"]) out.push_back(plan_from_json(row));
    return out;
}

void write_plan(const std::filesystem::path& path, const std::vector<SessionPlan>& plan) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write " + path.string());
    out << to_json(plan).dump(2) << '\n';
}

std::vector<SessionPlan> read_plan(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidConfig, "cannot read " + path.string());
    try {
        return plans_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
    }
}

}  // namespace replica::orchestrator
