#include "replica/stats/sus.hpp"

#include <fstream>
#include <set>

#include "replica/error.hpp"

namespace replica::stats {

namespace {

using orchestrator::Modality;

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::MalformedQuestionnaire, what); }

void check_keys(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) malformed(where + " must be an object");
    for (const auto& [key, _] : j.items()) {
        if (!allowed.contains(key)) malformed(where + ": unexpected key '" + key + "'");
    }
}

std::set<std::string> numbered_keys(char prefix, int count) {
    std::set<std::string> keys;
    for (int i = 1; i <= count; ++i) keys.insert(prefix + std::to_string(i));
    return keys;
}

}  // namespace

double sus_score(const SusResponse& r) {
    int sum = 0;
    for (int i = 0; i < kSusItems; ++i) {
        const int v = r.items[static_cast<std::size_t>(i)];
        if (v < 1 || v > 5) throw Error(ErrorCode::OutOfRangeItem, "SUS item q" + std::to_string(i + 1) + " outside 1..5");
        sum += (i % 2 == 0) ? v - 1 : 5 - v;  // items are 1-based: index 0 is odd item q1
    }
    return 2.5 * sum;
}

SusResponse sus_from_json(const nlohmann::json& j) {
    const auto keys = numbered_keys('q', kSusItems);
    check_keys(j, keys, "SUS block");
    SusResponse r;
    for (int i = 0; i < kSusItems; ++i) {
        const auto key = "q" + std::to_string(i + 1);
        if (!j.contains(key) || !j[key].is_number_integer()) malformed("SUS block needs integer " + key);
        const int v = j[key].get<int>();
        if (v < 1 || v > 5) throw Error(ErrorCode::OutOfRangeItem, key + " outside 1..5");
        r.items[static_cast<std::size_t>(i)] = v;
    }
    return r;
}

nlohmann::json to_json(const SusResponse& r) {
    nlohmann::json j = nlohmann::json::object();
    for (int i = 0; i < kSusItems; ++i) j["q" + std::to_string(i + 1)] = r.items[static_cast<std::size_t>(i)];
    return j;
}

std::array<Modality, kComparativeQuestions> comparative_from_json(const nlohmann::json& j) {
    check_keys(j, numbered_keys('c', kComparativeQuestions), "comparative block");
    std::array<Modality, kComparativeQuestions> out{};
    for (int i = 0; i < kComparativeQuestions; ++i) {
        const auto key = "c" + std::to_string(i + 1);
        if (!j.contains(key) || !j[key].is_string()) malformed("comparative block needs " + key);
        try {
            out[static_cast<std::size_t>(i)] = orchestrator::parse_modality(j[key].get<std::string>());
        } catch (const Error&) {
            malformed(key + " must be MR or Joypad");
        }
    }
    return out;
}

Questionnaire questionnaire_from_json(const nlohmann::json& j) {
    check_keys(j, {"subject", "sus", "comparative", "comments"}, "questionnaire");
    Questionnaire q;
    if (!j.contains("subject") || !j["subject"].is_number_integer()) malformed("questionnaire needs an integer subject");
    q.subject = j["subject"].get<int>();
    if (!j.contains("sus")) malformed("questionnaire needs a sus object");
    check_keys(j["sus"], {"MrReplica", "Joypad"}, "sus");
    for (auto m : {Modality::MrReplica, Modality::Joypad}) {
        const std::string key(orchestrator::to_string(m));
        if (!j["sus"].contains(key)) malformed("sus block missing for " + key);
        q.sus[m] = sus_from_json(j["sus"][key]);
    }
    if (!j.contains("comparative")) malformed("questionnaire needs comparative answers");
    q.preferred = comparative_from_json(j["comparative"]);
    if (j.contains("comments")) {
        check_keys(j["comments"], numbered_keys('c', kComparativeQuestions), "comments");
        for (int i = 0; i < kComparativeQuestions; ++i) {
            const auto key = "c" + std::to_string(i + 1);
            if (j["comments"].contains(key)) {
                if (!j["comments"][key].is_string()) malformed("comment " + key + " must be text");
                q.comments[static_cast<std::size_t>(i)] = j["comments"][key].get<std::string>();
            }
        }
    }
    return q;
}

nlohmann::json to_json(const Questionnaire& q) {
    nlohmann::json sus = nlohmann::json::object();
    for (const auto& [m, r] : q.sus) sus[std::string(orchestrator::to_string(m))] = to_json(r);
    nlohmann::json comparative = nlohmann::json::object();
    nlohmann::json comments = nlohmann::json::object();
    for (int i = 0; i < kComparativeQuestions; ++i) {
        const auto key = "c" + std::to_string(i + 1);
        comparative[key] = orchestrator::to_string(q.preferred[static_cast<std::size_t>(i)]);
        comments[key] = q.comments[static_cast<std::size_t>(i)];
    }
    return {{"subject", q.subject}, {"sus", sus}, {"comparative", comparative}, {"comments", comments}};
}

std::vector<Questionnaire> read_questionnaires(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) malformed("cannot read " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        malformed(path.string() + ": " + e.what());
    }
    std::vector<Questionnaire> out;
    if (j.is_array()) {
        for (const auto& row : j) out.push_back(questionnaire_from_json(row));
    } else {
        out.push_back(questionnaire_from_json(j));
    }
    return out;
}

}  // namespace replica::stats
