#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "replica/orchestrator/plan.hpp"

namespace replica::stats {

inline constexpr int kSusItems = 10;
inline constexpr int kComparativeQuestions = 3;

/// Ten 5-point Likert answers (1 = strongly disagree, 5 = strongly agree).
struct SusResponse {
    std::array<int, kSusItems> items{};
    friend bool operator==(const SusResponse&, const SusResponse&) = default;
};

/// Standard scoring: odd items contribute (score - 1), even items (5 - score),
/// and the sum is scaled by 2.5 onto [0, 100]. Throws OutOfRangeItem.
double sus_score(const SusResponse& r);

/// One subject's full questionnaire: a SUS block per modality plus the three
/// comparative preference questions (23 statements) and free-text comments.
struct Questionnaire {
    int subject = 0;
    std::map<orchestrator::Modality, SusResponse> sus;
    std::array<orchestrator::Modality, kComparativeQuestions> preferred{};
    std::array<std::string, kComparativeQuestions> comments;

    friend bool operator==(const Questionnaire&, const Questionnaire&) = default;
};

// Schema: items are keyed q1..q10 and c1..c3; anything else is rejected with
// MalformedQuestionnaire, out-of-range answers with OutOfRangeItem.
SusResponse sus_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SusResponse& r);
std::array<orchestrator::Modality, kComparativeQuestions> comparative_from_json(const nlohmann::json& j);
Questionnaire questionnaire_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Questionnaire& q);
std::vector<Questionnaire> read_questionnaires(const std::filesystem::path& path);

}  // namespace replica::stats
