#pragma once

// Synthetic study data with exactly controlled sample means and SDs.

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "replica/stats/report.hpp"

namespace replica::test {

// n values whose two-pass sample mean and SD equal (mean, sd) up to rounding.
inline std::vector<double> exact_sample(std::size_t n, double mean, double sd, std::mt19937_64& rng) {
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<double> x(n);
    for (auto& v : x) v = z(rng);
    double m = 0;
    for (double v : x) m += v;
    m /= static_cast<double>(n);
    double ss = 0;
    for (double v : x) ss += (v - m) * (v - m);
    const double s = std::sqrt(ss / static_cast<double>(n - 1));
    for (auto& v : x) v = mean + sd * (v - m) / s;
    return x;
}

struct CohortTargets {
    double mr_mean, mr_sd, joy_mean, joy_sd;
};

// Published summary values used as fixtures.
inline constexpr CohortTargets kTotal{208.7, 58.5, 245.2, 73.7};
inline constexpr CohortTargets kRobotDrone{113.3, 36.5, 78.0, 36.9};
inline constexpr CohortTargets kRobotAgv{42.5, 19.6, 49.7, 24.0};

// Likert answers with the requested sum whose SD rounds to target at 2 decimals.
inline std::vector<int> likert_with(int n, int sum, double target_sd) {
    for (int a = 0; a <= n; ++a) {
        for (int b = 0; a + b <= n; ++b) {
            for (int c = 0; a + b + c <= n; ++c) {
                for (int d = 0; a + b + c + d <= n; ++d) {
                    const int e = n - a - b - c - d;
                    if (a + 2 * b + 3 * c + 4 * d + 5 * e != sum) continue;
                    const double m = static_cast<double>(sum) / n;
                    const double ss = a * (1 - m) * (1 - m) + b * (2 - m) * (2 - m) + c * (3 - m) * (3 - m) +
                                      d * (4 - m) * (4 - m) + e * (5 - m) * (5 - m);
                    const double sd = std::sqrt(ss / (n - 1));
                    if (std::round(sd * 100) == std::round(target_sd * 100)) {
                        std::vector<int> v;
                        for (int i = 0; i < a; ++i) v.push_back(1);
                        for (int i = 0; i < b; ++i) v.push_back(2);
                        for (int i = 0; i < c; ++i) v.push_back(3);
                        for (int i = 0; i < d; ++i) v.push_back(4);
                        for (int i = 0; i < e; ++i) v.push_back(5);
                        return v;
                    }
                }
            }
        }
    }
    return {};
}

struct Cohort {
    std::vector<stats::SessionRecord> sessions;
    std::vector<stats::Questionnaire> questionnaires;
};

// 24 subjects. Drone task first in every session so robot[0] is the drone time.
inline Cohort synthetic_cohort(std::uint64_t seed) {
    using orchestrator::Modality;
    using orchestrator::TaskKind;
    constexpr std::size_t n = 24;
    std::mt19937_64 rng(seed);
    const auto tot_mr = exact_sample(n, kTotal.mr_mean, kTotal.mr_sd, rng);
    const auto tot_joy = exact_sample(n, kTotal.joy_mean, kTotal.joy_sd, rng);
    const auto dr_mr = exact_sample(n, kRobotDrone.mr_mean, kRobotDrone.mr_sd, rng);
    const auto dr_joy = exact_sample(n, kRobotDrone.joy_mean, kRobotDrone.joy_sd, rng);
    const auto agv_mr = exact_sample(n, kRobotAgv.mr_mean, kRobotAgv.mr_sd, rng);
    const auto agv_joy = exact_sample(n, kRobotAgv.joy_mean, kRobotAgv.joy_sd, rng);
    const auto re_mr = exact_sample(n, 2.5, 0.6, rng);
    const auto re_joy = exact_sample(n, 5.5, 1.4, rng);

    // Item 4 (need for technical support): 2.50 +- 1.22 vs 3.29 +- 1.33.
    const auto q4_mr = likert_with(n, 60, 1.22);
    const auto q4_joy = likert_with(n, 79, 1.33);
    // Preferences: 15, 11 and 7 of 24 pick the MR interface.
    const std::array<int, 3> prefer_mr{15, 11, 7};

    Cohort c;
    for (std::size_t i = 0; i < n; ++i) {
        const int subject = static_cast<int>(i) + 1;
        auto timings = [&](double total, double drone, double agv, double reaction) {
            stats::SessionTimings t;
            t.total = to_micros(total);
            t.robot = {to_micros(drone), to_micros(agv)};
            t.reaction = {to_micros(reaction), to_micros(reaction)};
            t.task_kinds = {TaskKind::DroneLift, TaskKind::AgvRoute};
            return t;
        };
        c.sessions.push_back({subject, Modality::MrReplica, timings(tot_mr[i], dr_mr[i], agv_mr[i], re_mr[i])});
        c.sessions.push_back({subject, Modality::Joypad, timings(tot_joy[i], dr_joy[i], agv_joy[i], re_joy[i])});

        stats::Questionnaire q;
        q.subject = subject;
        stats::SusResponse mr, joy;
        for (std::size_t k = 0; k < stats::kSusItems; ++k) {
            mr.items[k] = 1 + static_cast<int>((i + 2 * k) % 5);
            joy.items[k] = 1 + static_cast<int>((3 * i + k) % 5);
        }
        mr.items[3] = q4_mr.at(i);
        joy.items[3] = q4_joy.at((i * 7) % n);
        q.sus[Modality::MrReplica] = mr;
        q.sus[Modality::Joypad] = joy;
        for (std::size_t k = 0; k < 3; ++k) {
            q.preferred[k] = static_cast<int>(i) < prefer_mr[k] ? Modality::MrReplica : Modality::Joypad;
        }
        c.questionnaires.push_back(q);
    }
    return c;
}

}  // namespace replica::test
