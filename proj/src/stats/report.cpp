#include "replica/stats/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "replica/error.hpp"

namespace replica::stats {

namespace {

using orchestrator::Modality;

struct Paired {
    std::map<int, double> mr;
    std::map<int, double> joypad;
};

MetricSummary summarize_metric(const std::string& name, const std::string& unit, const Paired& values,
                               std::vector<PlotRow>& plot) {
    std::vector<double> a, b;
    for (const auto& [subject, v] : values.mr) {
        a.push_back(v);
        b.push_back(values.joypad.at(subject));
        plot.push_back({name, Modality::MrReplica, subject, v});
    }
    for (const auto& [subject, v] : values.joypad) plot.push_back({name, Modality::Joypad, subject, v});

    MetricSummary m;
    m.name = name;
    m.unit = unit;
    m.mr = mean_sd(a);
    m.joypad = mean_sd(b);
    try {
        m.test = paired_t_test(a, b);
    } catch (const Error& e) {
        m.test_error = std::string(to_string(e.code()));
    }
    return m;
}

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

std::string mean_pm_sd(const MeanSd& m) { return fmt("%.1f", m.mean) + "±" + fmt("%.1f", m.sd); }

std::string p_text(double p) { return p < 0.0001 ? std::string("<0.0001") : fmt("%.4f", p); }

constexpr std::array<const char*, kComparativeQuestions> kTopics{"overall", "drone", "AGVs"};

}  // namespace

StudyReport summarize_study(std::span<const SessionRecord> sessions, std::span<const Questionnaire> questionnaires) {
    std::map<int, std::map<Modality, const SessionTimings*>> by_subject;
    for (const auto& s : sessions) {
        auto& slot = by_subject[s.subject][s.modality];
        if (slot) throw Error(ErrorCode::UnpairedSubject, "subject " + std::to_string(s.subject) + " has two sessions with one modality");
        slot = &s.timings;
    }
    for (const auto& [subject, m] : by_subject) {
        if (m.size() != 2) throw Error(ErrorCode::UnpairedSubject, "subject " + std::to_string(subject) + " lacks a modality");
    }
    if (by_subject.size() < 2) throw Error(ErrorCode::TooFewSamples, "a study report needs at least two subjects");

    bool kinds_known = true;
    for (const auto& s : sessions) {
        for (const auto& k : s.timings.task_kinds) kinds_known = kinds_known && k.has_value();
    }

    Paired total, reaction, robot_drone, robot_agv, robot_any;
    for (const auto& [subject, m] : by_subject) {
        for (const auto& [modality, t] : m) {
            auto side = [modality](Paired& p) -> std::map<int, double>& {
                return modality == Modality::MrReplica ? p.mr : p.joypad;
            };
            side(total)[subject] = t->total_s();
            side(reaction)[subject] = 0.5 * (t->reaction_s(0) + t->reaction_s(1));
            if (kinds_known) {
                for (std::size_t k = 0; k < 2; ++k) {
                    auto& target = *t->task_kinds[k] == orchestrator::TaskKind::DroneLift ? robot_drone : robot_agv;
                    side(target)[subject] = t->robot_s(k);
                }
            } else {
                side(robot_any)[subject] = 0.5 * (t->robot_s(0) + t->robot_s(1));
            }
        }
    }

    StudyReport report;
    report.subjects = static_cast<int>(by_subject.size());
    report.timing.push_back(summarize_metric("total_time", "s", total, report.plot));
    if (kinds_known) {
        report.timing.push_back(summarize_metric("robot_time_drone", "s", robot_drone, report.plot));
        report.timing.push_back(summarize_metric("robot_time_agv", "s", robot_agv, report.plot));
    } else {
        report.timing.push_back(summarize_metric("robot_time", "s", robot_any, report.plot));
    }
    report.timing.push_back(summarize_metric("reaction_time", "s", reaction, report.plot));

    if (!questionnaires.empty()) {
        std::map<int, const Questionnaire*> q_by_subject;
        for (const auto& q : questionnaires) q_by_subject[q.subject] = &q;
        for (const auto& [subject, _] : by_subject) {
            if (!q_by_subject.contains(subject)) {
                throw Error(ErrorCode::UnpairedSubject, "no questionnaire for subject " + std::to_string(subject));
            }
        }
        for (int item = 0; item < kSusItems; ++item) {
            Paired p;
            for (const auto& [subject, q] : q_by_subject) {
                p.mr[subject] = q->sus.at(Modality::MrReplica).items[static_cast<std::size_t>(item)];
                p.joypad[subject] = q->sus.at(Modality::Joypad).items[static_cast<std::size_t>(item)];
            }
            report.sus_items.push_back(summarize_metric("sus_q" + std::to_string(item + 1), "likert", p, report.plot));
        }
        Paired score;
        for (const auto& [subject, q] : q_by_subject) {
            score.mr[subject] = sus_score(q->sus.at(Modality::MrReplica));
            score.joypad[subject] = sus_score(q->sus.at(Modality::Joypad));
        }
        report.sus_total = summarize_metric("sus_score", "points", score, report.plot);

        for (int c = 0; c < kComparativeQuestions; ++c) {
            PreferenceSummary pref;
            pref.question = "c" + std::to_string(c + 1);
            pref.topic = kTopics[static_cast<std::size_t>(c)];
            for (const auto& [subject, q] : q_by_subject) {
                ++pref.total;
                if (q->preferred[static_cast<std::size_t>(c)] == Modality::MrReplica) ++pref.mr_count;
            }
            pref.mr_percent = proportion(pref.mr_count, pref.total);
            report.preferences.push_back(pref);
        }
    }
    return report;
}

std::string render_text(const StudyReport& report) {
    std::ostringstream out;
    char line[256];
    auto section = [&](const char* title, const std::vector<MetricSummary>& rows) {
        out << title << '\n';
        std::snprintf(line, sizeof line, "%-24s %-16s %-16s %9s %4s %8s\n", "metric", "MrReplica", "Joypad", "t", "df", "p");
        out << line;
        for (const auto& m : rows) {
            const std::string label = m.name + " [" + m.unit + "]";
            if (m.test) {
                const double t = std::abs(m.test->t_stat) < 5e-4 ? 0.0 : m.test->t_stat;  // no "-0.000"
                std::snprintf(line, sizeof line, "%-24s %-16s %-16s %9.3f %4d %8s\n", label.c_str(), mean_pm_sd(m.mr).c_str(),
                              mean_pm_sd(m.joypad).c_str(), t, m.test->df, p_text(m.test->p_two_sided).c_str());
            } else {
                std::snprintf(line, sizeof line, "%-24s %-16s %-16s %9s %4s %8s\n", label.c_str(), mean_pm_sd(m.mr).c_str(),
                              mean_pm_sd(m.joypad).c_str(), "-", "-", m.test_error.c_str());
            }
            out << line;
        }
        out << '\n';
    };

    out << "Study report: " << report.subjects << " subjects, paired within subject (MrReplica - Joypad)\n\n";
    section("Time performance", report.timing);
    if (!report.sus_items.empty()) {
        auto rows = report.sus_items;
        if (report.sus_total) rows.push_back(*report.sus_total);
        section("System usability", rows);
    }
    if (!report.preferences.empty()) {
        out << "Preferences (share preferring MrReplica)\n";
        for (const auto& p : report.preferences) {
            std::snprintf(line, sizeof line, "%-4s %-8s %2d/%-2d %5.1f%%\n", p.question.c_str(), p.topic.c_str(), p.mr_count,
                          p.total, round_to(p.mr_percent, 1));
            out << line;
        }
    }
    return out.str();
}

std::string render_table(const StudyReport& report) {
    std::ostringstream out;
    out << "section\tmetric\tunit\tmr_mean\tmr_sd\tjoypad_mean\tjoypad_sd\tt\tdf\tp\tnote\n";
    auto rows = [&](const char* section, const MetricSummary& m) {
        out << section << '\t' << m.name << '\t' << m.unit << '\t' << fmt("%.6g", m.mr.mean) << '\t' << fmt("%.6g", m.mr.sd)
            << '\t' << fmt("%.6g", m.joypad.mean) << '\t' << fmt("%.6g", m.joypad.sd) << '\t';
        if (m.test) {
            out << fmt("%.6g", m.test->t_stat) << '\t' << m.test->df << '\t' << fmt("%.6g", m.test->p_two_sided) << '\t';
        } else {
            out << "\t\t\t" << m.test_error;
        }
        out << '\n';
    };
    for (const auto& m : report.timing) rows("time", m);
    for (const auto& m : report.sus_items) rows("sus_item", m);
    if (report.sus_total) rows("sus", *report.sus_total);
    for (const auto& p : report.preferences) {
        out << "preference\t" << p.question << "\tpercent_mr\t" << fmt("%.1f", round_to(p.mr_percent, 1)) << "\t\t\t\t\t\t\t"
            << p.mr_count << '/' << p.total << '\n';
    }
    return out.str();
}

std::string render_plot_data(const StudyReport& report) {
    std::ostringstream out;
    out << "metric,modality,subject,value\n";
    for (const auto& r : report.plot) {
        out << r.metric << ',' << orchestrator::to_string(r.modality) << ',' << r.subject << ',' << fmt("%.6f", r.value) << '\n';
    }
    return out.str();
}

void write_report(const std::filesystem::path& dir, const StudyReport& report) {
    std::filesystem::create_directories(dir);
    auto write = [&](const char* name, const std::string& text) {
        std::ofstream out(dir / name);
        if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write " + (dir / name).string());
        out << text;
    };
    write("report.txt", render_text(report));
    write("report.tsv", render_table(report));
    write("plot_data.csv", render_plot_data(report));
}

}  // namespace replica::stats
