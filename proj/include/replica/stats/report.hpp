#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "replica/orchestrator/plan.hpp"
#include "replica/stats/descriptive.hpp"
#include "replica/stats/sus.hpp"
#include "replica/stats/timings.hpp"

namespace replica::stats {

struct SessionRecord {
    int subject = 0;
    orchestrator::Modality modality = orchestrator::Modality::MrReplica;
    SessionTimings timings;
};

/// Per-modality mean +- SD of one metric plus the within-subject paired t-test
/// (MrReplica - Joypad). When the test cannot run, test is empty and
/// test_error names the reason (e.g. "ZeroVariance").
struct MetricSummary {
    std::string name;
    std::string unit;
    MeanSd mr;
    MeanSd joypad;
    std::optional<TTestResult> test;
    std::string test_error;
};

struct PreferenceSummary {
    std::string question;  // c1..c3
    std::string topic;
    int mr_count = 0;
    int total = 0;
    double mr_percent = 0.0;
};

struct PlotRow {
    std::string metric;
    orchestrator::Modality modality = orchestrator::Modality::MrReplica;
    int subject = 0;
    double value = 0.0;
};

struct StudyReport {
    int subjects = 0;
    std::vector<MetricSummary> timing;
    std::vector<MetricSummary> sus_items;
    std::optional<MetricSummary> sus_total;
    std::vector<PreferenceSummary> preferences;
    std::vector<PlotRow> plot;
};

/// Builds the study report. Every subject must contribute exactly one session
/// per modality (UnpairedSubject otherwise) and there must be at least two
/// subjects. Robot time is split by robot when every session records task
/// kinds; reaction time is the per-session mean over both tasks.
StudyReport summarize_study(std::span<const SessionRecord> sessions, std::span<const Questionnaire> questionnaires = {});

/// Human-readable tables mirroring a results section: mean±SD per modality,
/// t, df and p for each metric.
std::string render_text(const StudyReport& report);

/// Tab-separated table, one row per metric.
std::string render_table(const StudyReport& report);

/// Long-format plot data: metric,modality,subject,value.
std::string render_plot_data(const StudyReport& report);

/// Writes report.txt, report.tsv and plot_data.csv into dir.
void write_report(const std::filesystem::path& dir, const StudyReport& report);

}  // namespace replica::stats
