#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "routinecast/backend.hpp"
#include "routinecast/evalmetrics.hpp"
#include "routinecast/ontology.hpp"
#include "routinecast/priors.hpp"
#include "routinecast/promptkit.hpp"
#include "routinecast/retrieval.hpp"

namespace routinecast {

enum class Task { NextActivity, Rollout };
enum class BackendChoice { Mock, Http };
enum class EmbedChoice { Builtin, Http };

struct ExperimentConfig {
    Task task = Task::NextActivity;
    std::vector<int> shot_counts{0, 1, 2, 3, 4, 5, 10};
    BackendChoice backend = BackendChoice::Mock;
    EmbedChoice embed_backend = EmbedChoice::Builtin;
    std::uint64_t seed = 42;
    double mmr_lambda = 0.5;
    std::vector<double> tolerances{5.0, 10.0, 15.0};
    int history_window = 3;
    GapPolicy gap_policy = GapPolicy::Keep;
    std::string model_id = "gpt-4o-mini";
    std::string embed_model_id = "all-MiniLM-L6-v2";
    double temperature = 0.0;
    int max_output_tokens = 256;
    int concurrency = 4;
    std::string cache_dir;      // empty disables the persistent cache
    int max_parse_retries = 3;  // regenerations after a malformed output
};

/// Canonical JSON of the config; its sha256 tags every emitted file.
std::string config_to_json(const ExperimentConfig& config);

struct ShotCounters {
    std::size_t eval_targets = 0;
    std::size_t skipped_no_history = 0;
    std::size_t scored = 0;
    std::size_t parse_failures = 0;
    std::size_t parse_retries = 0;
    std::size_t history_from_train = 0;
    std::size_t backend_calls = 0;
    std::size_t backend_failures = 0;
    std::size_t retrieval_queries = 0;
};

struct ShotReport {
    int shots = 0;
    ClassificationReport classification;
    std::optional<DurationReport> duration;  // absent when no valid durations
    std::vector<std::pair<double, double>> joint_success;  // (tolerance, fraction)
    ShotCounters counters;
    std::vector<LabeledPair> pairs;  // in-memory only, not serialized
};

struct DayDtwReport {
    std::string day;
    double raw = 0.0;
    double normalized = 0.0;
    bool skipped = false;
    std::string skip_reason;
};

struct RolloutArmReport {
    int shots = 0;  // -1 marks the Markov baseline arm
    std::vector<DayDtwReport> days;
    double median_raw = 0.0;
    double median_normalized = 0.0;
    std::size_t days_scored = 0;
    ShotCounters counters;
};

struct RunReport {
    std::string config_json;
    std::string config_hash;
    std::string template_hash;
    std::string persona_hash;
    std::string spatial_hash;
    std::string priors_hash;
    std::uint64_t seed = 0;
    Task task = Task::NextActivity;
    std::vector<ShotReport> shots;
    std::vector<RolloutArmReport> rollout_arms;        // one per shot count
    std::optional<RolloutArmReport> rollout_baseline;  // Markov reference arm
    std::vector<std::string> failure_manifest;
    double wall_clock_ms = 0.0;  // console only, never serialized
};

/// Everything a run needs besides the config. The backend may be injected
/// (tests); when null it is constructed from the config.
struct RunArtifacts {
    SplitDataset split;
    PriorsBundle priors;
    std::string priors_hash;
    PromptTemplate prompt_template = PromptTemplate::builtin();
    Persona persona = Persona::aruba_default();
    SpatialDescription spatial = SpatialDescription::aruba_default();
    std::shared_ptr<TextBackend> backend;
};

std::shared_ptr<TextBackend> make_backend(const ExperimentConfig& config,
                                          const RunArtifacts& artifacts);

RunReport run_next_activity(const ExperimentConfig& config, RunArtifacts& artifacts);
RunReport run_rollout(const ExperimentConfig& config, RunArtifacts& artifacts);
RunReport run_experiment(const ExperimentConfig& config, RunArtifacts& artifacts);

/// report.json + summary.csv (+ dtw_per_day.csv for rollouts), all tagged
/// with the config hash and seed; byte-stable for identical runs.
void emit_report(const RunReport& report, const std::filesystem::path& out_dir);

std::string report_to_json(const RunReport& report);
std::string summary_csv(const RunReport& report);
std::string dtw_csv(const RunReport& report);

}  // namespace routinecast
