// Copyright 2026 The dcai-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dcai/agents.hpp"
#include "dcai/data.hpp"
#include "dcai/incentive.hpp"
#include "dcai/models.hpp"

namespace dcai {

enum class DatasetSourceKind : std::uint8_t { synthetic, numeric_csv, text_csv };

std::string_view to_string(DatasetSourceKind kind) noexcept;
DatasetSourceKind dataset_source_from_string(std::string_view name);

struct DatasetSource {
    DatasetSourceKind kind = DatasetSourceKind::synthetic;
    SynthKind synth = SynthKind::separable;
    std::size_t n = 2000;
    std::size_t dimension = 9;
    std::optional<std::uint64_t> seed;  // defaults to the simulation seed
    std::filesystem::path path;
    Layout layout = Layout::dense;  // numeric_csv only
    TextFeatures text_features = TextFeatures::bigram_tf;
    std::size_t vocabulary = 1000;

    friend bool operator==(const DatasetSource&, const DatasetSource&) = default;
};

Dataset load_dataset(const DatasetSource& source, std::uint64_t fallback_seed);

enum class Assignment : std::uint8_t {
    alternate,      // sample i goes to agent i mod 2, in dataset order
    shared_stream,  // whichever agent wakes takes the next unsubmitted sample
};

std::string_view to_string(Assignment a) noexcept;
Assignment assignment_from_string(std::string_view name);

struct SimulationConfig {
    ModelKind model = ModelKind::perceptron;
    std::optional<Layout> layout;  // defaults to the dataset layout
    double learning_rate = 1.0;
    double smoothing = 1.0;
    DatasetSource dataset;
    TrainerConfig trainer;
    AgentProfile good = AgentProfile::good();
    AgentProfile bad = AgentProfile::bad();
    std::uint64_t seed = 1;
    Seconds metrics_interval = 3600;
    Seconds horizon = 60 * kSecondsPerDay;
    double warm_fraction = 0.1;
    Assignment assignment = Assignment::shared_stream;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
    ModelSpec model_spec(const Dataset& data) const;

    friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

struct ActivityCounts {
    std::uint64_t updates = 0;  // accepted contributions
    std::uint64_t refunds = 0;
    std::uint64_t reports = 0;
    std::uint64_t stale_claims = 0;

    friend bool operator==(const ActivityCounts&, const ActivityCounts&) = default;
};

struct MetricsSample {
    Seconds time = 0;
    std::vector<Amount> balances;  // one per agent, in MetricsSeries::agents order
    double accuracy = 0.0;
    ActivityCounts counts;
};

struct MetricsSeries {
    std::vector<AccountId> agents;
    std::vector<MetricsSample> samples;
    double baseline_accuracy = 0.0;
};

struct SimulationResult {
    SimulationConfig config;
    Trainer trainer;
    MetricsSeries metrics;
    std::size_t warm_start_count = 0;
    std::size_t train_count = 0;
    std::size_t test_count = 0;
    Seconds end_time = 0;
    bool hit_horizon = false;
    bool invariants_ok = true;
    double warm_start_accuracy = 0.0;

    double final_accuracy() const { return metrics.samples.back().accuracy; }
    Amount final_balance(const AccountId& agent) const;
};

double baseline_accuracy(const ModelSpec& spec, std::span<const LabeledSample> train,
                         std::span<const LabeledSample> test);

SimulationResult run(const SimulationConfig& config);
/// Runs on an already loaded dataset; `config.dataset` is only recorded.
SimulationResult run(const SimulationConfig& config, const Dataset& data);

/// Writes balances.csv, accuracy.csv, activity.csv, events.csv, events.jsonl,
/// summary.json, checkpoint.bin, model.json and plot.py. Each file is
/// written to a temporary name and then renamed. Throws std::runtime_error on I/O failure.
void export_run(const SimulationResult& result, const std::filesystem::path& directory);

/// Writes `content` next to `path` and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

struct SweepRow {
    std::uint64_t seed = 0;
    double baseline_accuracy = 0.0;
    double final_accuracy = 0.0;
    std::vector<Amount> final_balances;
    ActivityCounts counts;
    bool invariants_ok = true;
};

/// One run per seed on a pool of `threads` workers; rows come back in seed order.
std::vector<SweepRow> sweep(const SimulationConfig& config, std::span<const std::uint64_t> seeds,
                            unsigned threads = 0);

}  // namespace dcai
