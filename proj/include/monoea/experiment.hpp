#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "monoea/algorithms.hpp"
#include "monoea/hottopic.hpp"

namespace monoea {

struct FunctionSpec {
    std::string type = "onemax";  // onemax | zeromax | binval | linear | hottopic
    std::size_t n = 0;
    std::uint64_t seed = 0;                    // linear weights / HotTopic instance
    std::vector<std::int64_t> weights;         // linear: explicit weights, else random
    HotTopicParams hottopic;                   // hottopic only; n and seed mirrored
};

struct OutputSpec {
    std::string trajectory_csv;  // empty: not written
    std::string summary_json;    // empty: not written
};

struct ExperimentConfig {
    FunctionSpec function;
    AlgorithmSpec algorithm;
    std::uint64_t budget = 0;
    std::size_t runs = 1;
    std::uint64_t seed = 0;
    std::uint64_t sample_every = 1000;
    std::vector<std::uint64_t> checkpoints;  // default: {budget}
    OutputSpec output;

    /// Unknown keys and out-of-range values raise ConfigError.
    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig load(const std::string& path);
    nlohmann::json to_json() const;

    /// Seed of run i: mix_seed(seed, i).
    std::uint64_t run_seed(std::size_t run) const;
};

Problem make_problem(const FunctionSpec& spec);
/// Highest attainable level (L for HotTopic, 0 otherwise).
int max_level(const Problem& p);

/// All runs, OpenMP-parallel over runs; result i belongs to run i.
std::vector<Trajectory> run_batch(const ExperimentConfig& cfg, const Problem& f);
/// Serial reference for run_batch.
std::vector<Trajectory> run_batch_serial(const ExperimentConfig& cfg, const Problem& f);

struct CheckpointStats {
    std::uint64_t evaluations = 0;
    double ones_mean = 0;
    double ones_std = 0;  // sample standard deviation (n - 1)
    double level_mean = 0;
    double level_std = 0;
};

struct ExperimentSummary {
    nlohmann::json config_echo;
    std::vector<CheckpointStats> checkpoints;
    std::vector<int> max_level_per_run;
    std::optional<double> runs_reaching_max_level;  // fraction; HotTopic only
    std::vector<std::optional<std::uint64_t>> runtime_per_run;
    std::optional<double> mean_runtime;  // over runs that found the optimum
    std::size_t runs_terminated = 0;
    std::optional<BiasEstimate> selection_bias;  // pooled over runs
    std::vector<std::string> warnings;

    nlohmann::json to_json() const;
};

/// Value of a trajectory at a checkpoint: the first sample at or past it,
/// else the last sample.
const Sample& sample_at(const Trajectory& t, std::uint64_t evaluations);

ExperimentSummary summarize(const ExperimentConfig& cfg, const Problem& f, const std::vector<Trajectory>& runs,
                            std::vector<std::string> warnings = {});

/// Header "run,evaluations,fitness,ones_fraction,level", one row per sample.
std::string trajectory_csv(const std::vector<Trajectory>& runs);

/// Writes text to path, creating parent directories. Throws IoError.
void write_file(const std::string& path, const std::string& text);

/// HotTopic(n = 10^4, alpha = 0.25, beta = 0.05, eps = 0.05, L = 100), (1+1)-EA
/// with parameter c, 20 runs, budget 5 * 10^5, checkpoints 10^5, 2 * 10^5, 5 * 10^5.
ExperimentConfig footnote_preset(double c, std::uint64_t seed = 2024);

}  // namespace monoea
