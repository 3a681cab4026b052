#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "monoea/benchmarks.hpp"
#include "monoea/fitness.hpp"
#include "monoea/flip_distribution.hpp"
#include "monoea/hottopic.hpp"

namespace monoea {

enum class Variant {
    RLS,
    OnePlusLambdaEA,
    MuPlusOneEA,
    MuPlusOneGA,
    OnePlusLambdaFastEA,
    MuPlusOneFastEA,
    MuPlusOneFastGA,
    OneLambdaLambdaGA,
};

std::string to_string(Variant v);
/// Accepts the enumerator names above. Throws ConfigError otherwise.
Variant parse_variant(const std::string& name);

/// Self-adjusting lambda for the (1+(lambda,lambda))-GA: lambda <- max(1, lambda/F)
/// after a strict improvement, lambda <- min(lambda_max, lambda F^(1/4))
/// otherwise; c = lambda and gamma = (1 - gamma_slack) / lambda.
struct OneFifthRule {
    double factor = 1.5;
    double lambda_max = 0;  // 0 means n
    double gamma_slack = 0;
};

struct AlgorithmSpec {
    Variant variant = Variant::OnePlusLambdaEA;
    std::size_t mu = 1;
    std::size_t lambda = 1;
    double c = 1.0;
    std::optional<double> gamma;                // OneLambdaLambdaGA only
    std::optional<FlipCountDistribution> dist;  // fast variants only
    std::optional<OneFifthRule> adaptive;       // OneLambdaLambdaGA only

    /// Throws ConfigError for incompatible settings; returns warnings for
    /// settings that are legal but outside the analysed regime.
    std::vector<std::string> validate(std::size_t n) const;
    std::string describe() const;
};

struct Sample {
    std::uint64_t evaluations = 0;
    FitnessValue best_fitness;
    double ones_fraction = 0;
    int level = 0;  // HotTopic level of the best individual, 0 for other functions
};

enum class Termination { FoundOptimum, BudgetExhausted };

/// Counters over the offspring that competes with the parent in
/// population-one variants (the fittest offspring; for the
/// (1+(lambda,lambda))-GA the fittest crossover offspring). s01 counts parent
/// zero-bits that became one, s10 the reverse. Only generations with s01 > 0
/// contribute to events and the s10 sums.
struct Instrumentation {
    std::uint64_t generations = 0;
    std::uint64_t events = 0;
    double sum_s10 = 0;
    double sum_s10_sq = 0;
    double sum_s01 = 0;
};

struct Trajectory {
    std::vector<Sample> samples;
    Termination terminated = Termination::BudgetExhausted;
    std::uint64_t total_evaluations = 0;
    /// Evaluation index at which the optimum was first evaluated.
    std::optional<std::uint64_t> runtime;
    Instrumentation instrumentation;
};

/// Replace the parent iff the offspring is at least as fit.
inline bool acceptance_rule(const FitnessValue& parent, const FitnessValue& offspring) {
    return offspring >= parent;
}

struct BiasEstimate {
    double estimate = 0;        // E[s10 | s01 > 0]
    double standard_error = 0;  // sample std / sqrt(events)
    std::uint64_t events = 0;
};

/// nullopt when no generation had s01 > 0.
std::optional<BiasEstimate> selection_bias_estimate(const Trajectory& t);

/// Runs one seeded optimisation. The budget counts fitness evaluations; a
/// generation only starts if all of its evaluations fit into the budget, and
/// the run stops at the first evaluation of the optimum. A sample is taken
/// after initialisation, whenever a multiple of sample_every is crossed, and
/// at termination.
template <FitnessOracle F>
Trajectory run(const AlgorithmSpec& spec, const F& f, std::uint64_t budget, std::uint64_t seed,
               std::uint64_t sample_every);

using Problem = std::variant<OneMax, ZeroMax, BinVal, Linear, HotTopic>;

std::size_t dimension(const Problem& p);
std::string problem_name(const Problem& p);
Trajectory run(const AlgorithmSpec& spec, const Problem& f, std::uint64_t budget, std::uint64_t seed,
               std::uint64_t sample_every);

}  // namespace monoea
