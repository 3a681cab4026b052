// Parallel kernels against their serial references, and incremental against
// full HotTopic evaluation.

#include <benchmark/benchmark.h>

#include <numeric>

#include "monoea/dichotomy.hpp"
#include "monoea/experiment.hpp"
#include "reference.hpp"

using namespace monoea;

namespace {

ExperimentConfig batch_config() {
    ExperimentConfig cfg;
    cfg.function.type = "hottopic";
    cfg.function.n = 2000;
    cfg.function.seed = 7;
    cfg.function.hottopic = {2000, 0.25, 0.05, 0.05, 20, 7};
    cfg.algorithm.c = 0.9;
    cfg.budget = 100000;
    cfg.runs = 8;
    cfg.seed = 11;
    return cfg;
}

void BM_RunBatch(benchmark::State& state) {
    const auto cfg = batch_config();
    const auto p = make_problem(cfg.function);
    for (auto _ : state) benchmark::DoNotOptimize(run_batch(cfg, p));
}
BENCHMARK(BM_RunBatch)->Unit(benchmark::kMillisecond);

void BM_RunBatchSerial(benchmark::State& state) {
    const auto cfg = batch_config();
    const auto p = make_problem(cfg.function);
    for (auto _ : state) benchmark::DoNotOptimize(run_batch_serial(cfg, p));
}
BENCHMARK(BM_RunBatchSerial)->Unit(benchmark::kMillisecond);

void BM_PhiOnGrid(benchmark::State& state) {
    const auto d = FlipCountDistribution::zipf(2.0, 1000000);
    const auto grid = default_alpha_grid();
    for (auto _ : state) benchmark::DoNotOptimize(phi_on_grid(d, grid));
}
BENCHMARK(BM_PhiOnGrid)->Unit(benchmark::kMillisecond);

void BM_PhiOnGridSerial(benchmark::State& state) {
    const auto d = FlipCountDistribution::zipf(2.0, 1000000);
    const auto grid = default_alpha_grid();
    for (auto _ : state) benchmark::DoNotOptimize(phi_on_grid_serial(d, grid));
}
BENCHMARK(BM_PhiOnGridSerial)->Unit(benchmark::kMillisecond);

// One single-bit flip per iteration on a footnote-sized instance.
HotTopicParams eval_params() { return {10000, 0.25, 0.05, 0.05, 100, 3}; }

void BM_HotTopicIncremental(benchmark::State& state) {
    const HotTopic f{HotTopicInstance(eval_params())};
    Rng rng(1);
    const auto x = BitVector::random(10000, rng);
    const auto s = f.make_state(x);
    for (auto _ : state) {
        const Index i = static_cast<Index>(uniform_below(rng, 10000));
        benchmark::DoNotOptimize(f.peek(x, s, std::span<const Index>(&i, 1)));
    }
}
BENCHMARK(BM_HotTopicIncremental);

void BM_HotTopicFull(benchmark::State& state) {
    const HotTopicInstance inst(eval_params());
    Rng rng(1);
    auto x = BitVector::random(10000, rng);
    benchmark::DoNotOptimize(eval_ht(inst, x));  // materialize every level
    for (auto _ : state) {
        const Index i = static_cast<Index>(uniform_below(rng, 10000));
        x.flip(i);
        benchmark::DoNotOptimize(eval_ht(inst, x));
        x.flip(i);
    }
}
BENCHMARK(BM_HotTopicFull);

void BM_HotTopicMaskedReference(benchmark::State& state) {
    const HotTopicInstance inst(eval_params());
    const reference::MaskedHotTopic f(inst);
    Rng rng(1);
    reference::Bits x(10000);
    for (auto& b : x) b = static_cast<std::uint8_t>(rng() & 1);
    for (auto _ : state) {
        const std::size_t i = uniform_below(rng, 10000);
        x[i] ^= 1;
        benchmark::DoNotOptimize(f.value(x));
        x[i] ^= 1;
    }
}
BENCHMARK(BM_HotTopicMaskedReference);

}  // namespace

BENCHMARK_MAIN();
