// Pilot batch for the small-scale HotTopic dichotomy, run with the serial
// reference implementation. Prints one line per (c, seed) and a summary.

#include <cmath>
#include <cstdio>

#include <CLI11.hpp>

#include "monoea/hottopic.hpp"
#include "monoea/rng.hpp"
#include "reference.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Reference pilot for the small-scale HotTopic dichotomy"};
    std::size_t n = 2000, levels = 60, runs = 20;
    double budget_factor = 40;
    std::vector<double> cs{0.9, 4.0};
    std::uint64_t seed = 1;
    app.add_option("--n", n)->capture_default_str();
    app.add_option("--levels", levels)->capture_default_str();
    app.add_option("--runs", runs)->capture_default_str();
    app.add_option("--budget-factor", budget_factor, "Budget = factor * n ln n")->capture_default_str();
    app.add_option("--c", cs)->capture_default_str();
    app.add_option("--seed", seed)->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    using namespace monoea;
    const auto budget =
        static_cast<std::uint64_t>(std::ceil(budget_factor * static_cast<double>(n) * std::log(static_cast<double>(n))));
    std::printf("n=%zu L=%zu budget=%llu\n", n, levels, static_cast<unsigned long long>(budget));
    std::printf("c,run,found,evaluations,ones_fraction,level\n");
    for (double c : cs) {
        std::size_t top = 0;
        double ones_sum = 0;
        for (std::size_t r = 0; r < runs; ++r) {
            HotTopicInstance inst({n, 0.25, 0.05, 0.05, levels, mix_seed(seed, r)});
            reference::MaskedHotTopic f(inst);
            const auto res = reference::one_plus_one_ea(
                n, c, [&](const reference::Bits& x) { return f.value(x); }, f.optimum(), budget, mix_seed(seed + 1, r),
                {budget}, [&](const reference::Bits& x) { return f.level(x); });
            const auto& cp = res.checkpoints.back();
            std::printf("%g,%zu,%d,%llu,%.4f,%d\n", c, r, res.found ? 1 : 0,
                        static_cast<unsigned long long>(res.evaluations), cp.ones_fraction, cp.level);
            if (cp.level == static_cast<int>(levels)) ++top;
            ones_sum += cp.ones_fraction;
        }
        std::printf("# c=%g: %zu/%zu runs at level %zu, mean ones %.4f\n", c, top, runs, levels,
                    ones_sum / static_cast<double>(runs));
    }
    return 0;
}
