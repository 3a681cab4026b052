#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <numeric>

#include <json.hpp>

#include "monoea/errors.hpp"
#include "monoea/hottopic.hpp"
#include "reference.hpp"

using namespace monoea;

namespace {

reference::Bits to_bits(const BitVector& x) {
    reference::Bits b(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) b[i] = x[i] ? 1 : 0;
    return b;
}

// Random point whose zero density is itself random, so that a range of
// levels is visited.
BitVector random_point(std::size_t n, Rng& rng) {
    const double p_zero = uniform01(rng) * uniform01(rng) * 0.3;
    BitVector x = BitVector::all_ones(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (uniform01(rng) < p_zero) x.flip(i);
    }
    return x;
}

std::vector<Index> random_flips(Rng& rng, std::size_t n, std::size_t max_count) {
    std::vector<Index> all(n);
    std::iota(all.begin(), all.end(), 0);
    const std::size_t k = std::min<std::size_t>(n, uniform_below(rng, max_count + 1));
    for (std::size_t j = 0; j < k; ++j) std::swap(all[j], all[j + uniform_below(rng, n - j)]);
    all.resize(k);
    return all;
}

}  // namespace

TEST_CASE("level sets have the configured sizes and B is inside A") {
    HotTopicInstance inst({100, 0.25, 0.05, 0.05, 8, 1234});
    for (std::size_t i = 1; i <= 8; ++i) {
        const auto& s = inst.level_sets(i);
        CHECK(s.a.size() == 25);
        CHECK(s.b.size() == 5);
        CHECK(std::is_sorted(s.a.begin(), s.a.end()));
        CHECK(std::adjacent_find(s.a.begin(), s.a.end()) == s.a.end());
        CHECK(std::includes(s.a.begin(), s.a.end(), s.b.begin(), s.b.end()));
        CHECK(s.a.back() < 100);
    }
}

TEST_CASE("instances are deterministic and materialization order does not matter") {
    const HotTopicParams p{500, 0.25, 0.05, 0.05, 20, 99};
    HotTopicInstance forward(p), backward(p);
    for (std::size_t i = 1; i <= 20; ++i) (void)forward.level_sets(i);
    for (std::size_t i = 20; i >= 1; --i) (void)backward.level_sets(i);
    for (std::size_t i = 1; i <= 20; ++i) {
        CHECK(forward.level_sets(i).a == backward.level_sets(i).a);
        CHECK(forward.level_sets(i).b == backward.level_sets(i).b);
    }
    CHECK(forward.to_json() == backward.to_json());
}

TEST_CASE("levels are materialized lazily") {
    HotTopicInstance inst({1000, 0.25, 0.05, 0.05, 50, 3});
    CHECK(inst.materialized_levels() == 0);
    (void)inst.level_sets(37);
    CHECK(inst.materialized_levels() == 1);
    (void)inst.level_sets(37);
    CHECK(inst.materialized_levels() == 1);
}

TEST_CASE("different seeds give different first levels") {
    int differ = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        HotTopicInstance a({100, 0.25, 0.05, 0.05, 1, 2 * s}), b({100, 0.25, 0.05, 0.05, 1, 2 * s + 1});
        differ += a.level_sets(1).a != b.level_sets(1).a ? 1 : 0;
    }
    CHECK(differ >= 99);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(HotTopicInstance({10, 0.25, 0.05, 0.05, 5, 0}), ConfigError);  // floor(beta n) = 0
    CHECK_THROWS_AS(HotTopicInstance({100, 0.25, 0.3, 0.05, 5, 0}), ConfigError);  // beta > alpha
    CHECK_THROWS_AS(HotTopicInstance({100, 1.0, 0.05, 0.05, 5, 0}), ConfigError);
    CHECK_THROWS_AS(HotTopicInstance({100, 0.25, 0.05, 0.0, 5, 0}), ConfigError);
    CHECK_THROWS_AS(HotTopicInstance({100, 0.25, 0.05, 0.05, 0, 0}), ConfigError);
}

TEST_CASE("the level threshold is the real value eps beta n") {
    CHECK(HotTopicParams{10000, 0.25, 0.05, 0.05, 1, 0}.max_zeros() == 25);
    CHECK(HotTopicParams{2000, 0.25, 0.05, 0.05, 1, 0}.max_zeros() == 5);
    CHECK(HotTopicParams{1000, 0.25, 0.05, 0.05, 1, 0}.max_zeros() == 2);  // 2.5
    CHECK(HotTopicParams{100, 0.25, 0.05, 0.05, 1, 0}.max_zeros() == 0);   // 0.25: no zero allowed
}

TEST_CASE("reverse indexes agree with the sets") {
    HotTopicInstance inst({300, 0.3, 0.1, 0.1, 25, 8});
    CHECK(inst.index_consistent());
}

TEST_CASE("level and value of the extreme points") {
    const std::size_t n = 400, L = 12;
    HotTopicInstance inst({n, 0.25, 0.05, 0.05, L, 5});
    CHECK(level(inst, BitVector::all_ones(n)) == static_cast<int>(L));
    CHECK(level(inst, BitVector(n)) == 0);
    const auto nn = static_cast<std::int64_t>(n);
    CHECK(eval_ht(inst, BitVector::all_ones(n)).scalar() == static_cast<std::int64_t>(L) * nn * nn + nn);
    CHECK(eval_ht(inst, BitVector(n)).scalar() == 0);
    CHECK(HotTopic(inst).optimum() == eval_ht(inst, BitVector::all_ones(n)));
}

TEST_CASE("level is the maximum over all levels at footnote scale") {
    const std::size_t n = 10000, L = 10;
    HotTopicInstance inst({n, 0.25, 0.05, 0.05, L, 77});
    const reference::MaskedHotTopic oracle(inst);
    // 26 zeros in B_10 pushes it over the threshold of 25.
    BitVector x = BitVector::all_ones(n);
    const auto& b10 = inst.level_sets(10).b;
    for (std::size_t k = 0; k < 26; ++k) x.flip(b10[k]);
    std::vector<int> zeros(L + 1, 0);
    for (std::size_t i = 1; i <= L; ++i) {
        for (Index p : inst.level_sets(i).b) zeros[i] += x[p] ? 0 : 1;
    }
    REQUIRE(zeros[10] == 26);
    int expected = 0;
    for (std::size_t i = 1; i <= L; ++i) {
        if (zeros[i] <= 25) expected = static_cast<int>(i);
    }
    CHECK(expected == 9);
    CHECK(level(inst, x) == expected);
    CHECK(oracle.level(to_bits(x)) == expected);

    // Exactly 25 zeros in B_10: still at the top level.
    x.flip(b10[0]);
    CHECK(level(inst, x) == static_cast<int>(L));
}

TEST_CASE("eval_ht equals the independent reference evaluator") {
    Rng rng(2024);
    for (int inst_id = 0; inst_id < 40; ++inst_id) {
        const std::size_t n = 64;
        HotTopicInstance inst({n, 0.25 + 0.2 * uniform01(rng), 0.1, 0.2, 1 + uniform_below(rng, 15), rng()});
        const reference::MaskedHotTopic oracle(inst);
        for (int t = 0; t < 200; ++t) {
            const auto x = random_point(n, rng);
            REQUIRE(eval_ht(inst, x).scalar() == oracle.value(to_bits(x)));
            REQUIRE(level(inst, x) == oracle.level(to_bits(x)));
        }
    }
}

TEST_CASE("eval_ht_incremental") {
    const std::size_t n = 1000;
    HotTopicInstance inst({n, 0.25, 0.05, 0.05, 5, 11});
    const HotTopic f(inst);
    Rng rng(4);

    SUBCASE("empty flip set leaves the value unchanged") {
        auto st = make_level_state(f, BitVector::random(n, rng));
        const auto before = f.fitness(st.counts);
        const auto [v, next] = eval_ht_incremental(f, st, {});
        CHECK(v == before);
        CHECK(next.x == st.x);
    }

    SUBCASE("a 0->1 flip outside every A_i below the top level adds exactly 1") {
        int checked = 0;
        for (int t = 0; t < 50; ++t) {
            auto st = make_level_state(f, BitVector::random(n, rng));
            REQUIRE(st.counts.level < 5);
            for (Index p = 0; p < n; ++p) {
                if (st.x[p] || !inst.levels_containing_a(p).empty()) continue;
                const Index flip[] = {p};
                const auto before = f.fitness(st.counts).scalar();
                const auto [v, next] = eval_ht_incremental(f, st, flip);
                CHECK(v.scalar() == before + 1);
                ++checked;
                break;
            }
        }
        CHECK(checked == 50);
    }

    SUBCASE("random flip batches match full evaluation") {
        HotTopicInstance big({n, 0.25, 0.05, 0.05, 50, 12});
        const HotTopic g(big);
        auto st = make_level_state(g, random_point(n, rng));
        int level_changes = 0;
        for (int b = 0; b < 10000; ++b) {
            const auto flips = random_flips(rng, n, 8);
            const auto expected = eval_ht(big, flip_bits(st.x, flips));
            REQUIRE(g.peek(st.x, st.counts, flips) == expected);
            // Bias towards ones so that the walk climbs through the levels.
            if (coin(rng) || expected >= g.fitness(st.counts)) {
                const int before = st.counts.level;
                auto [v, next] = eval_ht_incremental(g, st, flips);
                REQUIRE(v == expected);
                st = std::move(next);
                level_changes += st.counts.level != before ? 1 : 0;
            }
            if (b % 1000 == 0) REQUIRE(g.consistent(st.x, st.counts));
        }
        CHECK(level_changes > 0);
        CHECK(g.consistent(st.x, st.counts));
    }
}

TEST_CASE("HotTopic is strictly monotone") {
    Rng rng(31337);
    int triples = 0;
    for (int inst_id = 0; inst_id < 20; ++inst_id) {
        const std::size_t n = 2 + uniform_below(rng, 400);
        const double alpha = 0.05 + 0.9 * uniform01(rng);
        const double beta = std::max(alpha * uniform01(rng), 1.0001 / static_cast<double>(n));
        if (beta > alpha) continue;
        HotTopicInstance inst({n, alpha, beta, 0.05 + 0.5 * uniform01(rng), 1 + uniform_below(rng, 30), rng()});
        for (int t = 0; t < 100; ++t) {
            auto x = random_point(n, rng);
            if (x.zeros() == 0) continue;
            Index i = 0;
            do {
                i = static_cast<Index>(uniform_below(rng, n));
            } while (x[i]);
            const auto before = eval_ht(inst, x);
            const int lvl_before = level(inst, x);
            x.flip(i);
            REQUIRE(eval_ht(inst, x) > before);
            REQUIRE(level(inst, x) >= lvl_before);
            ++triples;
        }
    }
    CHECK(triples > 1000);
}

TEST_CASE("footnote-scale instance builds quickly") {
    const auto t0 = std::chrono::steady_clock::now();
    HotTopicInstance inst({10000, 0.25, 0.05, 0.05, 100, 1});
    const HotTopic f(inst);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(inst.materialized_levels() == 100);
    CHECK(secs < 1.0);
}

TEST_CASE("instance dump lists params and sets") {
    HotTopicInstance inst({50, 0.2, 0.1, 0.1, 3, 6});
    const auto j = nlohmann::json::parse(inst.to_json());
    CHECK(j["params"]["n"] == 50);
    CHECK(j["levels"].size() == 3);
    CHECK(j["levels"][1]["a"].get<std::vector<Index>>() == inst.level_sets(2).a);
    CHECK(j["levels"][2]["b"].get<std::vector<Index>>() == inst.level_sets(3).b);
}
