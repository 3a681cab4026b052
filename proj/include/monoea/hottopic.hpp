#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "monoea/bit_vector.hpp"
#include "monoea/fitness.hpp"

namespace monoea {

struct HotTopicParams {
    std::size_t n = 0;
    double alpha = 0.25;      // |A_i| = floor(alpha n)
    double beta = 0.05;       // |B_i| = floor(beta n)
    double eps = 0.05;        // level threshold eps * beta * n zero-bits in B_i
    std::size_t levels = 1;   // L
    std::uint64_t seed = 0;

    std::size_t a_size() const;
    std::size_t b_size() const;
    /// Largest integer zero-count z with z <= eps * beta * n. A relative guard
    /// of 1e-9 absorbs binary rounding of decimal inputs (0.05 * 0.05 * 10000).
    int max_zeros() const;
    /// Throws ConfigError unless 0 < beta <= alpha < 1, 0 < eps < 1,
    /// floor(beta n) >= 1 and L >= 1.
    void validate() const;
};

/// Hot-topic set A_i and trigger set B_i of one level, both sorted ascending.
struct LevelSets {
    std::vector<Index> a;
    std::vector<Index> b;
};

/// Seeded HotTopic instance. Level i (1-based) is generated on first request
/// from its own substream mix_seed(seed, i), so levels can be requested in any
/// order. Copies share the materialized data; materialization is thread-safe.
class HotTopicInstance {
public:
    explicit HotTopicInstance(const HotTopicParams& params);

    const HotTopicParams& params() const;
    std::size_t dimension() const { return params().n; }
    std::size_t num_levels() const { return params().levels; }

    /// Sets of level i, 1 <= i <= L.
    const LevelSets& level_sets(std::size_t i) const;
    std::size_t materialized_levels() const;

    /// Reverse indexes (0-based level indices, i.e. level - 1). The first call
    /// materializes every level.
    std::span<const std::uint32_t> levels_containing_b(Index pos) const;
    std::span<const std::uint32_t> levels_containing_a(Index pos) const;
    /// Membership of pos in A_level, 1 <= level <= L.
    bool in_a(std::size_t level, Index pos) const;

    /// Recomputes the reverse indexes from the sets and compares.
    bool index_consistent() const;

    /// params + explicit sets, for cross-implementation checks.
    std::string to_json() const;

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

/// Level by a full scan over all L trigger sets.
int level(const HotTopicInstance& inst, const BitVector& x);
/// HT(x) = l n^2 + n * (ones in A_{l+1}) + (ones outside A_{l+1}); A_{L+1} is empty.
FitnessValue eval_ht(const HotTopicInstance& inst, const BitVector& x);

/// HotTopic as an incremental fitness oracle.
class HotTopic {
public:
    /// Per-point counters: zero-bits in every B_i, one-bits in every A_i.
    struct State {
        std::vector<std::int32_t> zeros_b;
        std::vector<std::int32_t> ones_a;
        std::int32_t level = 0;
        std::int64_t ones = 0;
    };

    explicit HotTopic(HotTopicInstance inst);

    const HotTopicInstance& instance() const { return inst_; }
    std::size_t dimension() const { return n_; }
    std::string name() const { return "hottopic"; }
    FitnessValue evaluate(const BitVector& x) const { return eval_ht(inst_, x); }
    State make_state(const BitVector& x) const;
    FitnessValue fitness(const State& s) const;
    FitnessValue peek(const BitVector& parent, const State& s, std::span<const Index> flips) const;
    void commit(const BitVector& parent, State& s, std::span<const Index> flips) const;
    FitnessValue optimum() const;
    int level(const State& s) const { return s.level; }

    /// Full recount check of a state against its point.
    bool consistent(const BitVector& x, const State& s) const;

private:
    struct Delta {
        std::uint32_t level;  // 0-based
        std::int32_t change;
    };
    // Collects merged per-level zero-count changes of B sets; returns the
    // child's level.
    int child_level(const State& s, std::vector<Delta>& deltas) const;
    std::int64_t value(int lvl, std::int64_t ones_in_hot, std::int64_t ones) const;

    HotTopicInstance inst_;
    std::int64_t n_;
    std::int32_t max_zeros_;
    std::int32_t levels_;
};

static_assert(FitnessOracle<HotTopic>);

/// Reference point plus its counters.
struct LevelState {
    BitVector x;
    HotTopic::State counts;
};

LevelState make_level_state(const HotTopic& f, BitVector x);
/// Value of x with `flipped` toggled, and the state of that point.
std::pair<FitnessValue, LevelState> eval_ht_incremental(const HotTopic& f, LevelState state,
                                                        std::span<const Index> flipped);

}  // namespace monoea
