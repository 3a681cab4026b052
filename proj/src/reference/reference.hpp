#pragma once

// Straightforward serial implementations used as test oracles and as the
// baseline of the benchmarks. They share nothing with the library's
// incremental evaluation or mutation code: every offspring is a full copy that
// is evaluated from scratch, and randomness comes from <random> distributions.

#include <cstdint>
#include <functional>
#include <vector>

#include "monoea/hottopic.hpp"

namespace monoea::reference {

using Bits = std::vector<std::uint8_t>;

/// HotTopic evaluated from the explicit level sets, using per-level word
/// masks and popcounts.
class MaskedHotTopic {
public:
    explicit MaskedHotTopic(const HotTopicInstance& inst);

    std::size_t dimension() const { return n_; }
    int level(const Bits& x) const;
    std::int64_t value(const Bits& x) const;
    std::int64_t optimum() const;

private:
    std::vector<std::uint64_t> pack(const Bits& x) const;
    int level_of(const std::vector<std::uint64_t>& w) const;

    std::size_t n_;
    std::size_t words_;
    std::size_t levels_;
    double threshold_;
    std::vector<std::vector<std::uint64_t>> a_masks_;
    std::vector<std::vector<std::uint64_t>> b_masks_;
};

std::int64_t onemax(const Bits& x);

struct Checkpoint {
    std::uint64_t evaluations = 0;
    double ones_fraction = 0;
    int level = 0;
};

struct Result {
    bool found = false;
    std::uint64_t evaluations = 0;  // runtime if found, else the budget used
    std::vector<Checkpoint> checkpoints;
};

using Evaluator = std::function<std::int64_t(const Bits&)>;
using LevelFn = std::function<int(const Bits&)>;

/// (1+1)-EA with per-bit mutation probability c/n, accept-on-equal. Records
/// the state at each requested checkpoint (ascending); after the optimum is
/// found, remaining checkpoints repeat the final state.
Result one_plus_one_ea(std::size_t n, double c, const Evaluator& f, std::int64_t optimum, std::uint64_t budget,
                       std::uint64_t seed, const std::vector<std::uint64_t>& checkpoints = {},
                       const LevelFn& level = nullptr);

/// RLS: flip one uniform bit, accept-on-equal.
Result rls(std::size_t n, const Evaluator& f, std::int64_t optimum, std::uint64_t budget, std::uint64_t seed);

}  // namespace monoea::reference
