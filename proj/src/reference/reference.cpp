#include "reference.hpp"

#include <bit>
#include <random>

namespace monoea::reference {

MaskedHotTopic::MaskedHotTopic(const HotTopicInstance& inst)
    : n_(inst.dimension()),
      words_((inst.dimension() + 63) / 64),
      levels_(inst.num_levels()),
      threshold_(inst.params().eps * inst.params().beta * static_cast<double>(inst.dimension())) {
    for (std::size_t i = 1; i <= levels_; ++i) {
        const auto& sets = inst.level_sets(i);
        std::vector<std::uint64_t> a(words_, 0), b(words_, 0);
        for (auto p : sets.a) a[p / 64] |= std::uint64_t{1} << (p % 64);
        for (auto p : sets.b) b[p / 64] |= std::uint64_t{1} << (p % 64);
        a_masks_.push_back(std::move(a));
        b_masks_.push_back(std::move(b));
    }
}

std::vector<std::uint64_t> MaskedHotTopic::pack(const Bits& x) const {
    std::vector<std::uint64_t> w(words_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
        if (x[i]) w[i / 64] |= std::uint64_t{1} << (i % 64);
    }
    return w;
}

int MaskedHotTopic::level_of(const std::vector<std::uint64_t>& w) const {
    int best = 0;
    for (std::size_t i = 0; i < levels_; ++i) {
        int zeros = 0;
        for (std::size_t k = 0; k < words_; ++k) zeros += std::popcount(b_masks_[i][k] & ~w[k]);
        // 1e-9 absorbs binary rounding of the product of decimal inputs.
        if (zeros <= threshold_ + 1e-9) best = static_cast<int>(i + 1);
    }
    return best;
}

int MaskedHotTopic::level(const Bits& x) const { return level_of(pack(x)); }

std::int64_t MaskedHotTopic::value(const Bits& x) const {
    const auto w = pack(x);
    const int l = level_of(w);
    std::int64_t hot = 0, ones = 0;
    for (std::size_t k = 0; k < words_; ++k) {
        ones += std::popcount(w[k]);
        if (static_cast<std::size_t>(l) < levels_) hot += std::popcount(a_masks_[static_cast<std::size_t>(l)][k] & w[k]);
    }
    const auto n = static_cast<std::int64_t>(n_);
    return l * n * n + n * hot + (ones - hot);
}

std::int64_t MaskedHotTopic::optimum() const { return value(Bits(n_, 1)); }

std::int64_t onemax(const Bits& x) {
    std::int64_t s = 0;
    for (auto b : x) s += b;
    return s;
}

namespace {

Bits random_bits(std::size_t n, std::mt19937& gen) {
    std::bernoulli_distribution half(0.5);
    Bits x(n);
    for (auto& b : x) b = half(gen) ? 1 : 0;
    return x;
}

double fraction(const Bits& x) {
    return static_cast<double>(onemax(x)) / static_cast<double>(x.size());
}

void record(Result& r, const Bits& x, const std::vector<std::uint64_t>& cps, std::size_t& next, std::uint64_t evals,
            const LevelFn& level) {
    while (next < cps.size() && cps[next] <= evals) {
        r.checkpoints.push_back({cps[next], fraction(x), level ? level(x) : 0});
        ++next;
    }
}

}  // namespace

Result one_plus_one_ea(std::size_t n, double c, const Evaluator& f, std::int64_t optimum, std::uint64_t budget,
                       std::uint64_t seed, const std::vector<std::uint64_t>& checkpoints, const LevelFn& level) {
    std::mt19937 gen(static_cast<std::mt19937::result_type>(seed ^ (seed >> 32)));
    std::geometric_distribution<std::uint64_t> gap(c / static_cast<double>(n));
    Result r;
    std::size_t next = 0;
    Bits x = random_bits(n, gen);
    std::int64_t fx = f(x);
    r.evaluations = 1;
    record(r, x, checkpoints, next, r.evaluations, level);
    if (fx == optimum) {
        r.found = true;
    } else {
        Bits y;
        while (r.evaluations < budget) {
            y = x;
            for (std::uint64_t pos = gap(gen); pos < n; pos += 1 + gap(gen)) y[pos] ^= 1;
            const std::int64_t fy = f(y);
            ++r.evaluations;
            if (fy >= fx) {
                x.swap(y);
                fx = fy;
            }
            record(r, x, checkpoints, next, r.evaluations, level);
            if (fx == optimum) {
                r.found = true;
                break;
            }
        }
    }
    record(r, x, checkpoints, next, UINT64_MAX, level);
    return r;
}

Result rls(std::size_t n, const Evaluator& f, std::int64_t optimum, std::uint64_t budget, std::uint64_t seed) {
    std::mt19937 gen(static_cast<std::mt19937::result_type>(seed ^ (seed >> 32)));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    Result r;
    Bits x = random_bits(n, gen);
    std::int64_t fx = f(x);
    r.evaluations = 1;
    while (fx != optimum && r.evaluations < budget) {
        const std::size_t i = pick(gen);
        x[i] ^= 1;
        const std::int64_t fy = f(x);
        ++r.evaluations;
        if (fy >= fx) {
            fx = fy;
        } else {
            x[i] ^= 1;
        }
    }
    r.found = fx == optimum;
    return r;
}

}  // namespace monoea::reference
