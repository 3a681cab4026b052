#include "monoea/hottopic.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <mutex>
#include <unordered_map>

#include <json.hpp>

#include "monoea/errors.hpp"
#include "monoea/rng.hpp"

namespace monoea {

std::size_t HotTopicParams::a_size() const {
    return static_cast<std::size_t>(std::floor(alpha * static_cast<double>(n)));
}

std::size_t HotTopicParams::b_size() const {
    return static_cast<std::size_t>(std::floor(beta * static_cast<double>(n)));
}

int HotTopicParams::max_zeros() const {
    const long double t = static_cast<long double>(eps) * beta * static_cast<long double>(n);
    return static_cast<int>(std::floor(t * (1.0L + 1e-9L)));
}

void HotTopicParams::validate() const {
    if (n < 2) throw ConfigError("hottopic: n must be at least 2");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("hottopic: alpha must lie in (0, 1)");
    if (!(beta > 0.0 && beta <= alpha)) throw ConfigError("hottopic: beta must lie in (0, alpha]");
    if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("hottopic: eps must lie in (0, 1)");
    if (b_size() == 0) throw ConfigError("hottopic: floor(beta n) must be at least 1");
    if (levels == 0) throw ConfigError("hottopic: number of levels must be at least 1");
    if (n > UINT32_MAX) throw ConfigError("hottopic: n too large");
}

struct HotTopicInstance::Impl {
    HotTopicParams params;
    std::size_t words = 0;
    std::unique_ptr<std::once_flag[]> level_once;
    std::vector<LevelSets> levels;
    std::atomic<std::size_t> materialized{0};

    std::once_flag index_once;
    std::vector<std::uint32_t> b_offsets, b_levels;
    std::vector<std::uint32_t> a_offsets, a_levels;
    std::vector<std::uint64_t> a_bits;  // L rows of `words` words

    const LevelSets& level(std::size_t i) {
        std::call_once(level_once[i - 1], [&] {
            levels[i - 1] = generate(i);
            materialized.fetch_add(1, std::memory_order_relaxed);
        });
        return levels[i - 1];
    }

    LevelSets generate(std::size_t i) const {
        Rng rng(mix_seed(params.seed, i));
        const std::size_t n = params.n;
        const std::size_t ka = params.a_size();
        const std::size_t kb = params.b_size();

        // Partial Fisher-Yates over [0, n) with sparse storage of displaced slots.
        std::unordered_map<Index, Index> moved;
        moved.reserve(2 * ka);
        auto slot = [&](Index k) {
            auto it = moved.find(k);
            return it == moved.end() ? k : it->second;
        };
        LevelSets out;
        out.a.reserve(ka);
        for (std::size_t j = 0; j < ka; ++j) {
            const auto r = static_cast<Index>(j + uniform_below(rng, n - j));
            const Index vj = slot(static_cast<Index>(j));
            const Index vr = slot(r);
            moved[r] = vj;
            moved[static_cast<Index>(j)] = vr;
            out.a.push_back(vr);
        }
        // Partial Fisher-Yates over the members of A.
        std::vector<Index> pool = out.a;
        out.b.reserve(kb);
        for (std::size_t j = 0; j < kb; ++j) {
            const auto r = j + uniform_below(rng, pool.size() - j);
            std::swap(pool[j], pool[r]);
            out.b.push_back(pool[j]);
        }
        std::sort(out.a.begin(), out.a.end());
        std::sort(out.b.begin(), out.b.end());
        return out;
    }

    void build_index() {
        std::call_once(index_once, [&] {
            const std::size_t n = params.n;
            const std::size_t L = params.levels;
            b_offsets.assign(n + 1, 0);
            a_offsets.assign(n + 1, 0);
            for (std::size_t i = 1; i <= L; ++i) {
                const auto& s = level(i);
                for (Index p : s.b) ++b_offsets[p + 1];
                for (Index p : s.a) ++a_offsets[p + 1];
            }
            for (std::size_t p = 0; p < n; ++p) {
                b_offsets[p + 1] += b_offsets[p];
                a_offsets[p + 1] += a_offsets[p];
            }
            b_levels.resize(b_offsets[n]);
            a_levels.resize(a_offsets[n]);
            a_bits.assign(L * words, 0);
            auto b_fill = std::vector<std::uint32_t>(b_offsets.begin(), b_offsets.end() - 1);
            auto a_fill = std::vector<std::uint32_t>(a_offsets.begin(), a_offsets.end() - 1);
            for (std::size_t i = 1; i <= L; ++i) {
                const auto li = static_cast<std::uint32_t>(i - 1);
                const auto& s = levels[i - 1];
                for (Index p : s.b) b_levels[b_fill[p]++] = li;
                for (Index p : s.a) {
                    a_levels[a_fill[p]++] = li;
                    a_bits[li * words + (p >> 6)] |= std::uint64_t{1} << (p & 63);
                }
            }
        });
    }
};

HotTopicInstance::HotTopicInstance(const HotTopicParams& params) : impl_(std::make_shared<Impl>()) {
    params.validate();
    impl_->params = params;
    impl_->words = (params.n + 63) / 64;
    impl_->level_once = std::make_unique<std::once_flag[]>(params.levels);
    impl_->levels.resize(params.levels);
}

const HotTopicParams& HotTopicInstance::params() const { return impl_->params; }

const LevelSets& HotTopicInstance::level_sets(std::size_t i) const {
    if (i < 1 || i > impl_->params.levels) throw std::out_of_range("level index out of range");
    return impl_->level(i);
}

std::size_t HotTopicInstance::materialized_levels() const {
    return impl_->materialized.load(std::memory_order_relaxed);
}

std::span<const std::uint32_t> HotTopicInstance::levels_containing_b(Index pos) const {
    impl_->build_index();
    const auto& o = impl_->b_offsets;
    return {impl_->b_levels.data() + o[pos], o[pos + 1] - o[pos]};
}

std::span<const std::uint32_t> HotTopicInstance::levels_containing_a(Index pos) const {
    impl_->build_index();
    const auto& o = impl_->a_offsets;
    return {impl_->a_levels.data() + o[pos], o[pos + 1] - o[pos]};
}

bool HotTopicInstance::in_a(std::size_t level, Index pos) const {
    impl_->build_index();
    return (impl_->a_bits[(level - 1) * impl_->words + (pos >> 6)] >> (pos & 63)) & 1U;
}

bool HotTopicInstance::index_consistent() const {
    const std::size_t n = impl_->params.n;
    const std::size_t L = impl_->params.levels;
    std::vector<std::vector<std::uint32_t>> b_expect(n), a_expect(n);
    for (std::size_t i = 1; i <= L; ++i) {
        const auto& s = level_sets(i);
        if (!std::includes(s.a.begin(), s.a.end(), s.b.begin(), s.b.end())) return false;
        for (Index p : s.b) b_expect[p].push_back(static_cast<std::uint32_t>(i - 1));
        for (Index p : s.a) a_expect[p].push_back(static_cast<std::uint32_t>(i - 1));
    }
    for (Index p = 0; p < n; ++p) {
        auto b = levels_containing_b(p);
        auto a = levels_containing_a(p);
        if (!std::equal(b.begin(), b.end(), b_expect[p].begin(), b_expect[p].end())) return false;
        if (!std::equal(a.begin(), a.end(), a_expect[p].begin(), a_expect[p].end())) return false;
        for (std::size_t i = 1; i <= L; ++i) {
            const bool member = std::binary_search(level_sets(i).a.begin(), level_sets(i).a.end(), p);
            if (member != in_a(i, p)) return false;
        }
    }
    return true;
}

std::string HotTopicInstance::to_json() const {
    const auto& p = impl_->params;
    nlohmann::json j;
    j["params"] = {{"n", p.n},       {"alpha", p.alpha},   {"beta", p.beta},
                   {"eps", p.eps},   {"levels", p.levels}, {"seed", p.seed}};
    auto arr = nlohmann::json::array();
    for (std::size_t i = 1; i <= p.levels; ++i) {
        const auto& s = level_sets(i);
        arr.push_back({{"level", i}, {"a", s.a}, {"b", s.b}});
    }
    j["levels"] = std::move(arr);
    return j.dump();
}

int level(const HotTopicInstance& inst, const BitVector& x) {
    const int max_zeros = inst.params().max_zeros();
    for (std::size_t i = inst.num_levels(); i >= 1; --i) {
        int zeros = 0;
        for (Index p : inst.level_sets(i).b) zeros += x[p] ? 0 : 1;
        if (zeros <= max_zeros) return static_cast<int>(i);
    }
    return 0;
}

FitnessValue eval_ht(const HotTopicInstance& inst, const BitVector& x) {
    const auto n = static_cast<std::int64_t>(inst.dimension());
    const int lvl = level(inst, x);
    std::int64_t hot = 0;
    if (static_cast<std::size_t>(lvl) < inst.num_levels()) {
        for (Index p : inst.level_sets(static_cast<std::size_t>(lvl) + 1).a) hot += x[p] ? 1 : 0;
    }
    const auto ones = static_cast<std::int64_t>(x.ones());
    return FitnessValue(lvl * n * n + n * hot + (ones - hot));
}

HotTopic::HotTopic(HotTopicInstance inst)
    : inst_(std::move(inst)),
      n_(static_cast<std::int64_t>(inst_.dimension())),
      max_zeros_(inst_.params().max_zeros()),
      levels_(static_cast<std::int32_t>(inst_.num_levels())) {
    // Materialize everything up front so that concurrent runs only read.
    (void)inst_.levels_containing_b(0);
}

HotTopic::State HotTopic::make_state(const BitVector& x) const {
    State s;
    s.zeros_b.resize(static_cast<std::size_t>(levels_));
    s.ones_a.resize(static_cast<std::size_t>(levels_));
    s.level = 0;
    for (std::int32_t i = levels_; i >= 1; --i) {
        const auto& sets = inst_.level_sets(static_cast<std::size_t>(i));
        std::int32_t z = 0;
        for (Index p : sets.b) z += x[p] ? 0 : 1;
        std::int32_t o = 0;
        for (Index p : sets.a) o += x[p] ? 1 : 0;
        s.zeros_b[static_cast<std::size_t>(i - 1)] = z;
        s.ones_a[static_cast<std::size_t>(i - 1)] = o;
        if (s.level == 0 && z <= max_zeros_) s.level = i;
    }
    s.ones = static_cast<std::int64_t>(x.ones());
    return s;
}

std::int64_t HotTopic::value(int lvl, std::int64_t ones_in_hot, std::int64_t ones) const {
    return lvl * n_ * n_ + n_ * ones_in_hot + (ones - ones_in_hot);
}

FitnessValue HotTopic::fitness(const State& s) const {
    const std::int64_t hot = s.level < levels_ ? s.ones_a[static_cast<std::size_t>(s.level)] : 0;
    return FitnessValue(value(s.level, hot, s.ones));
}

FitnessValue HotTopic::optimum() const {
    return FitnessValue(value(levels_, 0, n_));
}

int HotTopic::child_level(const State& s, std::vector<Delta>& deltas) const {
    std::sort(deltas.begin(), deltas.end(), [](const Delta& a, const Delta& b) { return a.level < b.level; });
    std::size_t w = 0;
    for (std::size_t r = 0; r < deltas.size(); ++r) {
        if (w > 0 && deltas[w - 1].level == deltas[r].level) {
            deltas[w - 1].change += deltas[r].change;
        } else {
            deltas[w++] = deltas[r];
        }
    }
    deltas.resize(w);

    auto new_zeros = [&](std::uint32_t li) {
        auto it = std::lower_bound(deltas.begin(), deltas.end(), li,
                                   [](const Delta& d, std::uint32_t v) { return d.level < v; });
        const std::int32_t base = s.zeros_b[li];
        return (it != deltas.end() && it->level == li) ? base + it->change : base;
    };

    // Every level above the parent's has more than max_zeros zeros, so only
    // touched levels can become the new maximum.
    int best_touched = 0;
    for (auto it = deltas.rbegin(); it != deltas.rend(); ++it) {
        if (s.zeros_b[it->level] + it->change <= max_zeros_) {
            best_touched = static_cast<int>(it->level) + 1;
            break;
        }
    }
    if (best_touched > s.level) return best_touched;
    if (s.level == 0 || new_zeros(static_cast<std::uint32_t>(s.level - 1)) <= max_zeros_) return s.level;
    // The parent's level lost its status; scan downward.
    for (int i = s.level - 1; i >= 1; --i) {
        if (new_zeros(static_cast<std::uint32_t>(i - 1)) <= max_zeros_) return i;
    }
    return 0;
}

FitnessValue HotTopic::peek(const BitVector& parent, const State& s, std::span<const Index> flips) const {
    if (flips.empty()) return fitness(s);
    thread_local std::vector<Delta> deltas;
    deltas.clear();
    std::int64_t ones = s.ones;
    for (Index p : flips) {
        const bool was_one = parent[p];
        ones += was_one ? -1 : 1;
        for (auto li : inst_.levels_containing_b(p)) deltas.push_back({li, was_one ? 1 : -1});
    }
    const int lvl = child_level(s, deltas);
    std::int64_t hot = 0;
    if (lvl < levels_) {
        hot = s.ones_a[static_cast<std::size_t>(lvl)];
        for (Index p : flips) {
            if (inst_.in_a(static_cast<std::size_t>(lvl) + 1, p)) hot += parent[p] ? -1 : 1;
        }
    }
    return FitnessValue(value(lvl, hot, ones));
}

void HotTopic::commit(const BitVector& parent, State& s, std::span<const Index> flips) const {
    if (flips.empty()) return;
    thread_local std::vector<Delta> deltas;
    deltas.clear();
    for (Index p : flips) {
        const bool was_one = parent[p];
        s.ones += was_one ? -1 : 1;
        for (auto li : inst_.levels_containing_b(p)) deltas.push_back({li, was_one ? 1 : -1});
        for (auto li : inst_.levels_containing_a(p)) s.ones_a[li] += was_one ? -1 : 1;
    }
    const int lvl = child_level(s, deltas);
    for (const auto& d : deltas) s.zeros_b[d.level] += d.change;
    s.level = lvl;
}

bool HotTopic::consistent(const BitVector& x, const State& s) const {
    const State fresh = make_state(x);
    return fresh.zeros_b == s.zeros_b && fresh.ones_a == s.ones_a && fresh.level == s.level &&
           fresh.ones == s.ones;
}

LevelState make_level_state(const HotTopic& f, BitVector x) {
    auto counts = f.make_state(x);
    return {std::move(x), std::move(counts)};
}

std::pair<FitnessValue, LevelState> eval_ht_incremental(const HotTopic& f, LevelState state,
                                                        std::span<const Index> flipped) {
    assert(f.consistent(state.x, state.counts));
    f.commit(state.x, state.counts, flipped);
    state.x.flip_unchecked(flipped);
    FitnessValue v = f.fitness(state.counts);
    return {std::move(v), std::move(state)};
}

}  // namespace monoea
