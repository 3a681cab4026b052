#include "monoea/benchmarks.hpp"

#include <cstdio>
#include <limits>

#include "monoea/errors.hpp"

namespace monoea {

namespace {

std::uint64_t reverse_bits(std::uint64_t v) {
    v = ((v >> 1) & 0x5555555555555555ULL) | ((v & 0x5555555555555555ULL) << 1);
    v = ((v >> 2) & 0x3333333333333333ULL) | ((v & 0x3333333333333333ULL) << 2);
    v = ((v >> 4) & 0x0f0f0f0f0f0f0f0fULL) | ((v & 0x0f0f0f0f0f0f0f0fULL) << 4);
    v = ((v >> 8) & 0x00ff00ff00ff00ffULL) | ((v & 0x00ff00ff00ff00ffULL) << 8);
    v = ((v >> 16) & 0x0000ffff0000ffffULL) | ((v & 0x0000ffff0000ffffULL) << 16);
    return (v >> 32) | (v << 32);
}

// Position i maps to bit 63 - (i % 64) of key word i / 64.
void toggle_key(std::vector<std::uint64_t>& key, Index i) {
    key[i >> 6] ^= std::uint64_t{1} << (63 - (i & 63));
}

std::int64_t sign_of_flip(const BitVector& parent, Index i) { return parent[i] ? -1 : 1; }

}  // namespace

std::string FitnessValue::to_string() const {
    if (key_.empty()) return std::to_string(scalar_);
    std::string out = "0x";
    char buf[17];
    for (auto w : key_) {
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(w));
        out += buf;
    }
    return out;
}

FitnessValue eval_onemax(const BitVector& x) {
    return FitnessValue(static_cast<std::int64_t>(x.ones()));
}

FitnessValue eval_binval(const BitVector& x) {
    const BinVal f(x.size());
    return f.fitness(f.make_state(x));
}

FitnessValue eval_linear(const BitVector& x, std::span<const std::int64_t> weights) {
    if (weights.size() != x.size()) throw ConfigError("linear weight count does not match dimension");
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0) throw ConfigError("linear weights must be strictly positive");
        if (x[i]) sum += weights[i];
    }
    return FitnessValue(sum);
}

FitnessValue OneMax::peek(const BitVector& parent, const State& s, std::span<const Index> flips) const {
    std::int64_t v = s.ones;
    for (Index i : flips) v += sign_of_flip(parent, i);
    return FitnessValue(v);
}

void OneMax::commit(const BitVector& parent, State& s, std::span<const Index> flips) const {
    for (Index i : flips) s.ones += sign_of_flip(parent, i);
}

FitnessValue ZeroMax::peek(const BitVector& parent, const State& s, std::span<const Index> flips) const {
    std::int64_t v = s.zeros;
    for (Index i : flips) v -= sign_of_flip(parent, i);
    return FitnessValue(v);
}

void ZeroMax::commit(const BitVector& parent, State& s, std::span<const Index> flips) const {
    for (Index i : flips) s.zeros -= sign_of_flip(parent, i);
}

BinVal::State BinVal::make_state(const BitVector& x) const {
    std::vector<std::uint64_t> key;
    key.reserve(x.words().size() + 1);
    for (auto w : x.words()) key.push_back(reverse_bits(w));
    if (key.empty()) key.push_back(0);
    return {std::move(key)};
}

FitnessValue BinVal::peek(const BitVector&, const State& s, std::span<const Index> flips) const {
    auto key = s.key;
    for (Index i : flips) toggle_key(key, i);
    return FitnessValue(0, std::move(key));
}

void BinVal::commit(const BitVector&, State& s, std::span<const Index> flips) const {
    for (Index i : flips) toggle_key(s.key, i);
}

Linear::Linear(std::vector<std::int64_t> weights) : weights_(std::move(weights)) {
    for (auto w : weights_) {
        if (w <= 0) throw ConfigError("linear weights must be strictly positive");
        if (total_ > std::numeric_limits<std::int64_t>::max() - w) throw ConfigError("linear weights overflow");
        total_ += w;
    }
}

Linear Linear::random(std::size_t n, std::uint64_t seed) {
    Rng rng(mix_seed(seed, 0x11ea7ULL));
    const std::uint64_t hi = static_cast<std::uint64_t>(n) * n;
    std::vector<std::int64_t> w(n);
    for (auto& wi : w) wi = static_cast<std::int64_t>(1 + uniform_below(rng, hi));
    return Linear(std::move(w));
}

FitnessValue Linear::peek(const BitVector& parent, const State& s, std::span<const Index> flips) const {
    std::int64_t v = s.value;
    for (Index i : flips) v += sign_of_flip(parent, i) * weights_[i];
    return FitnessValue(v);
}

void Linear::commit(const BitVector& parent, State& s, std::span<const Index> flips) const {
    for (Index i : flips) s.value += sign_of_flip(parent, i) * weights_[i];
}

}  // namespace monoea
