#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "monoea/bit_vector.hpp"
#include "monoea/fitness.hpp"

namespace monoea {

FitnessValue eval_onemax(const BitVector& x);
FitnessValue eval_binval(const BitVector& x);
/// Throws ConfigError if any weight is not strictly positive.
FitnessValue eval_linear(const BitVector& x, std::span<const std::int64_t> weights);

class OneMax {
public:
    struct State {
        std::int64_t ones = 0;
    };

    explicit OneMax(std::size_t n) : n_(n) {}

    std::size_t dimension() const { return n_; }
    std::string name() const { return "onemax"; }
    FitnessValue evaluate(const BitVector& x) const { return eval_onemax(x); }
    State make_state(const BitVector& x) const { return {static_cast<std::int64_t>(x.ones())}; }
    FitnessValue fitness(const State& s) const { return FitnessValue(s.ones); }
    FitnessValue peek(const BitVector& parent, const State& s, std::span<const Index> flips) const;
    void commit(const BitVector& parent, State& s, std::span<const Index> flips) const;
    FitnessValue optimum() const { return FitnessValue(static_cast<std::int64_t>(n_)); }
    int level(const State&) const { return 0; }

private:
    std::size_t n_;
};

/// OneMax on the bit-complemented point: the optimum is all-zeros. Used to
/// check that the operators do not prefer one bit value.
class ZeroMax {
public:
    struct State {
        std::int64_t zeros = 0;
    };

    explicit ZeroMax(std::size_t n) : n_(n) {}

    std::size_t dimension() const { return n_; }
    std::string name() const { return "zeromax"; }
    FitnessValue evaluate(const BitVector& x) const {
        return FitnessValue(static_cast<std::int64_t>(x.zeros()));
    }
    State make_state(const BitVector& x) const { return {static_cast<std::int64_t>(x.zeros())}; }
    FitnessValue fitness(const State& s) const { return FitnessValue(s.zeros); }
    FitnessValue peek(const BitVector& parent, const State& s, std::span<const Index> flips) const;
    void commit(const BitVector& parent, State& s, std::span<const Index> flips) const;
    FitnessValue optimum() const { return FitnessValue(static_cast<std::int64_t>(n_)); }
    int level(const State&) const { return 0; }

private:
    std::size_t n_;
};

class BinVal {
public:
    struct State {
        // Never empty, so that a keyed value is distinguishable from a scalar.
        std::vector<std::uint64_t> key;
    };

    explicit BinVal(std::size_t n) : n_(n) {}

    std::size_t dimension() const { return n_; }
    std::string name() const { return "binval"; }
    FitnessValue evaluate(const BitVector& x) const { return eval_binval(x); }
    State make_state(const BitVector& x) const;
    FitnessValue fitness(const State& s) const { return FitnessValue(0, s.key); }
    FitnessValue peek(const BitVector& parent, const State& s, std::span<const Index> flips) const;
    void commit(const BitVector& parent, State& s, std::span<const Index> flips) const;
    FitnessValue optimum() const { return eval_binval(BitVector::all_ones(n_)); }
    int level(const State&) const { return 0; }

private:
    std::size_t n_;
};

/// f(x) = sum_i w_i x_i with strictly positive integer weights.
class Linear {
public:
    struct State {
        std::int64_t value = 0;
    };

    /// Throws ConfigError on a non-positive weight.
    explicit Linear(std::vector<std::int64_t> weights);
    /// Weights drawn uniformly from {1, ..., n^2}.
    static Linear random(std::size_t n, std::uint64_t seed);

    std::size_t dimension() const { return weights_.size(); }
    std::string name() const { return "linear"; }
    std::span<const std::int64_t> weights() const { return weights_; }
    FitnessValue evaluate(const BitVector& x) const { return eval_linear(x, weights_); }
    State make_state(const BitVector& x) const { return {eval_linear(x, weights_).scalar()}; }
    FitnessValue fitness(const State& s) const { return FitnessValue(s.value); }
    FitnessValue peek(const BitVector& parent, const State& s, std::span<const Index> flips) const;
    void commit(const BitVector& parent, State& s, std::span<const Index> flips) const;
    FitnessValue optimum() const { return FitnessValue(total_); }
    int level(const State&) const { return 0; }

private:
    std::vector<std::int64_t> weights_;
    std::int64_t total_ = 0;
};

static_assert(FitnessOracle<OneMax>);
static_assert(FitnessOracle<ZeroMax>);
static_assert(FitnessOracle<BinVal>);
static_assert(FitnessOracle<Linear>);

}  // namespace monoea
