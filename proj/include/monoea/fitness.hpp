#pragma once

#include <compare>
#include <concepts>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "monoea/bit_vector.hpp"

namespace monoea {

/// Totally ordered fitness. Integer-valued functions use only the scalar part;
/// BinVal stores the bit string as an MSB-first word key so that the induced
/// order equals the order of the (possibly huge) binary value.
class FitnessValue {
public:
    FitnessValue() = default;
    explicit FitnessValue(std::int64_t scalar) : scalar_(scalar) {}
    FitnessValue(std::int64_t scalar, std::vector<std::uint64_t> key)
        : scalar_(scalar), key_(std::move(key)) {}

    std::int64_t scalar() const noexcept { return scalar_; }
    bool has_key() const noexcept { return !key_.empty(); }

    /// Decimal for scalar values, "0x..." MSB-first hex for keyed values.
    std::string to_string() const;

    friend auto operator<=>(const FitnessValue&, const FitnessValue&) = default;
    friend bool operator==(const FitnessValue&, const FitnessValue&) = default;

private:
    std::int64_t scalar_ = 0;
    std::vector<std::uint64_t> key_;
};

/// What the algorithms need from a fitness function. Each oracle keeps a
/// per-individual State so that offspring that differ from a parent in a few
/// positions can be evaluated without a full scan.
///
/// - peek(parent, state, flips): fitness of parent with `flips` toggled.
/// - commit(parent, state, flips): updates state for that move; called
///   before the caller toggles the bits of parent.
template <class F>
concept FitnessOracle = requires(const F& f, const BitVector& x, typename F::State& st,
                                 const typename F::State& cst, std::span<const Index> flips) {
    { f.dimension() } -> std::convertible_to<std::size_t>;
    { f.evaluate(x) } -> std::same_as<FitnessValue>;
    { f.make_state(x) } -> std::same_as<typename F::State>;
    { f.fitness(cst) } -> std::same_as<FitnessValue>;
    { f.peek(x, cst, flips) } -> std::same_as<FitnessValue>;
    { f.commit(x, st, flips) };
    { f.optimum() } -> std::same_as<FitnessValue>;
    { f.level(cst) } -> std::convertible_to<int>;
    { f.name() } -> std::convertible_to<std::string>;
};

}  // namespace monoea
