#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "monoea/rng.hpp"

namespace monoea {

using Index = std::uint32_t;

/// Fixed-length bit string with a cached count of one-bits.
///
/// Bit i lives in word i / 64 at position i % 64. The length is fixed at
/// construction; the ones-count is kept in sync by every mutating member.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t n);

    static BitVector all_ones(std::size_t n);
    static BitVector random(std::size_t n, Rng& rng);
    /// Parses a string of '0'/'1' characters; character k becomes bit k.
    static BitVector from_string(std::string_view bits);

    std::size_t size() const noexcept { return n_; }
    std::size_t ones() const noexcept { return ones_; }
    std::size_t zeros() const noexcept { return n_ - ones_; }

    bool operator[](std::size_t i) const noexcept {
        return (words_[i >> 6] >> (i & 63)) & 1U;
    }
    bool test(std::size_t i) const;

    void set(std::size_t i, bool value);
    void flip(std::size_t i) noexcept {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        std::uint64_t& w = words_[i >> 6];
        ones_ += (w & mask) ? -1 : 1;
        w ^= mask;
    }
    /// Toggles every listed position in place. Positions are trusted to be
    /// in range and distinct (the hot path of every mutation operator).
    void flip_unchecked(std::span<const Index> positions) noexcept {
        for (Index p : positions) flip(p);
    }

    std::span<const std::uint64_t> words() const noexcept { return words_; }

    /// Replaces the contents from a word array of the same length; trailing
    /// bits beyond size() must be zero.
    void assign_words(std::span<const std::uint64_t> words);

    /// Recounts the set bits and compares against the cache.
    bool cache_consistent() const;

    std::string to_string() const;

    friend bool operator==(const BitVector& a, const BitVector& b) {
        return a.n_ == b.n_ && a.words_ == b.words_;
    }

private:
    std::size_t n_ = 0;
    std::size_t ones_ = 0;
    std::vector<std::uint64_t> words_;
};

inline std::size_t ones_count(const BitVector& x) { return x.ones(); }

/// Returns a copy of x with exactly the given positions toggled.
/// Throws std::out_of_range for a position >= n and std::invalid_argument for
/// duplicates.
BitVector flip_bits(const BitVector& x, std::span<const Index> positions);

/// Fraction of zero-bits of x inside a nonempty index set.
struct Density {
    std::size_t zeros = 0;
    std::size_t size = 0;
    double value() const { return static_cast<double>(zeros) / static_cast<double>(size); }
};

Density density(const BitVector& x, std::span<const Index> index_set);

/// Positions where a and b differ, ascending.
std::vector<Index> difference(const BitVector& a, const BitVector& b);

}  // namespace monoea
