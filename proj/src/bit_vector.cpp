#include "monoea/bit_vector.hpp"

#include <algorithm>
#include <stdexcept>

namespace monoea {

namespace {

std::size_t word_count(std::size_t n) { return (n + 63) / 64; }

std::uint64_t tail_mask(std::size_t n) {
    const std::size_t r = n & 63;
    return r == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << r) - 1;
}

}  // namespace

BitVector::BitVector(std::size_t n) : n_(n), words_(word_count(n), 0) {}

BitVector BitVector::all_ones(std::size_t n) {
    BitVector x(n);
    std::fill(x.words_.begin(), x.words_.end(), ~std::uint64_t{0});
    if (!x.words_.empty()) x.words_.back() &= tail_mask(n);
    x.ones_ = n;
    return x;
}

BitVector BitVector::random(std::size_t n, Rng& rng) {
    BitVector x(n);
    std::size_t ones = 0;
    for (auto& w : x.words_) {
        w = rng();
    }
    if (!x.words_.empty()) x.words_.back() &= tail_mask(n);
    for (auto w : x.words_) ones += static_cast<std::size_t>(std::popcount(w));
    x.ones_ = ones;
    return x;
}

BitVector BitVector::from_string(std::string_view bits) {
    BitVector x(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') {
            x.flip(i);
        } else if (bits[i] != '0') {
            throw std::invalid_argument("bit string may only contain '0' and '1'");
        }
    }
    return x;
}

bool BitVector::test(std::size_t i) const {
    if (i >= n_) throw std::out_of_range("bit index " + std::to_string(i) + " >= " + std::to_string(n_));
    return (*this)[i];
}

void BitVector::set(std::size_t i, bool value) {
    if (test(i) != value) flip(i);
}

void BitVector::assign_words(std::span<const std::uint64_t> words) {
    if (words.size() != words_.size()) throw std::invalid_argument("word count mismatch");
    std::size_t ones = 0;
    for (std::size_t k = 0; k < words.size(); ++k) {
        words_[k] = words[k];
        ones += static_cast<std::size_t>(std::popcount(words[k]));
    }
    if (!words_.empty() && (words_.back() & ~tail_mask(n_)) != 0) {
        throw std::invalid_argument("bits set beyond vector length");
    }
    ones_ = ones;
}

bool BitVector::cache_consistent() const {
    std::size_t ones = 0;
    for (auto w : words_) ones += static_cast<std::size_t>(std::popcount(w));
    return ones == ones_;
}

std::string BitVector::to_string() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i) {
        if ((*this)[i]) s[i] = '1';
    }
    return s;
}

BitVector flip_bits(const BitVector& x, std::span<const Index> positions) {
    BitVector y = x;
    std::vector<Index> sorted(positions.begin(), positions.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        if (sorted[k] >= x.size()) {
            throw std::out_of_range("flip position " + std::to_string(sorted[k]) + " >= " +
                                    std::to_string(x.size()));
        }
        if (k > 0 && sorted[k] == sorted[k - 1]) {
            throw std::invalid_argument("duplicate flip position " + std::to_string(sorted[k]));
        }
    }
    y.flip_unchecked(positions);
    return y;
}

Density density(const BitVector& x, std::span<const Index> index_set) {
    if (index_set.empty()) throw std::invalid_argument("density of an empty index set");
    Density d;
    d.size = index_set.size();
    for (Index i : index_set) {
        if (!x.test(i)) ++d.zeros;
    }
    return d;
}

std::vector<Index> difference(const BitVector& a, const BitVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("length mismatch");
    std::vector<Index> out;
    const auto wa = a.words();
    const auto wb = b.words();
    for (std::size_t k = 0; k < wa.size(); ++k) {
        std::uint64_t d = wa[k] ^ wb[k];
        while (d != 0) {
            out.push_back(static_cast<Index>(k * 64 + static_cast<std::size_t>(std::countr_zero(d))));
            d &= d - 1;
        }
    }
    return out;
}

}  // namespace monoea
