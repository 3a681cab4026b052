#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "monoea/bit_vector.hpp"

using namespace monoea;

TEST_CASE("ones_count") {
    CHECK(ones_count(BitVector(8)) == 0);
    CHECK(ones_count(BitVector::all_ones(8)) == 8);
    CHECK(ones_count(BitVector::from_string("10110000")) == 3);
}

TEST_CASE("from_string and to_string round trip") {
    const std::string s = "0110100111010001010101111000011110101";
    const auto x = BitVector::from_string(s);
    CHECK(x.to_string() == s);
    CHECK(x[1]);
    CHECK_FALSE(x[0]);
    CHECK_THROWS_AS(BitVector::from_string("01x"), std::invalid_argument);
}

TEST_CASE("flip_bits") {
    const std::vector<Index> s13{1, 3};
    const auto y = flip_bits(BitVector(4), s13);
    CHECK(y.to_string() == "0101");
    CHECK(y.ones() == 2);

    const auto x = BitVector::from_string("1011");
    CHECK(flip_bits(x, {}) == x);

    const std::vector<Index> all{0, 1, 2, 3};
    CHECK(flip_bits(BitVector::all_ones(4), all) == BitVector(4));

    const std::vector<Index> bad{4};
    CHECK_THROWS_AS(flip_bits(x, bad), std::out_of_range);
    const std::vector<Index> dup{2, 2};
    CHECK_THROWS_AS(flip_bits(x, dup), std::invalid_argument);
}

TEST_CASE("flip_bits is an involution and keeps the cache consistent") {
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + uniform_below(rng, 300);
        const auto x = BitVector::random(n, rng);
        std::vector<Index> all(n);
        std::iota(all.begin(), all.end(), 0);
        std::vector<Index> s;
        for (Index i : all) {
            if (coin(rng)) s.push_back(i);
        }
        std::shuffle(s.begin(), s.end(), rng);
        const auto y = flip_bits(x, s);
        CHECK(y.cache_consistent());
        CHECK(difference(x, y).size() == s.size());
        CHECK(flip_bits(y, s) == x);
    }
}

TEST_CASE("random vectors respect the length and have consistent caches") {
    Rng rng(3);
    for (std::size_t n : {1, 63, 64, 65, 1000}) {
        const auto x = BitVector::random(n, rng);
        CHECK(x.size() == n);
        CHECK(x.cache_consistent());
        CHECK(x.ones() + x.zeros() == n);
    }
}

TEST_CASE("density") {
    const std::vector<Index> set{0, 1, 2, 3};
    CHECK(density(BitVector::all_ones(6), set).value() == 0.0);
    CHECK(density(BitVector(6), set).value() == 1.0);
    CHECK(density(BitVector::from_string("1010"), set).value() == 0.5);
    CHECK_THROWS(density(BitVector(4), {}));
}

TEST_CASE("ones equals n minus n times the density of [n]") {
    Rng rng(5);
    const std::size_t n = 257;
    std::vector<Index> all(n);
    std::iota(all.begin(), all.end(), 0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = BitVector::random(n, rng);
        const auto d = density(x, all);
        CHECK(x.ones() == n - d.zeros);
    }
}

TEST_CASE("set, test and assign_words") {
    BitVector x(70);
    x.set(69, true);
    x.set(3, true);
    x.set(3, false);
    CHECK(x.ones() == 1);
    CHECK(x.test(69));
    CHECK_THROWS_AS(x.test(70), std::out_of_range);

    BitVector y(70);
    y.assign_words(x.words());
    CHECK(y == x);
    const std::vector<std::uint64_t> overflow{0, ~std::uint64_t{0}};
    CHECK_THROWS_AS(y.assign_words(overflow), std::invalid_argument);
}
