#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "monoea/errors.hpp"
#include "monoea/flip_distribution.hpp"

using namespace monoea;
using doctest::Approx;

namespace {

double total_mass(const FlipCountDistribution& d) {
    long double s = 0;
    for (double p : d.probabilities()) s += p;
    return static_cast<double>(s);
}

// Moments of s and s(s-1) straight from the pmf, for the standard errors.
struct RawMoments {
    double mean1 = 0, var1 = 0, mean2 = 0, var2 = 0;
};

RawMoments raw_moments(const FlipCountDistribution& d) {
    long double e1 = 0, e11 = 0, e2 = 0, e22 = 0;
    for (std::size_t k = 0; k <= d.max_support(); ++k) {
        const long double p = d.pmf(k), s = static_cast<long double>(k), f = s * (s - 1);
        e1 += p * s;
        e11 += p * s * s;
        e2 += p * f;
        e22 += p * f * f;
    }
    return {static_cast<double>(e1), static_cast<double>(e11 - e1 * e1), static_cast<double>(e2),
            static_cast<double>(e22 - e2 * e2)};
}

}  // namespace

TEST_CASE("point mass samples") {
    const auto d = FlipCountDistribution::point_mass(3);
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) REQUIRE(d.sample(rng) == 3);
    CHECK(d.pmf(3) == 1.0);
    CHECK(d.pmf(2) == 0.0);
    CHECK(d.pmf(4) == 0.0);
}

TEST_CASE("binomial sample mean") {
    const std::size_t n = 10000;
    const auto d = FlipCountDistribution::binomial(n, 1.0);
    Rng rng(2);
    const int N = 1000000;
    double sum = 0;
    for (int i = 0; i < N; ++i) sum += static_cast<double>(d.sample(rng));
    const double sigma = std::sqrt(1.0 * (1.0 - 1.0 / n) / N);
    CHECK(std::fabs(sum / N - 1.0) < 3 * sigma);
}

TEST_CASE("zipf sample ratio of the first two masses") {
    const auto d = FlipCountDistribution::zipf(2.0, 10000);
    Rng rng(3);
    std::size_t c1 = 0, c2 = 0;
    for (int i = 0; i < 1000000; ++i) {
        const auto s = d.sample(rng);
        c1 += s == 1;
        c2 += s == 2;
    }
    CHECK(static_cast<double>(c1) / static_cast<double>(c2) == Approx(4.0).epsilon(0.05));
}

TEST_CASE("moment examples") {
    SUBCASE("Poisson(2)") {
        const auto d = FlipCountDistribution::poisson(2.0, 1000);
        const auto m = d.moments();
        CHECK(m.m1 == 2.0);
        CHECK(m.m2 == 4.0);
        const auto raw = raw_moments(d);
        CHECK(raw.mean1 == Approx(2.0).epsilon(1e-12));
        CHECK(raw.mean2 == Approx(4.0).epsilon(1e-12));
    }
    SUBCASE("PointMass(3)") {
        const auto m = FlipCountDistribution::point_mass(3).moments();
        CHECK(m.m1 == 3.0);
        CHECK(m.m2 == 6.0);
    }
    SUBCASE("Table(p1 = p3 = 1/2)") {
        const auto d = FlipCountDistribution::table({0.0, 0.5, 0.0, 0.5});
        const auto m = d.moments(0.5);
        CHECK(m.m1 == Approx(2.0));
        CHECK(m.m2 == Approx(3.0));
        CHECK(m.ratio() == Approx(1.5));
        REQUIRE(m.s0.has_value());
        CHECK(*m.s0 == 3);
        CHECK(d.m2_truncated(3) == Approx(3.0));
        CHECK(m.p0 == 0.0);
        CHECK(m.p1 == 0.5);
    }
}

TEST_CASE("pmf examples") {
    CHECK(FlipCountDistribution::poisson(1.0, 100).pmf(0) == Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(FlipCountDistribution::zipf(2.0, 1000000).pmf(1) == Approx(6.0 / (std::numbers::pi * std::numbers::pi)).epsilon(1e-3));
}

TEST_CASE("every variant sums to one") {
    const std::vector<FlipCountDistribution> ds{
        FlipCountDistribution::binomial(100, 3.0),   FlipCountDistribution::binomial(1000000, 0.9),
        FlipCountDistribution::poisson(4.0, 10000),  FlipCountDistribution::poisson(30.0, 10),
        FlipCountDistribution::zipf(1.5, 100000),    FlipCountDistribution::zipf(3.0, 50),
        FlipCountDistribution::point_mass(0),        FlipCountDistribution::table({0.2, 0.3, 0.0, 0.5}),
    };
    for (const auto& d : ds) {
        CHECK(total_mass(d) == Approx(1.0).epsilon(1e-12));
        for (double p : d.probabilities()) CHECK(p >= 0.0);
    }
}

TEST_CASE("binomial supports are bounded by n and Poisson is capped") {
    CHECK(FlipCountDistribution::binomial(10, 9.5).max_support() <= 10);
    const auto p = FlipCountDistribution::poisson(30.0, 10);
    CHECK(p.max_support() == 10);
    CHECK(p.moments().truncated_mass > 0.9);
    CHECK(FlipCountDistribution::zipf(1.5, 64).max_support() == 64);
}

TEST_CASE("binomial ratio m2/m1 = c (1 - 1/n)") {
    const double c = 1.7;
    for (std::size_t n : {100, 10000, 1000000}) {
        const auto d = FlipCountDistribution::binomial(n, c);
        const auto m = d.moments();
        const double expected = c * (1.0 - 1.0 / static_cast<double>(n));
        CHECK(m.ratio() == Approx(expected).epsilon(1e-14));
        CHECK(m.ratio() < c);
        const auto raw = raw_moments(d);
        CHECK(raw.mean1 == Approx(c).epsilon(1e-10));
        CHECK(raw.mean2 / raw.mean1 == Approx(expected).epsilon(1e-10));
    }
    const double gap_small = c - FlipCountDistribution::binomial(100, c).moments().ratio();
    const double gap_large = c - FlipCountDistribution::binomial(1000000, c).moments().ratio();
    CHECK(gap_large < gap_small / 1000);
}

TEST_CASE("empirical moments match analytic moments within 4 standard errors") {
    const std::vector<FlipCountDistribution> ds{
        FlipCountDistribution::binomial(1000, 2.0), FlipCountDistribution::poisson(3.0, 1000),
        FlipCountDistribution::point_mass(4),       FlipCountDistribution::table({0.2, 0.3, 0.0, 0.5}),
        FlipCountDistribution::zipf(4.5, 1000),
    };
    Rng rng(77);
    const int N = 1000000;
    for (const auto& d : ds) {
        const auto m = d.moments();
        const auto raw = raw_moments(d);
        long double s1 = 0, s2 = 0;
        for (int i = 0; i < N; ++i) {
            const auto s = static_cast<long double>(d.sample(rng));
            s1 += s;
            s2 += s * (s - 1);
        }
        const double se1 = std::sqrt(raw.var1 / N), se2 = std::sqrt(raw.var2 / N);
        INFO(d.describe());
        CHECK(std::fabs(static_cast<double>(s1 / N) - m.m1) <= 4 * se1 + 1e-12);
        CHECK(std::fabs(static_cast<double>(s2 / N) - m.m2) <= 4 * se2 + 1e-12);
    }
}

TEST_CASE("truncated second moment and s0") {
    const auto d = FlipCountDistribution::poisson(4.0, 1000);
    double prev = -1;
    for (std::size_t sigma = 0; sigma <= d.max_support(); ++sigma) {
        const double v = d.m2_truncated(sigma);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK(d.m2_truncated(100000) == Approx(d.moments().m2).epsilon(1e-12));

    // m2/m1 = 4 for Poisson(4): s0 exists for every delta <= 3 and grows with delta.
    std::size_t prev_s0 = 0;
    for (double delta = 0.1; delta <= 3.0; delta += 0.1) {
        const auto m = d.moments(delta);
        REQUIRE(m.s0.has_value());
        CHECK(*m.s0 >= prev_s0);
        CHECK(d.m2_truncated(*m.s0) >= (1 + delta / 2) * m.m1 * (1 - 1e-12));
        CHECK(d.m2_truncated(*m.s0 - 1) < (1 + delta / 2) * m.m1);
        prev_s0 = *m.s0;
    }
    CHECK_FALSE(d.moments(3.5).s0.has_value());
    CHECK_FALSE(FlipCountDistribution::binomial(100, 0.9).moments().s0.has_value());
}

TEST_CASE("zipf cap flags") {
    const auto heavy = FlipCountDistribution::zipf(1.5, 1000).moments();
    CHECK(heavy.m1_cap_dominated);
    CHECK(heavy.m2_cap_dominated);
    const auto mid = FlipCountDistribution::zipf(2.5, 1000).moments();
    CHECK_FALSE(mid.m1_cap_dominated);
    CHECK(mid.m2_cap_dominated);
    const auto light = FlipCountDistribution::zipf(3.5, 1000).moments();
    CHECK_FALSE(light.m1_cap_dominated);
    CHECK_FALSE(light.m2_cap_dominated);
}

TEST_CASE("parse") {
    CHECK(FlipCountDistribution::parse("binomial:c=1.5", 100).kind() == DistKind::Binomial);
    CHECK(FlipCountDistribution::parse("binomial:c=1.5", 100).support_bound() == 100);
    CHECK(FlipCountDistribution::parse("poisson:c=2", 100).parameter() == 2.0);
    CHECK(FlipCountDistribution::parse("poisson:c=2,cap=5", 100).max_support() == 5);
    CHECK(FlipCountDistribution::parse("zipf:kappa=1.5", 100).max_support() == 100);
    CHECK(FlipCountDistribution::parse("point:k=3", 100).pmf(3) == 1.0);
    const auto t = FlipCountDistribution::parse("table:0:0.2,1:0.3,3:0.5", 100);
    CHECK(t.pmf(0) == Approx(0.2));
    CHECK(t.pmf(1) == Approx(0.3));
    CHECK(t.pmf(2) == 0.0);
    CHECK(t.pmf(3) == Approx(0.5));

    for (const char* bad : {"binomial", "foo:c=1", "poisson:c=", "poisson:x=2", "poisson:c=2,kappa=1", "zipf:kappa=1",
                            "zipf:kappa=abc", "point:k=-1", "table:1:0.5", "table:1:-0.5,2:1.5", "binomial:c=200"}) {
        INFO(bad);
        CHECK_THROWS_AS(FlipCountDistribution::parse(bad, 100), ConfigError);
    }
}

TEST_CASE("describe round-trips through parse") {
    for (const char* spec : {"binomial:c=1.5,n=100", "poisson:c=2,cap=50", "zipf:kappa=1.5,cap=100", "point:k=3"}) {
        const auto d = FlipCountDistribution::parse(spec, 1000);
        CHECK(d.describe() == spec);
        CHECK(FlipCountDistribution::parse(d.describe(), 1000).describe() == d.describe());
    }
}
