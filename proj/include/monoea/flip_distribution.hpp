#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "monoea/rng.hpp"

namespace monoea {

/// Walker/Vose alias table over indices 0..size()-1.
class AliasTable {
public:
    AliasTable() = default;
    explicit AliasTable(std::span<const double> weights);

    std::size_t size() const { return prob_.size(); }
    std::size_t sample(Rng& rng) const {
        const auto i = static_cast<std::size_t>(uniform_below(rng, prob_.size()));
        return uniform01(rng) < prob_[i] ? i : alias_[i];
    }

private:
    std::vector<double> prob_;
    std::vector<std::uint32_t> alias_;
};

enum class DistKind { Binomial, Poisson, Zipf, PointMass, Table };

/// Falling moments and point probabilities of a flip-count distribution.
struct MomentReport {
    double m1 = 0;      // E[s]
    double m2 = 0;      // E[s(s-1)]
    double p0 = 0;
    double p1 = 0;
    double delta = 0;   // the delta used for s0
    /// min{sigma : sum_{i<=sigma} p_i i(i-1) >= (1 + delta/2) m1}; only set
    /// when m2/m1 >= 1 + delta.
    std::optional<std::size_t> s0;
    /// Set when the moment is finite only because the support is capped
    /// (Zipf: m1 for kappa <= 2, m2 for kappa < 3).
    bool m1_cap_dominated = false;
    bool m2_cap_dominated = false;
    /// Probability mass removed by capping an unbounded law at the support bound.
    double truncated_mass = 0;

    double ratio() const { return m2 / m1; }
};

/// Distribution D of the number s of flipped bits.
///
/// All variants are stored as an explicit probability table over
/// {0, ..., max_support()}; sampling uses an alias table over it.
class FlipCountDistribution {
public:
    /// Bin(n, c/n).
    static FlipCountDistribution binomial(std::size_t n, double c);
    /// Poi(c) conditioned on s <= cap.
    static FlipCountDistribution poisson(double c, std::size_t cap);
    /// Pr[s = k] = k^-kappa / Z on {1, ..., cap}.
    static FlipCountDistribution zipf(double kappa, std::size_t cap);
    static FlipCountDistribution point_mass(std::size_t k);
    /// probs[k] = Pr[s = k]; must be nonnegative and sum to 1 within 1e-9.
    static FlipCountDistribution table(std::vector<double> probs);

    /// Parses "binomial:c=1.5", "poisson:c=2", "zipf:kappa=1.5", "point:k=3"
    /// or "table:0:0.2,1:0.3,3:0.5". `n` is the default support bound
    /// (binomial n, Poisson and Zipf cap); "n=" / "cap=" keys override it.
    /// Throws ConfigError on malformed input.
    static FlipCountDistribution parse(std::string_view spec, std::size_t n);

    DistKind kind() const { return kind_; }
    std::string describe() const;
    double parameter() const { return param_; }  // c, kappa, or k
    std::size_t support_bound() const { return bound_; }

    std::size_t max_support() const { return pmf_.size() - 1; }
    double pmf(std::size_t k) const { return k < pmf_.size() ? pmf_[k] : 0.0; }
    std::span<const double> probabilities() const { return pmf_; }

    std::size_t sample(Rng& rng) const { return alias_.sample(rng); }

    /// sum_{i <= sigma} p_i i (i - 1)
    double m2_truncated(std::size_t sigma) const;
    MomentReport moments(double delta = 0.1) const;

private:
    FlipCountDistribution(DistKind kind, double param, std::size_t bound, std::vector<double> pmf);

    DistKind kind_;
    double param_;
    std::size_t bound_;
    double truncated_mass_ = 0;
    std::vector<double> pmf_;
    AliasTable alias_;
};

}  // namespace monoea
