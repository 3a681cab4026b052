#include "monoea/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "monoea/errors.hpp"
#include "monoea/rng.hpp"

namespace monoea {

namespace {

constexpr std::pair<Variant, const char*> kVariantNames[] = {
    {Variant::RLS, "RLS"},
    {Variant::OnePlusLambdaEA, "OnePlusLambdaEA"},
    {Variant::MuPlusOneEA, "MuPlusOneEA"},
    {Variant::MuPlusOneGA, "MuPlusOneGA"},
    {Variant::OnePlusLambdaFastEA, "OnePlusLambdaFastEA"},
    {Variant::MuPlusOneFastEA, "MuPlusOneFastEA"},
    {Variant::MuPlusOneFastGA, "MuPlusOneFastGA"},
    {Variant::OneLambdaLambdaGA, "OneLambdaLambdaGA"},
};

bool is_fast(Variant v) {
    return v == Variant::OnePlusLambdaFastEA || v == Variant::MuPlusOneFastEA || v == Variant::MuPlusOneFastGA;
}

bool is_ga(Variant v) { return v == Variant::MuPlusOneGA || v == Variant::MuPlusOneFastGA; }

bool is_mu_plus_one(Variant v) {
    return v == Variant::MuPlusOneEA || v == Variant::MuPlusOneGA || v == Variant::MuPlusOneFastEA ||
           v == Variant::MuPlusOneFastGA;
}

}  // namespace

std::string to_string(Variant v) {
    for (auto [var, name] : kVariantNames) {
        if (var == v) return name;
    }
    return "?";
}

Variant parse_variant(const std::string& name) {
    for (auto [var, vname] : kVariantNames) {
        if (name == vname) return var;
    }
    throw ConfigError("unknown algorithm variant '" + name + "'");
}

std::vector<std::string> AlgorithmSpec::validate(std::size_t n) const {
    std::vector<std::string> warnings;
    const std::string who = to_string(variant) + ": ";
    if (n < 2) throw ConfigError(who + "dimension must be at least 2");
    if (mu < 1 || lambda < 1) throw ConfigError(who + "mu and lambda must be at least 1");
    if (gamma && variant != Variant::OneLambdaLambdaGA) throw ConfigError(who + "gamma is only used by OneLambdaLambdaGA");
    if (adaptive && variant != Variant::OneLambdaLambdaGA) {
        throw ConfigError(who + "adaptive lambda is only used by OneLambdaLambdaGA");
    }
    if (dist && !is_fast(variant)) throw ConfigError(who + "a flip-count distribution is only used by fast variants");
    if (is_fast(variant) && !dist) throw ConfigError(who + "fast variants need a flip-count distribution");
    if ((variant == Variant::RLS || variant == Variant::OneLambdaLambdaGA) && mu != 1) {
        throw ConfigError(who + "population size must be 1");
    }
    if ((variant == Variant::OnePlusLambdaEA || variant == Variant::OnePlusLambdaFastEA) && mu != 1) {
        throw ConfigError(who + "population size must be 1");
    }
    if ((variant == Variant::RLS || is_mu_plus_one(variant)) && lambda != 1) {
        throw ConfigError(who + "offspring population size must be 1");
    }
    const bool uses_c = variant == Variant::OnePlusLambdaEA || variant == Variant::MuPlusOneEA ||
                        variant == Variant::MuPlusOneGA || variant == Variant::OneLambdaLambdaGA;
    if (uses_c && !(c > 0.0 && c <= static_cast<double>(n))) throw ConfigError(who + "c must lie in (0, n]");
    if (variant == Variant::OneLambdaLambdaGA) {
        if (!adaptive) {
            if (!gamma) throw ConfigError(who + "gamma is required without the adaptive rule");
            if (!(*gamma > 0.0 && *gamma <= 1.0)) throw ConfigError(who + "gamma must lie in (0, 1]");
        } else {
            if (gamma) throw ConfigError(who + "gamma is derived from lambda under the adaptive rule");
            if (!(adaptive->factor > 1.0)) throw ConfigError(who + "one-fifth factor must exceed 1");
            if (!(adaptive->gamma_slack >= 0.0 && adaptive->gamma_slack < 1.0)) {
                throw ConfigError(who + "gamma slack must lie in [0, 1)");
            }
            if (adaptive->lambda_max != 0 && adaptive->lambda_max < 1.0) {
                throw ConfigError(who + "lambda_max must be at least 1");
            }
            warnings.push_back(who + "one-fifth rule constants are defaults chosen here, not taken from the analysis");
        }
    }
    if (dist && dist->max_support() > n) throw ConfigError(who + "flip-count support exceeds n");
    if ((variant == Variant::MuPlusOneFastEA || variant == Variant::MuPlusOneFastGA) && dist->pmf(0) == 0.0) {
        warnings.push_back(who + "Pr[D = 0] = 0; the efficiency results for fast (mu+1) variants assume Pr[D = 0] > 0");
    }
    return warnings;
}

std::string AlgorithmSpec::describe() const {
    std::ostringstream os;
    os << to_string(variant) << "(mu=" << mu << ",lambda=" << lambda << ",c=" << c;
    if (gamma) os << ",gamma=" << *gamma;
    if (dist) os << ",dist=" << dist->describe();
    if (adaptive) os << ",one_fifth(F=" << adaptive->factor << ")";
    os << ')';
    return os.str();
}

std::optional<BiasEstimate> selection_bias_estimate(const Trajectory& t) {
    const auto& in = t.instrumentation;
    if (in.events == 0) return std::nullopt;
    BiasEstimate b;
    b.events = in.events;
    const double k = static_cast<double>(in.events);
    b.estimate = in.sum_s10 / k;
    if (in.events > 1) {
        const double var = std::max(0.0, (in.sum_s10_sq - k * b.estimate * b.estimate) / (k - 1.0));
        b.standard_error = std::sqrt(var / k);
    }
    return b;
}

namespace {

template <class F>
struct Individual {
    BitVector x;
    typename F::State state;
    FitnessValue fitness;
};

struct Offspring {
    std::size_t parent = 0;
    std::vector<Index> flips;
    FitnessValue fitness;
};

template <class F>
class Engine {
public:
    Engine(const AlgorithmSpec& spec, const F& f, std::uint64_t budget, std::uint64_t seed,
           std::uint64_t sample_every)
        : spec_(spec),
          f_(f),
          n_(f.dimension()),
          budget_(budget),
          sample_every_(sample_every),
          rng_(seed),
          marks_(n_, 0),
          optimum_(f.optimum()) {}

    Trajectory run() {
        if (spec_.variant == Variant::OneLambdaLambdaGA) {
            run_one_lambda_lambda();
        } else if (spec_.mu == 1) {
            run_population_one();
        } else {
            run_population();
        }
        return std::move(traj_);
    }

private:
    // --- bookkeeping -----------------------------------------------------

    // Counts one evaluation; returns true if it hit the optimum.
    bool count(const FitnessValue& v) {
        ++evals_;
        if (v == optimum_) {
            traj_.terminated = Termination::FoundOptimum;
            traj_.runtime = evals_;
            return true;
        }
        return false;
    }

    bool fits(std::uint64_t evals) const { return evals_ + evals <= budget_; }

    void sample(const Individual<F>& best, bool force) {
        if (!force && evals_ < next_sample_) return;
        if (!traj_.samples.empty() && traj_.samples.back().evaluations == evals_) return;
        traj_.samples.push_back({evals_, best.fitness,
                                 static_cast<double>(best.x.ones()) / static_cast<double>(n_),
                                 f_.level(best.state)});
        next_sample_ = (evals_ / sample_every_ + 1) * sample_every_;
    }

    void finish(const Individual<F>& best) {
        traj_.total_evaluations = evals_;
        sample(best, true);
    }

    Individual<F> make(BitVector x) {
        auto st = f_.make_state(x);
        auto fit = f_.fitness(st);
        return {std::move(x), std::move(st), std::move(fit)};
    }

    void apply(Individual<F>& ind, std::span<const Index> flips, FitnessValue fitness) {
        f_.commit(ind.x, ind.state, flips);
        ind.x.flip_unchecked(flips);
        ind.fitness = std::move(fitness);
    }

    void record(const BitVector& parent, std::span<const Index> flips) {
        std::uint64_t s01 = 0;
        for (Index p : flips) s01 += parent[p] ? 0 : 1;
        const auto s10 = static_cast<double>(flips.size() - s01);
        auto& in = traj_.instrumentation;
        in.sum_s01 += static_cast<double>(s01);
        if (s01 > 0) {
            ++in.events;
            in.sum_s10 += s10;
            in.sum_s10_sq += s10 * s10;
        }
    }

    // --- variation operators ---------------------------------------------

    // Each bit independently with probability p, via geometric gaps.
    void bitwise_mutation(double p, std::vector<Index>& out) {
        out.clear();
        std::uint64_t pos = geometric_skip(rng_, p);
        while (pos < n_) {
            out.push_back(static_cast<Index>(pos));
            const std::uint64_t skip = geometric_skip(rng_, p);
            if (skip >= n_) break;
            pos += 1 + skip;
        }
    }

    std::size_t binomial_count(double p) {
        std::size_t count = 0;
        std::uint64_t pos = geometric_skip(rng_, p);
        while (pos < n_) {
            ++count;
            const std::uint64_t skip = geometric_skip(rng_, p);
            if (skip >= n_) break;
            pos += 1 + skip;
        }
        return count;
    }

    // s distinct uniform positions (Floyd's sampling).
    void exact_flips(std::size_t s, std::vector<Index>& out) {
        out.clear();
        s = std::min(s, n_);
        for (std::size_t j = n_ - s; j < n_; ++j) {
            auto t = static_cast<Index>(uniform_below(rng_, j + 1));
            if (marks_[t]) t = static_cast<Index>(j);
            marks_[t] = 1;
            out.push_back(t);
        }
        for (Index p : out) marks_[p] = 0;
    }

    void mutate(std::vector<Index>& out) {
        switch (spec_.variant) {
            case Variant::RLS: exact_flips(1, out); break;
            case Variant::OnePlusLambdaFastEA:
            case Variant::MuPlusOneFastEA:
            case Variant::MuPlusOneFastGA: exact_flips(spec_.dist->sample(rng_), out); break;
            default: bitwise_mutation(spec_.c / static_cast<double>(n_), out); break;
        }
    }

    // Uniform crossover of a and b, expressed as flips relative to a.
    void uniform_crossover(const BitVector& a, const BitVector& b, std::vector<Index>& out) {
        out.clear();
        const auto wa = a.words();
        const auto wb = b.words();
        for (std::size_t k = 0; k < wa.size(); ++k) {
            std::uint64_t d = (wa[k] ^ wb[k]) & rng_();
            while (d != 0) {
                out.push_back(static_cast<Index>(k * 64 + static_cast<std::size_t>(std::countr_zero(d))));
                d &= d - 1;
            }
        }
    }

    // Index of a maximum, ties uniformly at random.
    template <class Get>
    std::size_t argmax(std::size_t count, Get get) {
        std::size_t best = 0;
        std::uint64_t ties = 1;
        for (std::size_t j = 1; j < count; ++j) {
            const auto cmp = get(j) <=> get(best);
            if (cmp > 0) {
                best = j;
                ties = 1;
            } else if (cmp == 0 && uniform_below(rng_, ++ties) == 0) {
                best = j;
            }
        }
        return best;
    }

    // --- population size one ---------------------------------------------

    void run_population_one() {
        auto x = make(BitVector::random(n_, rng_));
        const bool hit = count(x.fitness);
        sample(x, true);
        if (hit) return finish(x);

        const std::size_t lambda = spec_.lambda;
        std::vector<Offspring> kids(lambda);
        while (fits(lambda)) {
            for (std::size_t j = 0; j < lambda; ++j) {
                auto& kid = kids[j];
                if (is_ga(spec_.variant) && coin(rng_)) {
                    kid.flips.clear();  // crossover of x with itself
                } else {
                    mutate(kid.flips);
                }
                kid.fitness = f_.peek(x.x, x.state, kid.flips);
                if (count(kid.fitness)) {
                    apply(x, kid.flips, kid.fitness);
                    return finish(x);
                }
            }
            ++traj_.instrumentation.generations;
            const std::size_t w = argmax(lambda, [&](std::size_t j) -> const FitnessValue& { return kids[j].fitness; });
            record(x.x, kids[w].flips);
            if (acceptance_rule(x.fitness, kids[w].fitness)) apply(x, kids[w].flips, kids[w].fitness);
            sample(x, false);
        }
        finish(x);
    }

    // --- Algorithm-1 populations (mu > 1) ---------------------------------

    void run_population() {
        const std::size_t mu = spec_.mu;
        const std::size_t lambda = spec_.lambda;
        std::vector<Individual<F>> pop;
        pop.reserve(mu);
        for (std::size_t i = 0; i < mu; ++i) {
            pop.push_back(make(BitVector::random(n_, rng_)));
            if (count(pop.back().fitness)) return finish(pop.back());
        }
        sample(best_of(pop), true);

        std::vector<Offspring> kids(lambda);
        std::vector<std::pair<std::size_t, std::uint64_t>> order;
        while (fits(lambda)) {
            for (std::size_t j = 0; j < lambda; ++j) {
                auto& kid = kids[j];
                if (is_ga(spec_.variant) && coin(rng_)) {
                    kid.parent = static_cast<std::size_t>(uniform_below(rng_, mu));
                    const auto other = static_cast<std::size_t>(uniform_below(rng_, mu));
                    uniform_crossover(pop[kid.parent].x, pop[other].x, kid.flips);
                } else {
                    kid.parent = static_cast<std::size_t>(uniform_below(rng_, mu));
                    mutate(kid.flips);
                }
                const auto& p = pop[kid.parent];
                kid.fitness = f_.peek(p.x, p.state, kid.flips);
                if (count(kid.fitness)) {
                    auto winner = p;
                    apply(winner, kid.flips, kid.fitness);
                    return finish(winner);
                }
            }
            ++traj_.instrumentation.generations;

            // Removing an argmin lambda times with random tie-breaking removes
            // the lambda smallest under (fitness, random key).
            order.clear();
            for (std::size_t i = 0; i < mu + lambda; ++i) order.emplace_back(i, rng_());
            auto fit = [&](std::size_t i) -> const FitnessValue& {
                return i < mu ? pop[i].fitness : kids[i - mu].fitness;
            };
            std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
                const auto cmp = fit(a.first) <=> fit(b.first);
                return cmp != 0 ? cmp < 0 : a.second < b.second;
            });
            std::vector<Individual<F>> next;
            next.reserve(mu);
            for (std::size_t r = lambda; r < order.size(); ++r) {
                const std::size_t i = order[r].first;
                if (i < mu) {
                    next.push_back(pop[i]);
                } else {
                    const auto& kid = kids[i - mu];
                    auto child = pop[kid.parent];
                    apply(child, kid.flips, kid.fitness);
                    next.push_back(std::move(child));
                }
            }
            pop = std::move(next);
            sample(best_of(pop), false);
        }
        finish(best_of(pop));
    }

    const Individual<F>& best_of(const std::vector<Individual<F>>& pop) const {
        std::size_t best = 0;
        for (std::size_t i = 1; i < pop.size(); ++i) {
            if (pop[i].fitness > pop[best].fitness) best = i;
        }
        return pop[best];
    }

    // --- (1+(lambda,lambda))-GA -------------------------------------------

    void run_one_lambda_lambda() {
        auto x = make(BitVector::random(n_, rng_));
        const bool hit = count(x.fitness);
        sample(x, true);
        if (hit) return finish(x);

        double lambda = static_cast<double>(spec_.lambda);
        double c = spec_.c;
        double gamma = spec_.gamma.value_or(1.0);
        const double lambda_max =
            spec_.adaptive && spec_.adaptive->lambda_max > 0 ? spec_.adaptive->lambda_max : static_cast<double>(n_);
        std::vector<Offspring> mutants, crosses;

        while (true) {
            const auto k = static_cast<std::size_t>(std::max(1.0, std::round(lambda)));
            if (!fits(2 * k)) break;
            if (spec_.adaptive) {
                c = std::min(lambda, static_cast<double>(n_));
                gamma = (1.0 - spec_.adaptive->gamma_slack) / lambda;
            }
            mutants.resize(k);
            crosses.resize(k);

            const std::size_t s = binomial_count(c / static_cast<double>(n_));
            for (auto& m : mutants) {
                exact_flips(s, m.flips);
                m.fitness = f_.peek(x.x, x.state, m.flips);
                if (count(m.fitness)) {
                    apply(x, m.flips, m.fitness);
                    return finish(x);
                }
            }
            const auto& y = mutants[argmax(k, [&](std::size_t j) -> const FitnessValue& { return mutants[j].fitness; })];

            for (auto& z : crosses) {
                z.flips.clear();
                for (Index p : y.flips) {
                    if (bernoulli(rng_, gamma)) z.flips.push_back(p);
                }
                z.fitness = f_.peek(x.x, x.state, z.flips);
                if (count(z.fitness)) {
                    apply(x, z.flips, z.fitness);
                    return finish(x);
                }
            }
            ++traj_.instrumentation.generations;
            const auto& z = crosses[argmax(k, [&](std::size_t j) -> const FitnessValue& { return crosses[j].fitness; })];
            record(x.x, z.flips);
            const bool improved = z.fitness > x.fitness;
            if (acceptance_rule(x.fitness, z.fitness)) apply(x, z.flips, z.fitness);
            if (spec_.adaptive) {
                lambda = improved ? std::max(1.0, lambda / spec_.adaptive->factor)
                                  : std::min(lambda_max, lambda * std::pow(spec_.adaptive->factor, 0.25));
            }
            sample(x, false);
        }
        finish(x);
    }

    const AlgorithmSpec& spec_;
    const F& f_;
    std::size_t n_;
    std::uint64_t budget_;
    std::uint64_t sample_every_;
    Rng rng_;
    std::vector<std::uint8_t> marks_;
    FitnessValue optimum_;
    std::uint64_t evals_ = 0;
    std::uint64_t next_sample_ = 0;
    Trajectory traj_;
};

}  // namespace

template <FitnessOracle F>
Trajectory run(const AlgorithmSpec& spec, const F& f, std::uint64_t budget, std::uint64_t seed,
               std::uint64_t sample_every) {
    spec.validate(f.dimension());
    if (budget < spec.mu) throw ConfigError("budget must be at least mu");
    if (sample_every == 0) throw ConfigError("sample_every must be positive");
    return Engine<F>(spec, f, budget, seed, sample_every).run();
}

template Trajectory run<OneMax>(const AlgorithmSpec&, const OneMax&, std::uint64_t, std::uint64_t, std::uint64_t);
template Trajectory run<ZeroMax>(const AlgorithmSpec&, const ZeroMax&, std::uint64_t, std::uint64_t, std::uint64_t);
template Trajectory run<BinVal>(const AlgorithmSpec&, const BinVal&, std::uint64_t, std::uint64_t, std::uint64_t);
template Trajectory run<Linear>(const AlgorithmSpec&, const Linear&, std::uint64_t, std::uint64_t, std::uint64_t);
template Trajectory run<HotTopic>(const AlgorithmSpec&, const HotTopic&, std::uint64_t, std::uint64_t, std::uint64_t);

std::size_t dimension(const Problem& p) {
    return std::visit([](const auto& f) { return f.dimension(); }, p);
}

std::string problem_name(const Problem& p) {
    return std::visit([](const auto& f) { return f.name(); }, p);
}

Trajectory run(const AlgorithmSpec& spec, const Problem& f, std::uint64_t budget, std::uint64_t seed,
               std::uint64_t sample_every) {
    return std::visit([&](const auto& fn) { return run(spec, fn, budget, seed, sample_every); }, f);
}

}  // namespace monoea
