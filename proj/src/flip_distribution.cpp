#include "monoea/flip_distribution.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "monoea/errors.hpp"

namespace monoea {

AliasTable::AliasTable(std::span<const double> weights) {
    const std::size_t k = weights.size();
    if (k == 0) throw std::invalid_argument("alias table needs at least one weight");
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    prob_.resize(k);
    alias_.resize(k);
    std::vector<double> scaled(k);
    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < k; ++i) {
        scaled[i] = weights[i] * static_cast<double>(k) / total;
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
        const auto s = small.back();
        small.pop_back();
        const auto l = large.back();
        prob_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] -= 1.0 - scaled[s];
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    for (auto i : large) {
        prob_[i] = 1.0;
        alias_[i] = i;
    }
    // Leftovers from rounding.
    for (auto i : small) {
        prob_[i] = 1.0;
        alias_[i] = i;
    }
}

namespace {

// Drops the zero tail so that pmf_.back() > 0.
void trim(std::vector<double>& p) {
    while (p.size() > 1 && p.back() == 0.0) p.pop_back();
}

void normalize(std::vector<double>& p) {
    long double total = 0;
    for (double v : p) total += v;
    for (double& v : p) v = static_cast<double>(v / total);
}

double parse_double(std::string_view text, std::string_view what) {
    const std::string s(text);
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty() || !std::isfinite(v)) {
        throw ConfigError("malformed number '" + s + "' for " + std::string(what));
    }
    return v;
}

std::size_t parse_size(std::string_view text, std::string_view what) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw ConfigError("malformed integer '" + std::string(text) + "' for " + std::string(what));
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::map<std::string, std::string_view> parse_keys(std::string_view body, std::string_view spec) {
    std::map<std::string, std::string_view> keys;
    if (body.empty()) return keys;
    for (auto item : split(body, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string_view::npos || eq == 0) {
            throw ConfigError("expected key=value in distribution spec '" + std::string(spec) + "'");
        }
        keys.emplace(std::string(item.substr(0, eq)), item.substr(eq + 1));
    }
    return keys;
}

}  // namespace

FlipCountDistribution::FlipCountDistribution(DistKind kind, double param, std::size_t bound,
                                             std::vector<double> pmf)
    : kind_(kind), param_(param), bound_(bound), pmf_(std::move(pmf)) {
    trim(pmf_);
    alias_ = AliasTable(pmf_);
}

FlipCountDistribution FlipCountDistribution::binomial(std::size_t n, double c) {
    if (n == 0) throw ConfigError("binomial: n must be positive");
    if (!(c > 0.0) || c > static_cast<double>(n)) throw ConfigError("binomial: c must lie in (0, n]");
    const double p = c / static_cast<double>(n);
    std::vector<double> pmf(n + 1, 0.0);
    if (p >= 1.0) {
        pmf[n] = 1.0;
    } else {
        const double lq = std::log1p(-p);
        const double lp = std::log(p);
        const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
        for (std::size_t k = 0; k <= n; ++k) {
            const double kk = static_cast<double>(k);
            const double lv = lgn - std::lgamma(kk + 1.0) - std::lgamma(static_cast<double>(n - k) + 1.0) +
                              kk * lp + static_cast<double>(n - k) * lq;
            pmf[k] = std::exp(lv);
            if (kk > c && pmf[k] == 0.0) break;
        }
    }
    normalize(pmf);
    return FlipCountDistribution(DistKind::Binomial, c, n, std::move(pmf));
}

FlipCountDistribution FlipCountDistribution::poisson(double c, std::size_t cap) {
    if (!(c > 0.0)) throw ConfigError("poisson: c must be positive");
    std::vector<double> pmf;
    long double mass = 0;
    const double lc = std::log(c);
    for (std::size_t k = 0; k <= cap; ++k) {
        const double kk = static_cast<double>(k);
        const double v = std::exp(kk * lc - c - std::lgamma(kk + 1.0));
        pmf.push_back(v);
        mass += v;
        if (kk > c && (v == 0.0 || 1.0L - mass < 1e-19L)) break;
    }
    normalize(pmf);
    FlipCountDistribution d(DistKind::Poisson, c, cap, std::move(pmf));
    d.truncated_mass_ = std::max(0.0, static_cast<double>(1.0L - mass));
    return d;
}

FlipCountDistribution FlipCountDistribution::zipf(double kappa, std::size_t cap) {
    if (!(kappa > 1.0)) throw ConfigError("zipf: kappa must exceed 1");
    if (cap == 0) throw ConfigError("zipf: cap must be positive");
    std::vector<double> pmf(cap + 1, 0.0);
    for (std::size_t k = 1; k <= cap; ++k) pmf[k] = std::pow(static_cast<double>(k), -kappa);
    normalize(pmf);
    return FlipCountDistribution(DistKind::Zipf, kappa, cap, std::move(pmf));
}

FlipCountDistribution FlipCountDistribution::point_mass(std::size_t k) {
    std::vector<double> pmf(k + 1, 0.0);
    pmf[k] = 1.0;
    return FlipCountDistribution(DistKind::PointMass, static_cast<double>(k), k, std::move(pmf));
}

FlipCountDistribution FlipCountDistribution::table(std::vector<double> probs) {
    if (probs.empty()) throw ConfigError("table: no probabilities given");
    long double total = 0;
    for (double v : probs) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("table: probabilities must be nonnegative");
        total += v;
    }
    if (std::fabs(static_cast<double>(total) - 1.0) > 1e-9) throw ConfigError("table: probabilities must sum to 1");
    normalize(probs);
    const std::size_t bound = probs.size() - 1;
    return FlipCountDistribution(DistKind::Table, 0.0, bound, std::move(probs));
}

FlipCountDistribution FlipCountDistribution::parse(std::string_view spec, std::size_t n) {
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos) {
        throw ConfigError("distribution spec '" + std::string(spec) + "' lacks a ':'");
    }
    const auto name = spec.substr(0, colon);
    const auto body = spec.substr(colon + 1);

    if (name == "table") {
        std::vector<double> probs;
        for (auto item : split(body, ',')) {
            const auto sep = item.find(':');
            if (sep == std::string_view::npos) throw ConfigError("table entries must be k:p");
            const auto k = parse_size(item.substr(0, sep), "table k");
            const double p = parse_double(item.substr(sep + 1), "table p");
            if (k >= probs.size()) probs.resize(k + 1, 0.0);
            probs[k] += p;
        }
        return table(std::move(probs));
    }

    const auto keys = parse_keys(body, spec);
    auto require = [&](const std::string& key) -> std::string_view {
        auto it = keys.find(key);
        if (it == keys.end()) throw ConfigError("distribution '" + std::string(name) + "' needs " + key + "=");
        return it->second;
    };
    auto check_keys = [&](std::initializer_list<const char*> allowed) {
        for (const auto& [k, v] : keys) {
            bool ok = false;
            for (auto a : allowed) ok = ok || k == a;
            if (!ok) throw ConfigError("unknown key '" + k + "' in distribution spec '" + std::string(spec) + "'");
        }
    };
    auto bound = [&](const char* key) {
        auto it = keys.find(key);
        return it == keys.end() ? n : parse_size(it->second, key);
    };

    if (name == "binomial") {
        check_keys({"c", "n"});
        return binomial(bound("n"), parse_double(require("c"), "c"));
    }
    if (name == "poisson") {
        check_keys({"c", "cap"});
        return poisson(parse_double(require("c"), "c"), bound("cap"));
    }
    if (name == "zipf") {
        check_keys({"kappa", "cap"});
        return zipf(parse_double(require("kappa"), "kappa"), bound("cap"));
    }
    if (name == "point") {
        check_keys({"k"});
        return point_mass(parse_size(require("k"), "k"));
    }
    throw ConfigError("unknown distribution '" + std::string(name) + "'");
}

std::string FlipCountDistribution::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case DistKind::Binomial: os << "binomial:c=" << param_ << ",n=" << bound_; break;
        case DistKind::Poisson: os << "poisson:c=" << param_ << ",cap=" << bound_; break;
        case DistKind::Zipf: os << "zipf:kappa=" << param_ << ",cap=" << bound_; break;
        case DistKind::PointMass: os << "point:k=" << param_; break;
        case DistKind::Table: {
            os << "table:";
            bool first = true;
            for (std::size_t k = 0; k < pmf_.size(); ++k) {
                if (pmf_[k] == 0.0) continue;
                os << (first ? "" : ",") << k << ':' << pmf_[k];
                first = false;
            }
            break;
        }
    }
    return os.str();
}

double FlipCountDistribution::m2_truncated(std::size_t sigma) const {
    long double acc = 0;
    const std::size_t last = std::min(sigma, max_support());
    for (std::size_t i = 2; i <= last; ++i) {
        const auto ii = static_cast<long double>(i);
        acc += pmf_[i] * ii * (ii - 1);
    }
    return static_cast<double>(acc);
}

MomentReport FlipCountDistribution::moments(double delta) const {
    MomentReport r;
    r.delta = delta;
    r.p0 = pmf(0);
    r.p1 = pmf(1);
    r.truncated_mass = truncated_mass_;

    long double m1 = 0, m2 = 0;
    for (std::size_t i = 1; i < pmf_.size(); ++i) {
        const auto ii = static_cast<long double>(i);
        m1 += pmf_[i] * ii;
        m2 += pmf_[i] * ii * (ii - 1);
    }
    r.m1 = static_cast<double>(m1);
    r.m2 = static_cast<double>(m2);

    switch (kind_) {
        case DistKind::Binomial:
            r.m1 = param_;
            r.m2 = param_ * param_ * (1.0 - 1.0 / static_cast<double>(bound_));
            break;
        case DistKind::Poisson:
            if (truncated_mass_ < 1e-15) {
                r.m1 = param_;
                r.m2 = param_ * param_;
            }
            break;
        case DistKind::PointMass:
            r.m1 = param_;
            r.m2 = param_ * (param_ - 1.0);
            break;
        case DistKind::Zipf:
            r.m1_cap_dominated = param_ <= 2.0;
            r.m2_cap_dominated = param_ < 3.0;
            break;
        case DistKind::Table: break;
    }

    if (r.m1 > 0 && r.m2 / r.m1 >= 1.0 + delta) {
        const long double target = (1.0L + delta / 2.0L) * static_cast<long double>(r.m1);
        long double acc = 0;
        for (std::size_t i = 2; i < pmf_.size(); ++i) {
            const auto ii = static_cast<long double>(i);
            acc += pmf_[i] * ii * (ii - 1);
            if (acc >= target * (1.0L - 1e-15L)) {
                r.s0 = i;
                break;
            }
        }
    }
    return r;
}

}  // namespace monoea
