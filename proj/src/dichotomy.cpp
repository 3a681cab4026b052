#include "monoea/dichotomy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace monoea {

namespace {

void require_defined(const FlipCountDistribution& dist) {
    if (dist.max_support() == 0) throw UndefinedPhi("Phi undefined: flip count is always 0");
}

// Suffix maxima of the pmf, for the tail bound.
std::vector<double> suffix_max(std::span<const double> pmf) {
    std::vector<double> out(pmf.size() + 1, 0.0);
    for (std::size_t k = pmf.size(); k-- > 0;) out[k] = std::max(out[k + 1], pmf[k]);
    return out;
}

PhiEvaluation phi_with_tail(std::span<const double> pmf, std::span<const double> tail_max, double alpha,
                            double tolerance) {
    const double q = 1.0 - alpha;
    const std::size_t last = pmf.size() - 1;
    long double num = 0, den = 0;
    long double qpow = 1;  // q^(s-1)
    PhiEvaluation ev;
    ev.alpha = alpha;
    for (std::size_t s = 1; s <= last; ++s) {
        const auto ss = static_cast<long double>(s);
        num += pmf[s] * ss * (ss - 1) * qpow;
        den += pmf[s] * ss * qpow;
        ev.truncation_point = s;
        if (s == last) {
            ev.tail_bound = 0;
            break;
        }
        // sum_{t>s} t^2 q^(t-1): term ratios ((t+1)/t)^2 q decrease in t.
        const long double next = static_cast<long double>(s + 1);
        const long double ratio = ((next + 1) / next) * ((next + 1) / next) * q;
        qpow *= q;
        if (ratio < 1) {
            const long double tail = next * next * qpow / (1 - ratio);
            const long double bound = tail * tail_max[s + 1];
            if (bound < tolerance) {
                ev.tail_bound = static_cast<double>(bound);
                break;
            }
        }
    }
    if (den <= 0) throw UndefinedPhi("Phi undefined: E[s (1-alpha)^(s-1)] = 0");
    const long double correction = (static_cast<long double>(q) / alpha) * pmf[1];
    ev.value = static_cast<double>((num - correction) / den);
    return ev;
}

}  // namespace

PhiEvaluation phi_numeric(const FlipCountDistribution& dist, double alpha, double tolerance) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    require_defined(dist);
    const auto pmf = dist.probabilities();
    return phi_with_tail(pmf, suffix_max(pmf), alpha, tolerance);
}

double phi_closed_poisson(double alpha, double c) {
    return (1.0 - alpha) / alpha * (c * alpha - std::exp(-(1.0 - alpha) * c));
}

double critical_f(double c, double x) {
    return c * x - std::exp(-c * (1.0 - x)) - x / (1.0 - x);
}

double critical_df_dx(double c, double x) {
    return c - c * std::exp(-c * (1.0 - x)) - 1.0 / ((1.0 - x) * (1.0 - x));
}

double critical_g_minus(double x) {
    // (1 - sqrt(1 - 4x)) / (2x(1-x)) == 2 / ((1 + sqrt(1 - 4x)) (1 - x))
    return 2.0 / ((1.0 + std::sqrt(std::max(0.0, 1.0 - 4.0 * x))) * (1.0 - x));
}

double critical_h_minus(double x) { return critical_f(critical_g_minus(x), x); }

CriticalConstants critical_constants(double tolerance) {
    double lo = 0.0, hi = 0.25;
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        (critical_h_minus(mid) < 0.0 ? lo : hi) = mid;
    }
    CriticalConstants out;
    out.alpha0 = 0.5 * (lo + hi);
    out.c0 = critical_g_minus(out.alpha0);
    out.f_residual = critical_f(out.c0, out.alpha0);
    out.df_dx_residual = critical_df_dx(out.c0, out.alpha0);
    return out;
}

double sup_phi_poisson(double c, double* argmax) {
    constexpr int kScan = 400;
    constexpr double kLo = 1e-6, kHi = 1.0 - 1e-6;
    int best = 0;
    double best_val = -INFINITY;
    auto at = [&](int i) { return kLo + (kHi - kLo) * i / kScan; };
    for (int i = 0; i <= kScan; ++i) {
        const double v = phi_closed_poisson(at(i), c);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    double a = at(std::max(0, best - 1));
    double b = at(std::min(kScan, best + 1));
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = phi_closed_poisson(x1, c);
    double f2 = phi_closed_poisson(x2, c);
    while (b - a > 1e-12) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = phi_closed_poisson(x2, c);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = phi_closed_poisson(x1, c);
        }
    }
    const double xm = 0.5 * (a + b);
    const double fm = phi_closed_poisson(xm, c);
    if (fm >= best_val) {
        best_val = fm;
        if (argmax) *argmax = xm;
    } else if (argmax) {
        *argmax = at(best);
    }
    return best_val;
}

double poisson_threshold(double tolerance) {
    double lo = 1.0, hi = 4.0;
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        (sup_phi_poisson(mid) >= 1.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> default_alpha_grid() {
    constexpr double kLo = 1e-3, kHi = 1.0 - 1e-3;
    std::vector<double> grid;
    grid.reserve(400);
    for (int i = 0; i < 200; ++i) grid.push_back(kLo * std::pow(0.5 / kLo, i / 199.0));
    for (int i = 0; i < 200; ++i) grid.push_back(kLo + (kHi - kLo) * i / 199.0);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(), [](double a, double b) { return b - a < 1e-12; }), grid.end());
    return grid;
}

std::vector<double> uniform_alpha_grid(double step) {
    std::vector<double> grid;
    for (int i = 1;; ++i) {
        const double a = i * step;
        if (a >= 1.0 - 1e-12) break;
        grid.push_back(a);
    }
    return grid;
}

std::vector<double> phi_on_grid(const FlipCountDistribution& dist, std::span<const double> grid,
                                double tolerance) {
    require_defined(dist);
    const auto pmf = dist.probabilities();
    const auto tail = suffix_max(pmf);
    std::vector<double> out(grid.size());
    const auto count = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        out[static_cast<std::size_t>(i)] =
            phi_with_tail(pmf, tail, grid[static_cast<std::size_t>(i)], tolerance).value;
    }
    return out;
}

std::vector<double> phi_on_grid_serial(const FlipCountDistribution& dist, std::span<const double> grid,
                                       double tolerance) {
    require_defined(dist);
    const auto pmf = dist.probabilities();
    const auto tail = suffix_max(pmf);
    std::vector<double> out;
    out.reserve(grid.size());
    for (double a : grid) out.push_back(phi_with_tail(pmf, tail, a, tolerance).value);
    return out;
}

std::string to_string(Classification c) {
    switch (c) {
        case Classification::Efficient: return "Efficient";
        case Classification::Hard: return "Hard";
        case Classification::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

DichotomyReport classify(const FlipCountDistribution& dist, std::span<const double> grid, double margin,
                         double delta) {
    DichotomyReport r;
    r.distribution = dist.describe();
    r.alpha_grid.assign(grid.begin(), grid.end());
    r.phi = phi_on_grid(dist, grid);
    r.margin = margin;
    const auto it = std::max_element(r.phi.begin(), r.phi.end());
    r.sup_phi = *it;
    r.argmax_alpha = r.alpha_grid[static_cast<std::size_t>(it - r.phi.begin())];
    if (r.sup_phi >= 1.0 + margin) {
        r.classification = Classification::Hard;
        r.witness_alpha = r.argmax_alpha;
    } else if (r.sup_phi <= 1.0 - margin) {
        r.classification = Classification::Efficient;
    }

    r.moments = dist.moments(delta);
    const auto& m = r.moments;
    double tail3 = 0;
    for (std::size_t k = 3; k <= dist.max_support(); ++k) tail3 += dist.pmf(k);
    r.flags.ratio_efficient = m.m1 > 0 && m.ratio() <= 1.0 - delta;
    if (m.s0 && m.m1 > 0) {
        const double big_c = 128.0 / (delta * delta * m.m1);
        r.flags.ratio_hard = m.p1 <= 1.0 / (big_c * static_cast<double>(*m.s0));
    }
    r.flags.power_law_hard = dist.kind() == DistKind::Zipf && dist.parameter() > 1.0 && dist.parameter() < 2.0;
    r.flags.p1_vs_tail_hard = m.p1 <= 4.0 / 9.0 * tail3 - delta;
    r.flags.p1_vs_p3_hard = m.p1 < 4.0 / 9.0 * dist.pmf(3);
    return r;
}

std::string DichotomyReport::to_json() const {
    nlohmann::json j;
    j["distribution"] = distribution;
    j["classification"] = to_string(classification);
    j["sup_phi"] = sup_phi;
    j["argmax_alpha"] = argmax_alpha;
    j["margin"] = margin;
    j["witness_alpha"] = witness_alpha ? nlohmann::json(*witness_alpha) : nlohmann::json(nullptr);
    j["moments"] = {{"m1", moments.m1},
                    {"m2", moments.m2},
                    {"m2_over_m1", moments.ratio()},
                    {"p0", moments.p0},
                    {"p1", moments.p1},
                    {"delta", moments.delta},
                    {"s0", moments.s0 ? nlohmann::json(*moments.s0) : nlohmann::json(nullptr)},
                    {"m1_cap_dominated", moments.m1_cap_dominated},
                    {"m2_cap_dominated", moments.m2_cap_dominated},
                    {"truncated_mass", moments.truncated_mass}};
    j["flags"] = {{"ratio_efficient", flags.ratio_efficient},
                  {"ratio_hard", flags.ratio_hard},
                  {"power_law_exponent_in_1_2", flags.power_law_hard},
                  {"p1_vs_tail_hard", flags.p1_vs_tail_hard},
                  {"p1_vs_p3_hard", flags.p1_vs_p3_hard}};
    j["alpha_grid"] = alpha_grid;
    j["phi"] = phi;
    return j.dump(2);
}

std::string DichotomyReport::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "alpha,phi\n";
    for (std::size_t i = 0; i < alpha_grid.size(); ++i) os << alpha_grid[i] << ',' << phi[i] << '\n';
    return os.str();
}

}  // namespace monoea
