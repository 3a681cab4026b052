#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "monoea/flip_distribution.hpp"

namespace monoea {

/// Raised when E[s (1-alpha)^(s-1)] = 0, i.e. D is concentrated at 0.
class UndefinedPhi : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct PhiEvaluation {
    double alpha = 0;
    double value = 0;
    std::size_t truncation_point = 0;  // last s included in the sums
    double tail_bound = 0;             // bound on every omitted sum tail
};

/// Phi(alpha) = (E[s(s-1)q^(s-1)] - ((1-alpha)/alpha) Pr[s=1]) / E[s q^(s-1)],
/// q = 1 - alpha, evaluated by summation over the support of D. Summation
/// stops once sum_{s>K} s^2 q^(s-1) * max_{s>K} Pr[s] < tolerance.
PhiEvaluation phi_numeric(const FlipCountDistribution& dist, double alpha, double tolerance = 1e-13);

/// Phi for s ~ Poi(c): ((1-alpha)/alpha) (c alpha - exp(-(1-alpha) c)).
double phi_closed_poisson(double alpha, double c);

// Critical-point machinery. f(c, x) >= 0 iff Phi(x, c) >= 1 for Poisson flips.
double critical_f(double c, double x);
double critical_df_dx(double c, double x);
/// Smaller root of x (1-x)^2 c^2 - (1-x) c + 1 = 0 (f = 0 and df/dx = 0
/// combined), written without cancellation at x = 0 (where it equals 1).
double critical_g_minus(double x);
/// h_-(x) = f(g_-(x), x); increasing on [0, 1/4].
double critical_h_minus(double x);

struct CriticalConstants {
    double alpha0 = 0;
    double c0 = 0;
    double f_residual = 0;      // f(c0, alpha0)
    double df_dx_residual = 0;  // df/dx(c0, alpha0)
};

/// Bisects h_- on [0, 1/4] down to a bracket of width `tolerance`.
CriticalConstants critical_constants(double tolerance = 1e-13);

/// max over alpha in (0, 1) of phi_closed_poisson(alpha, c); coarse scan then
/// golden-section refinement. Writes the maximizer to *argmax if given.
double sup_phi_poisson(double c, double* argmax = nullptr);

/// Smallest c with sup_alpha Phi(alpha, c) >= 1, by bisection on [1, 4].
double poisson_threshold(double tolerance = 1e-11);

/// uniform points; the shared endpoint 1e-3 appears once.
/// a uniform grid.
std::vector<double> default_alpha_grid();
/// {step, 2 step, ...} strictly inside (0, 1).
std::vector<double> uniform_alpha_grid(double step);

/// Phi at every grid point; OpenMP-parallel over the grid.
std::vector<double> phi_on_grid(const FlipCountDistribution& dist, std::span<const double> grid,
                                double tolerance = 1e-13);
/// Serial reference for phi_on_grid.
std::vector<double> phi_on_grid_serial(const FlipCountDistribution& dist, std::span<const double> grid,
                                       double tolerance = 1e-13);

enum class Classification { Efficient, Hard, Inconclusive };
std::string to_string(Classification c);

/// Sufficient conditions read off the moments of D.
struct MomentFlags {
    bool ratio_efficient = false;   // m2/m1 <= 1 - delta
    bool ratio_hard = false;        // m2/m1 >= 1 + delta and p1 <= 1 / (C s0), C = 128 / (delta^2 m1)
    bool power_law_hard = false;    // Zipf with kappa in (1, 2)
    bool p1_vs_tail_hard = false;   // p1 <= (4/9) Pr[D >= 3] - delta
    bool p1_vs_p3_hard = false;     // p1 < (4/9) Pr[D = 3]   (summary-table form)
};

struct DichotomyReport {
    std::string distribution;
    std::vector<double> alpha_grid;
    std::vector<double> phi;
    double sup_phi = 0;
    double argmax_alpha = 0;
    double margin = 0;
    Classification classification = Classification::Inconclusive;
    std::optional<double> witness_alpha;  // set when Hard
    MomentReport moments;
    MomentFlags flags;

    std::string to_json() const;
    /// Two columns "alpha,phi" with a header row.
    std::string to_csv() const;
};

/// Efficient if sup Phi <= 1 - margin, Hard if some Phi >= 1 + margin (the
/// witness is the argmax), Inconclusive otherwise.
DichotomyReport classify(const FlipCountDistribution& dist, std::span<const double> grid,
                         double margin = 1e-3, double delta = 0.1);

}  // namespace monoea
