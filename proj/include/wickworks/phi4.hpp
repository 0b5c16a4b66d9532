#pragma once

// Perturbative expansion of the quartic model on the torus: partition-function
// ratios, their logarithm, the two-point function, the d = 3 counterterms and
// Monte Carlo checks.

#include "wickworks/diagram.hpp"
#include "wickworks/feynman.hpp"
#include "wickworks/rational.hpp"
#include "wickworks/ring.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace wickworks {

// wick: vertices are Wick-ordered quartic powers (no self-contractions).
// plain: ordinary fourth powers, self-loops allowed (orders <= 2 only).
enum class EnergyVariant { wick, plain };
std::string to_string(EnergyVariant v);

struct SeriesTerm {
    int n = 0;
    Rational factor;       // (-1)^n / n!
    DiagramSum diagrams;   // matching counts, before the factor
    double value = 0;      // factor * sum of count * valuation
    // Exact rational multiplying the valuation when one class carries the term.
    Rational display_coefficient() const;
};

struct ExpansionSeries {
    double d = 1;
    int N = 0;
    int order = 0;
    EnergyVariant variant = EnergyVariant::wick;
    std::vector<SeriesTerm> terms;  // n = 0..order

    double evaluate(double alpha) const;
};

// Vacuum diagrams of E[X^n] with X the integral of the quartic vertex.
DiagramSum quartic_moment(int n, EnergyVariant variant = EnergyVariant::wick);

// E[exp(-alpha X)] = sum_n (-alpha)^n / n! E[X^n].
ExpansionSeries partition_ratio_series(double d, int N, int order, EnergyVariant variant = EnergyVariant::wick);

enum class LinkedClusterRoute { connected_filter, log_star };
// log E[exp(-alpha X)] from connected diagrams, or as the star-logarithm of
// the moment sequence computed in the algebra of diagram sums.
ExpansionSeries log_partition_series(double d, int N, int order,
                                     LinkedClusterRoute route = LinkedClusterRoute::connected_filter);
// Moments as a functional with diagram-sum values, entries 0..order.
std::vector<DiagramSum> log_star_of_moments(int order);

// <phi(x) phi(y)> to the given order (<= 2): diagrams on two labelled
// 1-valent vertices x, y and n quartic vertices in which every component
// reaches x or y (vacuum bubbles cancel against the normalisation).
ExpansionSeries two_point_series(double d, int N, int order, std::span<const double> x, std::span<const double> y);

// Mass and energy counterterms for d = 3:
// beta = beta2 alpha^2 Pi(sunset), gamma = gamma2 alpha^2 Pi(melon) + gamma3 alpha^3 Pi(double triangle).
struct CountertermSet {
    double alpha = 0;
    int N = 0;
    Rational beta2{48};
    Rational gamma2{12};
    Rational gamma3{-288};
    double sunset = 0, melon = 0, double_triangle = 0;  // valuations

    double beta() const;
    double gamma() const;
    // Coefficients with the alpha powers stripped.
    double beta_per_alpha2() const { return to_double(beta2) * sunset; }
};
CountertermSet counterterms_d3(double alpha, int N);

struct Thresholds {
    double d = 3;
    int n_star_e = 0;  // floor(d / (4 - d))
    int n_star_m = 0;  // floor(2 / (4 - d))
};
Rational d_star_e(int n);  // 4 - 4 / (n + 1)
Rational d_star_m(int n);  // 4 - 2 / n
Thresholds thresholds(double d);

// Degree of the quartic vacuum classes with n vertices: 4n - (n + 1) d.
AffineDegree quartic_vacuum_degree(int n);

// Mass-type counterterm of order n in the fractional model: normalisation
// times the sum of valuations of the amputated divergent two-leg classes
// with n vertices. The default normalisation makes sigma_2 = 2 beta2 Pi(sunset),
// i.e. beta = sum (-alpha)^n / n! sigma_n at d = 3.
double sigma_counterterm(int n, double d, int N, double normalisation = 96.0);

struct CommutativityRow {
    int n = 0;
    double mixed = 0;  // connected (X, Y) diagrams with beta inserted, minus gamma
    double bphz = 0;   // (-1)^n / n! BPHZ valuation of the connected quartic classes
    double scale = 0;  // largest single contribution entering either side
    double relative_difference() const;
};
struct CommutativityReport {
    int N = 0;
    std::vector<CommutativityRow> rows;
    // (n, -twisted antipode valuation at order n, gamma coefficient at order n)
    std::vector<std::array<double, 3>> gamma_rows;
    double max_relative_difference() const;
};
CommutativityReport wick_map_commutativity_check(int N, int order);

// Image of X^n under the Wick map whose only cumulant is kappa(x^2) = 2 b Y,
// with beta = b alpha^2, as a polynomial in the symbols X, Y, b.
RingElem wick_map_of_power(int n);

struct MonteCarloResult {
    double alpha = 0;
    double estimate = 0;
    double stderr_ = 0;
};
// E[exp(-alpha X)] for Gaussian free fields on T^d, d in {1, 2}, with X the
// grid integral of the Wick-ordered quartic power on a grid of side `grid`
// (default 4N + 1, which integrates the quartic field exactly). The same
// samples serve every alpha.
std::vector<MonteCarloResult> mc_partition_ratio(int d, int N, std::span<const double> alphas, std::int64_t samples,
                                                 std::uint64_t seed, int grid = 0);
MonteCarloResult mc_partition_ratio(int d, int N, double alpha, std::int64_t samples, std::uint64_t seed,
                                    int grid = 0);

}  // namespace wickworks
