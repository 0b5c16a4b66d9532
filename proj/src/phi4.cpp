#include "wickworks/phi4.hpp"

#include "wickworks/budget.hpp"
#include "wickworks/cumulants.hpp"
#include "wickworks/torusfield.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace wickworks {

std::string to_string(EnergyVariant v) { return v == EnergyVariant::wick ? "wick" : "plain"; }

Rational SeriesTerm::display_coefficient() const {
    if (diagrams.size() != 1) throw std::logic_error("display_coefficient: term has several diagram classes");
    return factor * diagrams.terms().begin()->second;
}

double ExpansionSeries::evaluate(double alpha) const {
    double s = 0, p = 1;
    for (const SeriesTerm& t : terms) {
        s += t.value * p;
        p *= alpha;
    }
    return s;
}

namespace {

Rational sign_over_factorial(int n) {
    Rational f(Integer(1), factorial(n));
    return n % 2 ? Rational(-f) : f;
}

void check_order(int order, int cap) {
    if (order < 0) throw std::invalid_argument("expansion order must be nonnegative");
    if (order > std::min(cap, budget().max_order))
        throw BudgetExceeded("expansion order " + std::to_string(order) + " exceeds the configured maximum");
}

SeriesTerm make_term(int n, DiagramSum diagrams, double d, int N) {
    SeriesTerm t;
    t.n = n;
    t.factor = sign_over_factorial(n);
    t.diagrams = std::move(diagrams);
    t.value = to_double(t.factor) * valuate(t.diagrams, d, N) + 0.0;  // no negative zero
    return t;
}

std::vector<int> quartic_arities(int n) { return std::vector<int>(n, 4); }

}  // namespace

DiagramSum quartic_moment(int n, EnergyVariant variant) {
    if (n == 0) return DiagramSum::unit();
    const std::vector<int> a = quartic_arities(n);
    return generate_diagrams(a, {}, variant == EnergyVariant::plain);
}

ExpansionSeries partition_ratio_series(double d, int N, int order, EnergyVariant variant) {
    check_order(order, variant == EnergyVariant::plain ? 2 : 8);
    ExpansionSeries s{d, N, order, variant, {}};
    for (int n = 0; n <= order; ++n) s.terms.push_back(make_term(n, quartic_moment(n, variant), d, N));
    return s;
}

std::vector<DiagramSum> log_star_of_moments(int order) {
    std::vector<DiagramSum> moments;
    for (int n = 0; n <= order; ++n) moments.push_back(quartic_moment(n));
    const Functional<DiagramSum> cumulants = log_star(Functional<DiagramSum>(moments));
    return cumulants.values();
}

ExpansionSeries log_partition_series(double d, int N, int order, LinkedClusterRoute route) {
    check_order(order, 8);
    ExpansionSeries s{d, N, order, EnergyVariant::wick, {}};
    std::vector<DiagramSum> connected;
    if (route == LinkedClusterRoute::log_star) {
        connected = log_star_of_moments(order);
    } else {
        for (int n = 0; n <= order; ++n) connected.push_back(n == 0 ? DiagramSum{} : quartic_moment(n).connected_part());
    }
    for (int n = 0; n <= order; ++n) s.terms.push_back(make_term(n, connected[n], d, N));
    return s;
}

ExpansionSeries two_point_series(double d, int N, int order, std::span<const double> x, std::span<const double> y) {
    if (order < 0 || order > 2) throw std::invalid_argument("two_point_series: order must be 0, 1 or 2");
    ExpansionSeries s{d, N, order, EnergyVariant::wick, {}};
    for (int n = 0; n <= order; ++n) {
        std::vector<int> a{1, 1};
        a.insert(a.end(), static_cast<std::size_t>(n), 4);
        DiagramSum kept;
        for (const auto& [g, c] : generate_diagrams(a, {"x", "y"}).terms()) {
            bool anchored = true;
            for (const Diagram& comp : connected_components(g))
                anchored = anchored && std::any_of(comp.label.begin(), comp.label.end(),
                                                   [](const std::string& l) { return !l.empty(); });
            if (anchored) kept.add(g, c);
        }
        SeriesTerm t;
        t.n = n;
        t.factor = sign_over_factorial(n);
        t.diagrams = kept;
        CompensatedSum v;
        for (const auto& [g, c] : kept.terms()) v.add(to_double(c) * two_point_value(g, d, N, x, y));
        t.value = to_double(t.factor) * v.value() + 0.0;
        s.terms.push_back(std::move(t));
    }
    return s;
}

double CountertermSet::beta() const { return to_double(beta2) * alpha * alpha * sunset; }

double CountertermSet::gamma() const {
    return to_double(gamma2) * alpha * alpha * melon + to_double(gamma3) * alpha * alpha * alpha * double_triangle;
}

CountertermSet counterterms_d3(double alpha, int N) {
    CountertermSet c;
    c.alpha = alpha;
    c.N = N;
    c.sunset = valuate(named::sunset(), 3, N);
    c.melon = valuate(named::melon(), 3, N);
    c.double_triangle = valuate(named::double_triangle(), 3, N);
    return c;
}

Rational d_star_e(int n) {
    if (n < 1) throw std::invalid_argument("d_star_e: n must be positive");
    return Rational(4) - Rational(Integer(4), Integer(n + 1));
}

Rational d_star_m(int n) {
    if (n < 1) throw std::invalid_argument("d_star_m: n must be positive");
    return Rational(4) - Rational(Integer(2), Integer(n));
}

Thresholds thresholds(double d) {
    if (d >= 4) throw std::invalid_argument("thresholds: d must be below 4");
    if (d < 3) throw std::invalid_argument("thresholds: d must be at least 3");
    return {d, static_cast<int>(std::floor(d / (4 - d))), static_cast<int>(std::floor(2 / (4 - d)))};
}

AffineDegree quartic_vacuum_degree(int n) { return {4 * n, -(n + 1)}; }

double sigma_counterterm(int n, double d, int N, double normalisation) {
    double s = 0;
    for (const Diagram& g : two_leg_diagrams(n)) s += valuate(amputate(g), d, N);
    return normalisation * s;
}

double CommutativityRow::relative_difference() const {
    const double diff = std::abs(mixed - bphz);
    return scale > 0 ? diff / scale : diff;
}

double CommutativityReport::max_relative_difference() const {
    double m = 0;
    for (const auto& r : rows) m = std::max(m, r.relative_difference());
    return m;
}

CommutativityReport wick_map_commutativity_check(int N, int order) {
    check_order(order, 4);
    constexpr double d = 3;
    const CountertermSet ct = counterterms_d3(1.0, N);
    const double b = ct.beta_per_alpha2();
    const double gamma_coeff[4] = {0, 0, to_double(ct.gamma2) * ct.melon, to_double(ct.gamma3) * ct.double_triangle};

    CommutativityReport report;
    report.N = N;
    for (int n = 1; n <= order; ++n) {
        CommutativityRow row;
        row.n = n;
        CompensatedSum mixed;
        // X^k Y^m with k + 2m = n; each Y carries -beta = -b alpha^2.
        for (int m = 0; 2 * m <= n; ++m) {
            const int k = n - 2 * m;
            std::vector<int> a(k, 4);
            a.insert(a.end(), static_cast<std::size_t>(m), 2);
            const DiagramSum diagrams = a.empty() ? DiagramSum{} : generate_diagrams(a).connected_part();
            const Rational f = sign_over_factorial(k) * sign_over_factorial(m);
            for (const auto& [g, c] : diagrams.terms()) {
                const double term = to_double(f * c) * std::pow(b, m) * valuate(g, d, N);
                row.scale = std::max(row.scale, std::abs(term));
                mixed.add(term);
            }
        }
        if (n < 4) {
            mixed.add(-gamma_coeff[n]);
            row.scale = std::max(row.scale, std::abs(gamma_coeff[n]));
        }
        row.mixed = mixed.value();

        const DiagramSum quartic = quartic_moment(n).connected_part();
        const Rational f = sign_over_factorial(n);
        CompensatedSum bphz, twisted;
        for (const auto& [g, c] : quartic.terms()) {
            const double term = to_double(f * c) * bphz_valuate(g, d, N);
            row.scale = std::max(row.scale, std::abs(to_double(f * c) * valuate(g, d, N)));
            bphz.add(term);
            twisted.add(to_double(f * c) * valuate(twisted_antipode(g, d), d, N));
        }
        row.bphz = bphz.value();
        report.rows.push_back(row);
        if (n >= 2) report.gamma_rows.push_back({double(n), -twisted.value(), n < 4 ? gamma_coeff[n] : 0.0});
    }
    return report;
}

RingElem wick_map_of_power(int n) {
    const RingElem kappa2 = RingElem(2) * RingElem::symbol("b") * RingElem::symbol("Y");
    return wick_poly_to_ring(wick_map(quadratic_cumulant(std::max(n, 2), kappa2), n), "X");
}

std::vector<MonteCarloResult> mc_partition_ratio(int d, int N, std::span<const double> alphas, std::int64_t samples,
                                                 std::uint64_t seed, int grid) {
    if (d != 1 && d != 2) throw std::invalid_argument("mc_partition_ratio: d must be 1 or 2");
    if (samples <= 1) throw std::invalid_argument("mc_partition_ratio: need at least two samples");
    const int M = grid > 0 ? grid : 4 * N + 1;
    const ModeLattice lattice = ModeLattice::build(d, N);
    const GridSynthesizer synth(lattice, M, d == 1 ? GridMethod::direct : GridMethod::fft);
    const double C = c_variance(d, N);
    const std::size_t A = alphas.size();

    constexpr std::int64_t batch = 1024;
    const std::size_t batches = static_cast<std::size_t>((samples + batch - 1) / batch);
    std::vector<std::vector<std::pair<double, double>>> sums(batches, std::vector<std::pair<double, double>>(A));
    parallel_for(batches, 0, [&](std::size_t bi) {
        std::mt19937_64 rng(stream_seed(seed, bi));
        FieldSample f{lattice, SpectralProfile::gff(), seed, {}};
        const std::int64_t count = std::min<std::int64_t>(batch, samples - static_cast<std::int64_t>(bi) * batch);
        for (std::int64_t i = 0; i < count; ++i) {
            fill_amplitudes(f, rng);
            const std::vector<double> phi = synth(f.amplitudes);
            CompensatedSum x;
            for (double v : phi) {
                const double v2 = v * v;
                x.add(v2 * v2 - 6 * C * v2 + 3 * C * C);
            }
            const double X = x.value() / static_cast<double>(phi.size());
            for (std::size_t a = 0; a < A; ++a) {
                const double w = std::exp(-alphas[a] * X);
                sums[bi][a].first += w;
                sums[bi][a].second += w * w;
            }
        }
    });
    std::vector<MonteCarloResult> out;
    const double n = static_cast<double>(samples);
    for (std::size_t a = 0; a < A; ++a) {
        double s1 = 0, s2 = 0;
        for (const auto& b : sums) {
            s1 += b[a].first;
            s2 += b[a].second;
        }
        const double mean = s1 / n;
        const double var = std::max(0.0, (s2 / n - mean * mean) * n / (n - 1));
        out.push_back({alphas[a], mean, std::sqrt(var / n)});
    }
    return out;
}

MonteCarloResult mc_partition_ratio(int d, int N, double alpha, std::int64_t samples, std::uint64_t seed, int grid) {
    const double a[1] = {alpha};
    return mc_partition_ratio(d, N, a, samples, seed, grid).front();
}

}  // namespace wickworks
