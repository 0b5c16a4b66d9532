#include "doctest.h"
#include "oracles.hpp"

#include "wickworks/torusfield.hpp"

#include <cmath>
#include <numbers>
#include <set>

using namespace wickworks;

namespace {

constexpr double pi = std::numbers::pi;

struct Moments {
    double mean = 0, var = 0, n = 0;
    double stderr_mean() const { return std::sqrt(var / n); }
};

Moments moments(const std::vector<double>& xs) {
    Moments m;
    m.n = static_cast<double>(xs.size());
    for (double x : xs) m.mean += x;
    m.mean /= m.n;
    for (double x : xs) m.var += (x - m.mean) * (x - m.mean);
    m.var /= m.n - 1;
    return m;
}

// Centred Gaussian bump of width w scaled by lam, as real basis coefficients:
// the Fourier coefficient of lam^{-d} phi(x / lam) is (2 pi w^2)^{d/2} exp(-2 pi^2 w^2 lam^2 |k|^2).
std::map<RealMode, double> bump(const ModeLattice& L, double w, double lam) {
    std::map<RealMode, double> out;
    for (const RealMode& r : L.basis) {
        if (r.part == FourierPart::sine) continue;
        const double c = std::pow(2 * pi * w * w, L.d / 2.0) *
                         std::exp(-2 * pi * pi * w * w * lam * lam * static_cast<double>(squared_norm(r.k)));
        out[r] = r.part == FourierPart::constant ? c : std::numbers::sqrt2 * c;
    }
    return out;
}

double mode_space_norm2(const std::map<RealMode, double>& phihat) {
    double s = 0;
    for (const auto& [m, v] : phihat) s += v * v;
    return s;
}

}  // namespace

TEST_CASE("mode lattice") {
    const ModeLattice L = ModeLattice::build(2, 3);
    CHECK(L.modes.size() == 25);  // 2N^2 + 2N + 1
    CHECK(L.basis.size() == L.modes.size());
    std::set<Mode> modes(L.modes.begin(), L.modes.end());
    for (const Mode& k : L.modes) CHECK(modes.count(-k) == 1);
    for (double l : L.lambdas) CHECK(l >= 1.0);
    CHECK(lambda({1, 1, 0}, 2) == doctest::Approx(1 + 8 * pi * pi));
    CHECK(lambda({1, 0, 0}, 1) == doctest::Approx(1 + 2 * pi));
    CHECK_THROWS_AS(ModeLattice::build(4, 2), std::invalid_argument);
}

TEST_CASE("C_N and the truncated Green function") {
    CHECK(c_variance(1, 0) == 1.0);
    CHECK(c_variance(3, 0) == 1.0);
    for (int d = 1; d <= 3; ++d) {
        const std::vector<double> origin(d, 0.0);
        CHECK(green_truncated(origin, d, 6) == c_variance(d, 6));
        std::vector<double> x(d, 0.13), minus(d, -0.13);
        CHECK(green_truncated(x, d, 6) == doctest::Approx(green_truncated(minus, d, 6)).epsilon(1e-13));
    }

    // d = 2: C_N - log(N) / (2 pi) settles
    std::vector<double> offsets;
    for (int N = 16; N <= 256; N *= 2) offsets.push_back(c_variance(2, N) - std::log(N) / (2 * pi));
    for (std::size_t i = 2; i < offsets.size(); ++i)
        CHECK(std::abs(offsets[i] - offsets[i - 1]) <= std::abs(offsets[i - 1] - offsets[i - 2]));
    CHECK(std::abs(offsets.back() - offsets.front()) < 0.05);
    const double step = c_variance(2, 256) - c_variance(2, 128);
    CHECK(std::abs(step - std::log(2.0) / (2 * pi)) / (std::log(2.0) / (2 * pi)) < 0.05);
}

TEST_CASE("d = 1 Green function against the periodic resolvent") {
    // closed form of the same resolvent
    const double a = std::sqrt(2 * pi);
    for (double x : {0.0, 0.1, 0.25, 0.5, 0.8})
        CHECK(oracle::periodic_resolvent_green_d1(x) ==
              doctest::Approx(a * std::cosh(a * (x - 0.5)) / (2 * std::sinh(a / 2))).epsilon(1e-12));

    for (double x : {0.0, 0.1, 0.25, 0.5}) {
        const std::vector<double> pt = {x};
        double previous = 1e9;
        for (int N = 125; N <= 2000; N *= 2) {
            const double err = std::abs(green_truncated(pt, 1, N) - oracle::periodic_resolvent_green_d1(x));
            CHECK(err <= 1.0 / (pi * N) + 1e-12);
            if (x == 0.0) CHECK(err < previous);
            previous = err;
        }
    }
}

TEST_CASE("d = 3 Green function scaling window") {
    std::vector<double> lows;
    for (int N : {4, 8, 16, 32}) {
        double lo = 1e9, hi = 0;
        for (double t : {0.0, 0.01, 0.02, 0.05, 0.1, 0.15, 0.2, 0.25})
            for (int diag = 0; diag < 2; ++diag) {
                const double c = diag ? t / std::sqrt(3.0) : t;
                const std::vector<double> x = diag ? std::vector<double>{c, c, c} : std::vector<double>{c, 0, 0};
                const double r = green_truncated(x, 3, N) * (t + 1.0 / N);
                lo = std::min(lo, r);
                hi = std::max(hi, r);
            }
        CHECK(lo > 0.02);
        CHECK(hi < 1.0);
        lows.push_back(lo);
    }
    CHECK(lows.back() > 0.5 * lows[lows.size() - 2]);
}

TEST_CASE("sampling is deterministic and has the target mode covariance") {
    const ModeLattice L = ModeLattice::build(1, 3);
    CHECK(sample_field(SpectralProfile::gff(), L, 7).amplitudes == sample_field(SpectralProfile::gff(), L, 7).amplitudes);
    CHECK(sample_field(SpectralProfile::gff(), L, 7).amplitudes != sample_field(SpectralProfile::gff(), L, 8).amplitudes);

    for (const auto& [d, N] : std::vector<std::pair<int, int>>{{1, 3}, {2, 2}})
        for (const SpectralProfile& profile : {SpectralProfile::white(), SpectralProfile::gff()}) {
            const ModeLattice lat = ModeLattice::build(d, N);
            const std::size_t B = lat.basis.size();
            FieldSample f{lat, profile, 0, {}};
            std::mt19937_64 rng(100 + d);
            const int samples = 10000;
            std::vector<std::vector<double>> products(B * B);
            for (int s = 0; s < samples; ++s) {
                fill_amplitudes(f, rng);
                for (std::size_t i = 0; i < B; ++i)
                    for (std::size_t j = 0; j < B; ++j) products[i * B + j].push_back(f.amplitudes[i] * f.amplitudes[j]);
            }
            int bad = 0;
            for (std::size_t i = 0; i < B; ++i)
                for (std::size_t j = 0; j < B; ++j) {
                    const Moments m = moments(products[i * B + j]);
                    const double target = i == j ? std::pow(lat.basis_lambdas[i], -2 * profile.exponent()) : 0.0;
                    if (std::abs(m.mean - target) > 5 * m.stderr_mean()) ++bad;
                }
            CHECK(bad == 0);
        }
}

TEST_CASE("pointwise variance and covariance of the sampled GFF") {
    const ModeLattice L = ModeLattice::build(1, 8);
    FieldSample f{L, SpectralProfile::gff(), 0, {}};
    std::mt19937_64 rng(5);
    const std::vector<double> x = {0.3}, y = {0.45};
    std::vector<double> sq, cross;
    for (int s = 0; s < 10000; ++s) {
        fill_amplitudes(f, rng);
        const double a = f.value_at(x), b = f.value_at(y);
        sq.push_back(a * a);
        cross.push_back(a * b);
    }
    const Moments v = moments(sq), c = moments(cross);
    CHECK(std::abs(v.mean - c_variance(1, 8)) <= 4 * v.stderr_mean());
    const std::vector<double> diff = {x[0] - y[0]};
    CHECK(std::abs(c.mean - green_truncated(diff, 1, 8)) <= 4 * c.stderr_mean());
}

TEST_CASE("grid synthesis routes agree") {
    for (int d = 1; d <= 3; ++d) {
        const ModeLattice L = ModeLattice::build(d, 3);
        const FieldSample f = sample_field(SpectralProfile::gff(), L, 11);
        const int M = 13;
        const std::vector<double> direct = f.grid(M, GridMethod::direct);
        const std::vector<double> fast = f.grid(M, GridMethod::fft);
        REQUIRE(direct.size() == fast.size());
        for (std::size_t i = 0; i < direct.size(); ++i) CHECK(direct[i] == doctest::Approx(fast[i]).epsilon(1e-10));
        std::vector<double> pt(d, 0.0);
        pt[0] = 1.0 / M;
        CHECK(f.value_at(pt) == doctest::Approx(direct[d == 1 ? 1 : (d == 2 ? M : M * M)]));
    }
}

TEST_CASE("white noise pairings") {
    const ModeLattice L = ModeLattice::build(1, 4);
    const FieldSample f = sample_field(SpectralProfile::white(), L, 3);
    CHECK(pair_with_testfunction(f, {{RealMode{}, 1.0}}) == f.amplitudes[4]);  // k = 0 sits mid-ball
    CHECK_THROWS_AS(pair_with_testfunction(f, {{RealMode{{7, 0, 0}, FourierPart::cosine}, 1.0}}), std::out_of_range);

    // orthogonal: cos 2 pi x and sin 2 pi x; overlapping: constant + cos vs constant
    const std::map<RealMode, double> phi1 = {{RealMode{{1, 0, 0}, FourierPart::cosine}, 1.0}};
    const std::map<RealMode, double> phi2 = {{RealMode{{1, 0, 0}, FourierPart::sine}, 1.0}};
    const std::map<RealMode, double> phi3 = {{RealMode{}, 2.0}, {RealMode{{2, 0, 0}, FourierPart::cosine}, 1.0}};
    const std::map<RealMode, double> phi4 = {{RealMode{}, 1.5}, {RealMode{{1, 0, 0}, FourierPart::sine}, -1.0}};
    FieldSample g{L, SpectralProfile::white(), 0, {}};
    std::mt19937_64 rng(9);
    std::vector<double> p12, p34;
    for (int s = 0; s < 10000; ++s) {
        fill_amplitudes(g, rng);
        p12.push_back(pair_with_testfunction(g, phi1) * pair_with_testfunction(g, phi2));
        p34.push_back(pair_with_testfunction(g, phi3) * pair_with_testfunction(g, phi4));
    }
    const Moments m12 = moments(p12), m34 = moments(p34);
    CHECK(std::abs(m12.mean) <= 4 * m12.stderr_mean());
    CHECK(std::abs(m34.mean - 3.0) <= 4 * m34.stderr_mean());
}

TEST_CASE("white noise scaling of a bump") {
    const double w = 0.08;
    for (int d = 1; d <= 2; ++d) {
        const ModeLattice L = ModeLattice::build(d, d == 1 ? 48 : 64);
        const double norm2 = std::pow(pi * w * w, d / 2.0);
        for (double lam : {1.0, 0.5, 0.25}) {
            const auto phihat = bump(L, w, lam);
            const double exact = mode_space_norm2(phihat);
            CHECK(exact == doctest::Approx(std::pow(lam, -d) * norm2).epsilon(1e-6));
            if (d == 1) {
                FieldSample g{L, SpectralProfile::white(), 0, {}};
                std::mt19937_64 rng(41);
                std::vector<double> sq;
                for (int s = 0; s < 10000; ++s) {
                    fill_amplitudes(g, rng);
                    const double p = pair_with_testfunction(g, phihat);
                    sq.push_back(p * p);
                }
                const Moments m = moments(sq);
                CHECK(std::abs(m.mean - std::pow(lam, -d) * norm2) <= 4 * m.stderr_mean());
            }
        }
    }
}

TEST_CASE("Sobolev sums") {
    for (int N : {4, 16})
        CHECK(sobolev_sum(0, 1, N, SpectralProfile::gff()) == doctest::Approx(c_variance(1, N)).epsilon(1e-13));
    CHECK_THROWS_AS(sobolev_sum(0, 1, 4, SpectralProfile::fractional(0.3)), std::invalid_argument);

    // Ratios of successive doubling increments: below 1 converges, above 1 diverges.
    auto increment_ratios = [](double s, const SpectralProfile& p) {
        std::vector<double> values, ratios;
        for (int N = 16; N <= 256; N *= 2) values.push_back(sobolev_sum(s, 2, N, p));
        for (std::size_t i = 2; i < values.size(); ++i)
            ratios.push_back((values[i] - values[i - 1]) / (values[i - 1] - values[i - 2]));
        return ratios;
    };
    for (double r : increment_ratios(-1.01, SpectralProfile::white())) CHECK(r < 1.0);
    for (double r : increment_ratios(-0.99, SpectralProfile::white())) CHECK(r > 1.0);
    for (double r : increment_ratios(-0.01, SpectralProfile::gff())) CHECK(r < 1.0);
    for (double r : increment_ratios(0.01, SpectralProfile::gff())) CHECK(r > 1.0);
}

TEST_CASE("Wick integral variance") {
    for (int d = 1; d <= 3; ++d) {
        CompensatedSum s;
        for (double l : ModeLattice::build(d, 5).lambdas) s.add(1.0 / (l * l));
        CHECK(wick_integral_variance(d, 5, 2) == doctest::Approx(2 * s.value()).epsilon(1e-14));
    }
    for (int d = 1; d <= 2; ++d)
        for (int N = 1; N <= 4; ++N)
            for (int n = 2; n <= 4; ++n)
                CHECK(wick_integral_variance(d, N, n) ==
                      doctest::Approx(oracle::wick_variance_brute_force(d, N, n)).epsilon(1e-12));

    std::vector<double> values;
    for (int N : {8, 16, 32, 64}) values.push_back(wick_integral_variance(2, N, 3));
    for (std::size_t i = 1; i < values.size(); ++i) CHECK(values[i] > values[i - 1]);
    for (std::size_t i = 2; i < values.size(); ++i) CHECK(values[i] - values[i - 1] < values[i - 1] - values[i - 2]);

    // FFT and direct convolution agree
    for (int n = 3; n <= 4; ++n)
        CHECK(wick_integral_variance(3, 4, n, ConvolutionMethod::fft) ==
              doctest::Approx(wick_integral_variance(3, 4, n, ConvolutionMethod::direct)).epsilon(1e-12));
}

TEST_CASE("parallel direct convolution is bit-identical to serial") {
    const ModeArray w = weight_array(2, 12);
    const ModeArray serial = convolve(w, w, ConvolutionMethod::direct, 1);
    const ModeArray parallel = convolve(w, w, ConvolutionMethod::direct, 4);
    CHECK(std::equal(serial.values().begin(), serial.values().end(), parallel.values().begin()));
    const ModeArray fast = convolve(w, w, ConvolutionMethod::fft);
    for (std::size_t i = 0; i < serial.size(); ++i) CHECK(std::abs(serial.values()[i] - fast.values()[i]) < 1e-15);
}

TEST_CASE("Wick powers of the sampled field") {
    const int N = 4, M = 4 * N + 1;
    const ModeLattice L = ModeLattice::build(1, N);
    const FieldSample f = sample_field(SpectralProfile::gff(), L, 2);
    CHECK(wick_power_field(f, 1, M) == f.grid(M));
    CHECK_THROWS_AS(wick_power_field(f, 0, M), std::invalid_argument);

    FieldSample g{L, SpectralProfile::gff(), 0, {}};
    std::mt19937_64 rng(77);
    std::vector<double> integrals;
    for (int s = 0; s < 10000; ++s) {
        fill_amplitudes(g, rng);
        double sum = 0;
        for (double v : wick_power_field(g, 2, M)) sum += v;
        integrals.push_back(sum / M);
    }
    const Moments m = moments(integrals);
    CHECK(std::abs(m.mean) <= 4 * m.stderr_mean());
    // standard error of the sample variance from the fourth central moment
    double m4 = 0;
    for (double v : integrals) m4 += std::pow(v - m.mean, 4);
    m4 /= m.n;
    const double se_var = std::sqrt((m4 - m.var * m.var) / m.n);
    CHECK(std::abs(m.var - wick_integral_variance(1, N, 2)) <= 4 * se_var);
}

TEST_CASE("GFF moments in d = 1") {
    const int N = 8;
    const ModeLattice L = ModeLattice::build(1, N);
    FieldSample g{L, SpectralProfile::gff(), 0, {}};
    std::mt19937_64 rng(13);
    const double C = c_variance(1, N);
    const std::vector<double> x = {0.7};
    std::vector<std::vector<double>> powers(3);
    for (int s = 0; s < 20000; ++s) {
        fill_amplitudes(g, rng);
        const double v = g.value_at(x);
        for (int p = 1; p <= 3; ++p) powers[p - 1].push_back(std::pow(v, 2 * p) / std::pow(C, p));
    }
    for (int p = 1; p <= 3; ++p) {
        const Moments m = moments(powers[p - 1]);
        CHECK(std::abs(m.mean - to_double(Rational(double_factorial(2 * p - 1)))) <= 4 * m.stderr_mean());
    }
}

TEST_CASE("Young-type lattice sums") {
    const YoungReport a = young_sum_check(3, 2, 2, 8, 64);
    const YoungReport b = young_sum_check(3, 2, 2, 16, 64);
    CHECK(a.zero_excluded);
    CHECK(a.constant > 0);
    CHECK(std::abs(b.constant - a.constant) / a.constant < 0.05);
    // truncation stability of the inner sum
    const YoungReport c = young_sum_check(3, 2, 2, 4, 32), e = young_sum_check(3, 2, 2, 4, 64);
    CHECK(std::abs(c.constant - e.constant) / e.constant < 0.01);
    // d = 2 needs fractional exponents
    const YoungReport f = young_sum_check(2, 1.5, 1.5, 8, 64), g = young_sum_check(2, 1.5, 1.5, 8, 128);
    CHECK(std::isfinite(f.constant));
    CHECK(std::abs(f.constant - g.constant) / g.constant < 0.01);
    CHECK_THROWS_AS(young_sum_check(2, 1, 1, 4), std::invalid_argument);
    CHECK_THROWS_AS(young_sum_check(3, 3, 1, 4), std::invalid_argument);
}

TEST_CASE("increment variance of the d = 1 GFF") {
    CHECK(gff1_increment_variance(0.3, 0.3, 64) == 0.0);
    for (double h : {0.1, 0.05, 0.02}) {
        const double ratio = gff1_increment_variance(0.2, 0.2 + h / 2, 512) / gff1_increment_variance(0.2, 0.2 + h, 512);
        CHECK(ratio >= 0.3);
        CHECK(ratio <= 0.7);
    }
    auto fitted = [](int N) {
        double c = 0;
        for (double h = 0.001; h < 0.5; h *= 1.5) c = std::max(c, gff1_increment_variance(0.0, h, N) / h);
        return c;
    };
    const double c1 = fitted(256), c2 = fitted(512);
    CHECK(std::abs(c2 - c1) / c1 < 0.05);
    for (double h : {0.01, 0.1, 0.3}) CHECK(gff1_increment_variance(0.1, 0.1 + h, 512) <= c2 * h);

    const ModeLattice L = ModeLattice::build(1, 16);
    FieldSample g{L, SpectralProfile::gff(), 0, {}};
    std::mt19937_64 rng(17);
    const std::vector<double> x = {0.1}, y = {0.22};
    std::vector<double> sq;
    for (int s = 0; s < 10000; ++s) {
        fill_amplitudes(g, rng);
        const double inc = g.value_at(y) - g.value_at(x);
        sq.push_back(inc * inc);
    }
    const Moments m = moments(sq);
    CHECK(std::abs(m.mean - gff1_increment_variance(0.1, 0.22, 16)) <= 4 * m.stderr_mean());
}
