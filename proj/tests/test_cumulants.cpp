#include "doctest.h"
#include "oracles.hpp"

#include "wickworks/cumulants.hpp"

using namespace wickworks;

namespace {

Functional<Rational> gaussian_cumulants(int D) {
    Functional<Rational> k(D);
    k[2] = 1;
    return k;
}

}  // namespace

TEST_CASE("convolution basics") {
    std::mt19937_64 rng(11);
    const auto phi = oracle::random_functional(rng, 8, false, false);
    CHECK(convolve(Functional<Rational>::unit(8), phi) == phi);

    const auto mu = exp_star(gaussian_cumulants(4));
    CHECK(convolve(mu, mu)(2) == 2);

    CHECK_THROWS_AS(convolve(Functional<Rational>(3), Functional<Rational>(4)), std::invalid_argument);
    CHECK_THROWS_AS(phi(9), std::out_of_range);
}

TEST_CASE("convolution is associative and matches the power-series product") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = oracle::random_functional(rng, 10, false, false);
        const auto b = oracle::random_functional(rng, 10, false, false);
        const auto c = oracle::random_functional(rng, 10, false, false);
        CHECK(convolve(convolve(a, b), c) == convolve(a, convolve(b, c)));
        const auto ab = convolve(a, b);
        const auto series = oracle::cauchy_product_of_transforms(a, b);
        for (int n = 0; n <= 10; ++n) CHECK(ab(n) / Rational(factorial(n)) == series[n]);
    }
}

TEST_CASE("convolution inverse") {
    CHECK(conv_inverse(Functional<Rational>::unit(6)) == Functional<Rational>::unit(6));
    const auto mu = exp_star(gaussian_cumulants(10));
    CHECK(convolve(mu, conv_inverse(mu)) == Functional<Rational>::unit(10));
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const auto phi = oracle::random_functional(rng, 8, false, true);
        const auto inv = conv_inverse(phi);
        CHECK(convolve(phi, inv) == Functional<Rational>::unit(8));
        CHECK(inv == oracle::inverse_by_neumann(phi));
    }
    CHECK_THROWS_AS(conv_inverse(Functional<Rational>(3)), std::invalid_argument);
}

TEST_CASE("exp and log in the convolution algebra") {
    CHECK(exp_star(Functional<Rational>(5)) == Functional<Rational>::unit(5));
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 20; ++trial) {
        const auto phi = oracle::random_functional(rng, 8, true, false);
        CHECK(log_star(exp_star(phi)) == phi);
        CHECK(exp_star(phi) == oracle::exp_by_series(phi));
    }
    const auto mu = exp_star(gaussian_cumulants(12));
    for (int k = 0; k <= 6; ++k) {
        CHECK(mu(2 * k) == Rational(factorial(2 * k), factorial(k) * Integer(Integer(1) << k)));
        CHECK(mu(2 * k) == Rational(double_factorial(2 * k - 1)));
    }
    CHECK_THROWS_AS(exp_star(Functional<Rational>::unit(3)), std::invalid_argument);
    CHECK_THROWS_AS(log_star(Functional<Rational>(3)), std::invalid_argument);
}

TEST_CASE("moment-cumulant relations") {
    const auto mu = moments_from_cumulants(gaussian_cumulants(8));
    const std::vector<int> expected = {1, 0, 1, 0, 3, 0, 15, 0, 105};
    for (int n = 0; n <= 8; ++n) CHECK(mu(n) == expected[n]);

    Functional<Rational> ones(6);
    for (int n = 1; n <= 6; ++n) ones[n] = 1;
    const auto bell = moments_from_cumulants(ones);
    CHECK(bell(3) == 5);
    CHECK(bell(6) == 203);
    CHECK(bell == oracle::moments_by_set_partitions(ones));

    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 20; ++trial) {
        const auto kappa = oracle::random_functional(rng, 10, true, false);
        const auto m = moments_from_cumulants(kappa);
        CHECK(cumulants_from_moments(m) == kappa);
        if (trial < 4) CHECK(m == oracle::moments_by_set_partitions(kappa));
    }
}

TEST_CASE("Wick map with Gaussian cumulants gives Hermite polynomials") {
    const auto kappa = gaussian_cumulants(12);
    for (int n = 0; n <= 12; ++n) {
        const auto w = wick_map(kappa, n);
        const Polynomial h = hermite(n);
        for (int i = 0; i <= n; ++i) CHECK(w[i] == h.coeff(i));
    }
}

TEST_CASE("symbolic Wick map and its inverse") {
    const RingElem y2 = RingElem::symbol("y2");
    const auto kappa = quadratic_cumulant(6, y2);
    const RingElem w3 = wick_poly_to_ring(wick_map(kappa, 3), "x");
    CHECK(w3 == RingElem::symbol("x", 3) - RingElem(3) * y2 * RingElem::symbol("x"));

    std::mt19937_64 rng(16);
    for (int trial = 0; trial < 10; ++trial) {
        auto k = oracle::random_functional(rng, 8, true, false);
        k[1] = 0;
        std::vector<WickPoly<Rational>> w, winv;
        for (int n = 0; n <= 8; ++n) {
            w.push_back(wick_map(k, n));
            winv.push_back(wick_map_inverse(k, n));
        }
        for (int n = 0; n <= 8; ++n) {
            WickPoly<Rational> xn(n + 1, Rational(0));
            xn[n] = 1;
            CHECK(apply_linear(winv, apply_linear(w, xn)) == xn);
        }
    }
    Functional<Rational> bad(4);
    bad[1] = 1;
    CHECK_THROWS_AS(wick_map(bad, 2), std::invalid_argument);
}

TEST_CASE("Bell polynomials") {
    const RingElem x = RingElem::symbol("x");
    const RingElem y2 = RingElem::symbol("y2");
    const RingElem y3 = RingElem::symbol("y3");
    CHECK(incomplete_bell(5, 3) == RingElem(15) * x * y2 * y2 + RingElem(10) * x * x * y3);

    // B_n(x, -s, 0, ...) = H_n(x; s)
    const RingElem s = RingElem::symbol("s");
    for (int n = 0; n <= 8; ++n) {
        RingElem b = complete_bell(n);
        for (int m = 3; m <= n; ++m) b = b.substitute("y" + std::to_string(m), RingElem(0));
        b = b.substitute("y2", -s);
        const Polynomial h2 = hermite_scaled(n, 2);
        // compare at s = 2 coefficient-wise
        const RingElem at2 = b.substitute("s", RingElem(2));
        for (int i = 0; i <= n; ++i) CHECK(at2.coefficient(i == 0 ? Monomial{} : Monomial{{"x", i}}) == h2.coeff(i));
    }

    const RingElem b5 = complete_bell(5);
    CHECK(b5.coefficient({{"x", 1}, {"y2", 2}}) == Rational(oracle::count_partitions_with_blocks(5, {1, 2, 2})));
    CHECK(b5.coefficient({{"x", 2}, {"y3", 1}}) == Rational(oracle::count_partitions_with_blocks(5, {1, 1, 3})));
    CHECK(b5.coefficient({{"y5", 1}}) == 1);
    // total of all coefficients is the Bell number
    Rational total = 0;
    const RingElem b6 = complete_bell(6);
    for (const auto& [m, c] : b6.terms()) total += c;
    CHECK(total == 203);
    CHECK_THROWS_AS(incomplete_bell(3, 4), std::out_of_range);
}

TEST_CASE("Hopf structure of the polynomial algebra") {
    for (int n = 0; n <= 8; ++n) {
        const auto [l, r] = coassociativity_tables(n);
        CHECK(l == r);
        // m (A (x) id) Delta = counit
        Rational s = 0;
        for (const auto& [ab, c] : coproduct(n)) s += c * antipode(ab.first);
        CHECK(s == counit(n));
        // (counit (x) id) Delta = id
        Rational e = 0;
        for (const auto& [ab, c] : coproduct(n)) e += c * counit(ab.first) * (ab.second == n ? 1 : 0);
        CHECK(e == 1);
    }
}
