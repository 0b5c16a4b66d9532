#include "doctest.h"
#include "oracles.hpp"

#include "wickworks/multipoly.hpp"
#include "wickworks/polynomial.hpp"

using namespace wickworks;

namespace {

Polynomial poly(std::initializer_list<long> c) {
    std::vector<Rational> v;
    for (long x : c) v.emplace_back(x);
    return Polynomial(std::move(v));
}

}  // namespace

TEST_CASE("first Hermite polynomials match the reference table") {
    // coefficients from degree 0 upward
    CHECK(hermite(0) == poly({1}));
    CHECK(hermite(1) == poly({0, 1}));
    CHECK(hermite(2) == poly({-1, 0, 1}));
    CHECK(hermite(3) == poly({0, -3, 0, 1}));
    CHECK(hermite(4) == poly({3, 0, -6, 0, 1}));
    CHECK(hermite(5) == poly({0, 15, 0, -10, 0, 1}));
    CHECK(hermite(6) == poly({-15, 0, 45, 0, -15, 0, 1}));
    CHECK(hermite(7) == poly({0, -105, 0, 105, 0, -21, 0, 1}));
    CHECK(hermite(8) == poly({105, 0, -420, 0, 210, 0, -28, 0, 1}));
    CHECK(hermite(4).to_string() == "1x^4 -6x^2 +3");
    CHECK(hermite(0).to_string() == "1");
}

TEST_CASE("rows nine and ten follow the recurrence") {
    CHECK(hermite(9).coeff(1) == 945);
    CHECK(hermite(10).coeff(2) == 4725);
    CHECK(hermite(10).coeff(0) == -945);
}

TEST_CASE("three independent Hermite routes agree up to degree 20") {
    for (int n = 0; n <= 20; ++n) {
        const Polynomial h = hermite(n);
        CHECK(h == hermite_explicit(n));
        CHECK(h == gram_schmidt_hermite(n));
        CHECK(h.degree() == n);
        CHECK(h.coeff(n) == 1);
    }
    CHECK(gram_schmidt_hermite(2) == poly({-1, 0, 1}));
    CHECK(gram_schmidt_hermite(3) == poly({0, -3, 0, 1}));
    CHECK(hermite_explicit(6) == poly({-15, 0, 45, 0, -15, 0, 1}));
}

TEST_CASE("matching-sum construction reproduces the recurrence") {
    for (int n = 0; n <= 10; ++n) CHECK(oracle::hermite_by_matchings(n) == hermite(n));
}

TEST_CASE("orthogonality under the Gaussian expectation") {
    for (int n = 0; n <= 12; ++n)
        for (int m = 0; m <= 12; ++m)
            CHECK(gaussian_expectation(hermite(n) * hermite(m)) == (n == m ? Rational(factorial(n)) : Rational(0)));
    CHECK(gaussian_expectation(Polynomial::monomial(4)) == 3);
    for (int n = 1; n <= 12; ++n) CHECK(gaussian_expectation(hermite(n)) == 0);
}

TEST_CASE("recursion consistency") {
    const Polynomial x = Polynomial::monomial(1);
    for (int n = 1; n <= 15; ++n) {
        CHECK(hermite(n + 1) == x * hermite(n) - hermite(n).derivative());
        CHECK(hermite(n).derivative() == Rational(n) * hermite(n - 1));
    }
}

TEST_CASE("scaled Hermite polynomials") {
    const Rational s = make_rational(7, 3);
    CHECK(hermite_scaled(3, s) == Polynomial({0, -3 * s, 0, 1}));
    CHECK(hermite_scaled(5, 1) == poly({0, 15, 0, -10, 0, 1}));
    CHECK(hermite_scaled(4, 2) == poly({12, 0, -12, 0, 1}));
    for (int n = 0; n <= 12; ++n) CHECK(hermite_scaled(n, 1) == hermite(n));
    // negative variance is accepted
    CHECK(hermite_scaled(2, -3) == poly({3, 0, 1}));
    // sigma^n H_n(x / sigma) with sigma = 3, checked through exact substitution
    for (int n = 0; n <= 9; ++n) {
        const Polynomial h = hermite(n);
        std::vector<Rational> sub(n + 1);
        Rational scale = 1;
        for (int i = 0; i < n; ++i) scale *= 3;
        for (int j = 0; j <= h.degree(); ++j) {
            Rational pw = 1;
            for (int i = 0; i < j; ++i) pw /= 3;
            sub[j] = scale * h.coeff(j) * pw;
        }
        CHECK(hermite_scaled(n, 9) == Polynomial(sub));
    }
}

TEST_CASE("monomial to Hermite inversion") {
    CHECK(monomial_to_hermite(1) == std::map<int, Rational>{{1, 1}});
    CHECK(monomial_to_hermite(2) == std::map<int, Rational>{{0, 1}, {2, 1}});
    for (int n = 0; n <= 14; ++n) {
        Polynomial back;
        for (const auto& [m, c] : monomial_to_hermite(n)) back += c * hermite(m);
        CHECK(back == Polynomial::monomial(n));
    }
}

TEST_CASE("product-sum formula") {
    const auto p = hermite_product(4, 4);
    CHECK(p == std::map<int, Rational>{{8, 1}, {6, 16}, {4, 72}, {2, 96}, {0, 24}});
    CHECK(hermite_product(5, 0) == std::map<int, Rational>{{5, 1}});
    for (int n = 0; n <= 7; ++n)
        for (int m = 0; m <= 7; ++m) {
            Polynomial rhs;
            for (const auto& [k, c] : hermite_product(n, m)) rhs += c * hermite(k);
            CHECK(rhs == hermite(n) * hermite(m));
        }
}

TEST_CASE("ladder operators") {
    CHECK(apply_operator(LadderOp::a, hermite(4)) == Rational(4) * hermite(3));
    CHECK(apply_operator(LadderOp::a_dagger, hermite(3)) == hermite(4));
    CHECK(apply_operator(LadderOp::L, hermite(6)) == Rational(-6) * hermite(6));
    for (int n = 1; n <= 12; ++n) {
        const Polynomial h = hermite(n);
        CHECK(apply_operator(LadderOp::L, h) == -apply_operator(LadderOp::a_dagger, apply_operator(LadderOp::a, h)));
    }
}

TEST_CASE("binomial formula for scaled Hermite polynomials") {
    {
        auto [l, r] = hermite_binomial_lhs_rhs(0, 1, 1);
        CHECK(l == r);
        CHECK(l == BivariatePoly{{{0, 0}, Rational(1)}});
    }
    {
        const Rational half = make_rational(1, 2);
        auto [l, r] = hermite_binomial_lhs_rhs(2, half, half);
        CHECK(l == r);
        // (x+y)^2 - 1
        CHECK(l == BivariatePoly{{{2, 0}, 1}, {{1, 1}, 2}, {{0, 2}, 1}, {{0, 0}, -1}});
    }
    for (int n = 0; n <= 8; ++n) {
        auto [l, r] = hermite_binomial_lhs_rhs(n, 1, 3);
        CHECK(l == r);
    }
    auto [l, r] = hermite_binomial_lhs_rhs(6, make_rational(-2, 5), make_rational(11, 7));
    CHECK(l == r);
}

TEST_CASE("generating function coefficients") {
    const BivariateSeries g = hermite_generating_function(12);
    for (int n = 0; n <= 12; ++n) {
        const Polynomial h = hermite(n);
        for (int j = 0; j <= n; ++j) {
            auto it = g.coeffs.find({n, j});
            const Rational got = it == g.coeffs.end() ? Rational(0) : it->second;
            CHECK(got == h.coeff(j) / Rational(factorial(n)));
        }
    }
    for (const auto& [key, c] : g.coeffs) CHECK(key.first <= 12);
}

TEST_CASE("multinomial formula in two and three variables") {
    // weights with sum of squares one
    const std::vector<std::vector<Rational>> weights = {
        {make_rational(3, 5), make_rational(4, 5)},
        {make_rational(5, 13), make_rational(12, 13)},
        {make_rational(2, 3), make_rational(1, 3), make_rational(2, 3)},
        {make_rational(2, 7), make_rational(3, 7), make_rational(6, 7)},
    };
    for (const auto& a : weights)
        for (int n = 0; n <= 5; ++n) CHECK(oracle::multinomial_hermite_lhs(a, n) == oracle::multinomial_hermite_rhs(a, n));
}
