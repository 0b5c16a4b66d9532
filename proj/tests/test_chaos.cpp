#include "doctest.h"
#include "oracles.hpp"

#include "wickworks/chaos.hpp"

#include <cmath>

using namespace wickworks;

namespace {

Tensor unit_vector(int dim, int i) {
    Tensor t{dim, 1, {}};
    t.add({i}, 1);
    return t;
}

ChaosElement phi(int dim, MultiIndex k, Rational c = 1) { return ChaosElement::basis(dim, k, c); }

Tensor random_tensor(std::mt19937_64& rng, int dim, int rank, int entries) {
    std::uniform_int_distribution<int> idx(0, dim - 1);
    Tensor t{dim, rank, {}};
    for (int e = 0; e < entries; ++e) {
        std::vector<int> tuple(rank);
        for (auto& x : tuple) x = idx(rng);
        t.add(tuple, oracle::random_rational(rng));
    }
    return t;
}

ChaosElement random_homogeneous(std::mt19937_64& rng, int dim, int n, int terms) {
    return wiener_isometry(symmetrize(random_tensor(rng, dim, n, terms)));
}

}  // namespace

TEST_CASE("symmetrisation") {
    const SymTensor s = symmetrize(tensor_product(unit_vector(2, 0), unit_vector(2, 1)));
    CHECK(s.coeffs.size() == 1);
    CHECK(s.value({0, 1}) == make_rational(1, 2));
    CHECK(s.value({1, 0}) == make_rational(1, 2));

    // e_1 (x) e_1 (x) e_2: value 1/3 and squared norm k!/n! = 1/3
    const Tensor raw = tensor_product(tensor_product(unit_vector(3, 0), unit_vector(3, 0)), unit_vector(3, 1));
    const SymTensor e = symmetrize(raw);
    CHECK(e.value({0, 0, 1}) == make_rational(1, 3));
    CHECK(sym_inner(e, e) == make_rational(1, 3));

    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const Tensor t = random_tensor(rng, 3, 3, 5);
        const SymTensor s1 = symmetrize(t);
        CHECK(s1 == oracle::symmetrize_by_permutations(t));
        CHECK(symmetrize(expand(s1)) == s1);
    }
    Tensor bad{2, 1, {}};
    CHECK_THROWS_AS(bad.add({2}, 1), std::out_of_range);
}

TEST_CASE("basis inner products and the isometry") {
    // <e_k, e_l> = k!/n! delta
    const int N = 3, n = 3;
    std::vector<SymTensor> basis;
    std::vector<MultiIndex> ks;
    for (int a = 0; a < N; ++a)
        for (int b = a; b < N; ++b)
            for (int c = b; c < N; ++c) {
                Tensor t{N, n, {}};
                t.add({a, b, c}, 1);
                basis.push_back(symmetrize(t));
                ks.push_back(multi_index_of(std::vector<int>{a, b, c}));
            }
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j) {
            const Rational expected = i == j ? Rational(multi_factorial(ks[i]), factorial(n)) : Rational(0);
            CHECK(sym_inner(basis[i], basis[j]) == expected);
        }

    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 10; ++trial) {
        const SymTensor f = symmetrize(random_tensor(rng, 3, 3, 4));
        const SymTensor g = symmetrize(random_tensor(rng, 3, 3, 4));
        CHECK(inner(wiener_isometry(f), wiener_isometry(g)) == Rational(factorial(3)) * sym_inner(f, g));
        CHECK(chaos_preimage(wiener_isometry(f)) == f);
    }
}

TEST_CASE("Wiener isometry examples") {
    CHECK(wiener_isometry(symmetrize(unit_vector(2, 0))) == phi(2, {{0, 1}}));
    CHECK(wiener_isometry(symmetrize(tensor_product(unit_vector(2, 0), unit_vector(2, 0)))) == phi(2, {{0, 2}}));

    // I_2(h (x) g) = sum_{i != j} h_i g_j X_i X_j + sum_i h_i g_i H_2(X_i)
    const std::vector<Rational> h = {2, -1, make_rational(1, 2)}, g = {3, 5, -4};
    const std::vector<std::vector<Rational>> factors = {h, g};
    const ChaosElement got = wiener_isometry(symmetrize(outer(factors)));
    ChaosElement expected(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j)
                expected.add({{i, 2}}, h[i] * g[i]);
            else
                expected.add({{i, 1}, {j, 1}}, h[i] * g[j]);
        }
    CHECK(got == expected);

    // rank one: I_n(h^{(x)n}) = H_n(W(h); |h|^2)
    const std::vector<Rational> v = {1, 2};
    const std::vector<std::vector<Rational>> cube = {v, v, v};
    const MultiPoly lhs = chaos_to_poly(wiener_isometry(symmetrize(outer(cube))));
    const MultiPoly w = MultiPoly::variable(2, 0) + MultiPoly::variable(2, 1) * Rational(2);
    const Polynomial h3 = hermite_scaled(3, 5);
    MultiPoly rhs(2);
    for (int j = 0; j <= 3; ++j) rhs += w.pow(j) * h3.coeff(j);
    CHECK(lhs == rhs);
}

TEST_CASE("contractions") {
    const Tensor e1 = unit_vector(2, 0);
    const Tensor f = tensor_product(e1, e1);
    const Tensor c = contract(f, e1, 1);
    CHECK(c.entries.size() == 1);
    CHECK(c.entries.at({0}) == 2);
    CHECK(contract(f, e1, 0) == tensor_product(f, e1));

    // f = g = h^{(x)4}, |h| = 1, p = 4 -> 4!
    const std::vector<Rational> h = {make_rational(3, 5), make_rational(4, 5)};
    const std::vector<std::vector<Rational>> four = {h, h, h, h};
    const SymTensor h4 = symmetrize(outer(four));
    const Tensor full = contract(h4, h4, 4);
    CHECK(full.rank == 0);
    CHECK(full.entries.at({}) == 24);
    CHECK(contract(expand(h4), expand(h4), 4).entries.at({}) == 24);

    // the shuffle definition agrees with the symmetric fast path
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 10; ++trial) {
        const SymTensor a = symmetrize(random_tensor(rng, 3, 3, 3));
        const SymTensor b = symmetrize(random_tensor(rng, 3, 2, 3));
        for (int p = 0; p <= 2; ++p) CHECK(contract(expand(a), expand(b), p) == contract(a, b, p));
    }
    CHECK_THROWS_AS(contract(f, e1, 2), std::out_of_range);
}

TEST_CASE("pairing lemma for a factorised second argument") {
    // g = g1 (x) g2 with g2 orthogonal to every factor of g1, so no leg of g1
    // can meet g2; compared after symmetrisation.
    std::mt19937_64 rng(34);
    const int N = 4;
    for (int trial = 0; trial < 6; ++trial) {
        Tensor f = random_tensor(rng, N, 3, 4);
        Tensor g1{N, 2, {}};
        std::uniform_int_distribution<int> low(0, 1);
        for (int e = 0; e < 3; ++e) g1.add({low(rng), low(rng)}, oracle::random_rational(rng));
        Tensor g2{N, 1, {}};
        g2.add({2}, oracle::random_rational(rng));
        g2.add({3}, oracle::random_rational(rng));
        const Tensor g = tensor_product(g1, g2);
        const int m = 3;
        for (int p = 0; p <= m; ++p) {
            Tensor rhs{N, 3 + m - 2 * p, {}};
            if (p != 0) {
                const Tensor t = contract(contract(f, g1, p - 1), g2, 1);
                for (const auto& [k, v] : t.entries) rhs.add(k, v);
            }
            if (p != m) {
                const Tensor t = tensor_product(contract(f, g1, p), g2);
                for (const auto& [k, v] : t.entries) rhs.add(k, v);
            }
            CHECK(symmetrize(contract(f, g, p)) == symmetrize(rhs));
        }
    }
}

TEST_CASE("chaos multiplication examples") {
    const std::vector<Rational> fv = {1, 2, -1}, gv = {3, make_rational(1, 2), 2};
    const std::vector<std::vector<Rational>> f1 = {fv}, g1 = {gv}, fg = {fv, gv};
    const ChaosElement F = wiener_isometry(symmetrize(outer(f1)));
    const ChaosElement G = wiener_isometry(symmetrize(outer(g1)));
    ChaosElement expected = wiener_isometry(symmetrize(outer(fg)));
    expected.add({}, 3 + 1 - 2);
    for (auto route : {MultiplyRoute::contraction, MultiplyRoute::direct}) CHECK(chaos_multiply(F, G, route) == expected);

    const ChaosElement X1 = phi(2, {{0, 1}});
    ChaosElement sq = phi(2, {{0, 2}});
    sq.add({}, 1);
    CHECK(chaos_multiply(X1, X1, MultiplyRoute::direct) == sq);
    CHECK(chaos_multiply(X1, X1, MultiplyRoute::contraction) == sq);

    const ChaosElement A = phi(2, {{0, 2}, {1, 1}});
    CHECK(chaos_multiply(A, X1, MultiplyRoute::direct) == chaos_multiply(A, X1, MultiplyRoute::contraction));
}

TEST_CASE("chaos multiplication routes agree on random mixed elements") {
    std::mt19937_64 rng(35);
    for (int trial = 0; trial < 10; ++trial) {
        ChaosElement F(3), G(3);
        for (int n = 0; n <= 3; ++n) {
            F += random_homogeneous(rng, 3, n, 2);
            G += random_homogeneous(rng, 3, n, 2);
        }
        const ChaosElement a = chaos_multiply(F, G, MultiplyRoute::contraction);
        CHECK(a == chaos_multiply(F, G, MultiplyRoute::direct));
        // and against the polynomial product
        CHECK(chaos_to_poly(a) == chaos_to_poly(F) * chaos_to_poly(G));
    }
}

TEST_CASE("Wick product") {
    const ChaosElement X1 = phi(2, {{0, 1}});
    CHECK(wick_product(X1, X1) == phi(2, {{0, 2}}));
    CHECK(wick_product(wick_product(X1, X1), X1) == phi(2, {{0, 3}}));
    const ChaosElement one = phi(2, {});
    const ChaosElement F = phi(2, {{0, 1}, {1, 2}}, 5);
    CHECK(wick_product(F, one) == F);
    ChaosElement mixed = X1;
    mixed.add({}, 1);
    CHECK_THROWS_AS(wick_product(mixed, X1), std::invalid_argument);
}

TEST_CASE("expectation and inner product") {
    CHECK(expectation(phi(1, {{0, 4}})) == 0);
    CHECK(inner(phi(2, {{0, 2}, {1, 1}}), phi(2, {{0, 2}, {1, 1}})) == 2);
    std::mt19937_64 rng(36);
    const CovMatrix I = CovMatrix::Identity(3, 3);
    for (int trial = 0; trial < 10; ++trial) {
        ChaosElement F(3), G(3);
        for (int n = 0; n <= 3; ++n) {
            F += random_homogeneous(rng, 3, n, 2);
            G += random_homogeneous(rng, 3, n, 2);
        }
        CHECK(inner(F, G) == gaussian_poly_expectation(I, chaos_to_poly(F) * chaos_to_poly(G)));
    }
}

TEST_CASE("polynomial round trip through the chaos basis") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        const MultiPoly p = oracle::random_multipoly(rng, 3, 5, 5);
        CHECK(chaos_to_poly(chaos_from_poly(p)) == p);
    }
}

TEST_CASE("Ornstein-Uhlenbeck semigroup") {
    std::mt19937_64 rng(38);
    ChaosElement F(2);
    for (int n = 0; n <= 3; ++n) F += random_homogeneous(rng, 2, n, 2);
    const RealChaosElement T0 = ou_semigroup(F, 0);
    for (const auto& [k, c] : F.coeffs()) CHECK(T0.coeff(k) == to_double(c));

    const RealChaosElement Tinf = ou_semigroup(F, 60);
    CHECK(Tinf.expectation() == doctest::Approx(to_double(F.expectation())));
    for (const auto& [k, c] : Tinf.coeffs())
        if (grade(k) > 0) CHECK(std::abs(c) < 1e-20);

    const RealChaosElement T1 = ou_semigroup(phi(1, {{0, 2}}), 1);
    CHECK(T1.coeff({{0, 2}}) == doctest::Approx(std::exp(-2.0)));

    // semigroup property
    const RealChaosElement a = ou_semigroup(F, 0.7);
    for (const auto& [k, c] : a.coeffs()) {
        const double twice = c * std::exp(-grade(k) * 0.4);
        CHECK(twice == doctest::Approx(ou_semigroup(F, 1.1).coeff(k)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(ou_semigroup(F, -1), std::invalid_argument);
}

TEST_CASE("Mehler Monte Carlo") {
    const std::vector<std::vector<double>> pts = {{-1.0}, {0.3}, {1.5}};
    const MultiPoly h3 = MultiPoly::from_univariate(1, 0, hermite(3));
    for (const auto& r : mehler_mc(h3, 0, 10, 1, pts)) {
        CHECK(r.estimate == doctest::Approx(r.reference));
        CHECK(r.stderr_ == doctest::Approx(0.0));
    }
    for (const auto& r : mehler_mc(h3, 0.5, 20000, 2, pts)) {
        CHECK(r.reference == doctest::Approx(std::exp(-1.5) * hermite(3).evaluate(r.x[0])));
        CHECK(std::abs(r.estimate - r.reference) <= 4 * r.stderr_);
    }
    const MultiPoly x4 = MultiPoly::monomial({4});
    for (const auto& r : mehler_mc(x4, 0.5, 100000, 3, pts)) CHECK(std::abs(r.estimate - r.reference) <= 4 * r.stderr_);
}

TEST_CASE("equivalence of moments") {
    {
        const auto [l, r] = moment_equivalence_report(phi(1, {{0, 1}}), 2);
        CHECK(l == 3);
        CHECK(r == 9);
    }
    {
        const auto [l, r] = moment_equivalence_report(phi(1, {{0, 2}}), 2);
        CHECK(l == 60);
        CHECK(r == 324);
    }
    std::mt19937_64 rng(39);
    for (int trial = 0; trial < 5; ++trial) {
        const ChaosElement F = random_homogeneous(rng, 3, 2, 3);
        if (F.is_zero()) continue;
        for (int p = 2; p <= 3; ++p) {
            const auto [l, r] = moment_equivalence_report(F, p);
            CHECK(l <= r);
        }
    }
    ChaosElement mixed = phi(1, {{0, 1}});
    mixed.add({}, 1);
    CHECK_THROWS_AS(moment_equivalence_report(mixed, 2), std::invalid_argument);
}
