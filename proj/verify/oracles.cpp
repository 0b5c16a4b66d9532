#include "oracles.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <functional>
#include <numeric>

namespace wickworks::oracle {

Polynomial hermite_by_matchings(int n) {
    std::vector<Rational> c(n + 1);
    for_each_matching(n, false, [&](const Matching& m) {
        const int k = static_cast<int>(m.pairs.size());
        c[n - 2 * k] += (k % 2 == 0) ? 1 : -1;
    });
    return Polynomial(std::move(c));
}

MultiPoly multinomial_hermite_lhs(const std::vector<Rational>& a, int n) {
    const int nv = static_cast<int>(a.size());
    MultiPoly lin(nv);
    for (int i = 0; i < nv; ++i) lin += MultiPoly::variable(nv, i) * a[i];
    const Polynomial h = hermite(n);
    MultiPoly out(nv);
    for (int j = 0; j <= h.degree(); ++j) out += lin.pow(j) * h.coeff(j);
    return out;
}

MultiPoly multinomial_hermite_rhs(const std::vector<Rational>& a, int n) {
    const int nv = static_cast<int>(a.size());
    MultiPoly out(nv);
    std::vector<int> k(nv, 0);
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == nv - 1) {
            k[i] = left;
            Integer den = 1;
            for (int x : k) den *= factorial(x);
            MultiPoly term = MultiPoly::constant(nv, Rational(factorial(n), den));
            for (int j = 0; j < nv; ++j) {
                Rational w = 1;
                for (int r = 0; r < k[j]; ++r) w *= a[j];
                term = term * MultiPoly::from_univariate(nv, j, hermite(k[j])) * w;
            }
            out += term;
            return;
        }
        for (int x = 0; x <= left; ++x) {
            k[i] = x;
            rec(i + 1, left - x);
        }
    };
    rec(0, n);
    return out;
}

Rational random_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 6);
    return make_rational(num(rng), den(rng));
}

Functional<Rational> random_functional(std::mt19937_64& rng, int degree, bool zero_at_one, bool one_at_one) {
    Functional<Rational> f(degree);
    for (int i = 0; i <= degree; ++i) f[i] = random_rational(rng);
    if (zero_at_one) f[0] = 0;
    if (one_at_one) f[0] = 1;
    return f;
}

std::vector<std::vector<int>> set_partition_block_sizes(int n) {
    // restricted growth strings
    std::vector<std::vector<int>> out;
    std::vector<int> a(n, 0);
    std::function<void(int, int)> rec = [&](int i, int blocks) {
        if (i == n) {
            std::vector<int> sizes(blocks, 0);
            for (int x : a) ++sizes[x];
            out.push_back(sizes);
            return;
        }
        for (int b = 0; b <= blocks; ++b) {
            a[i] = b;
            rec(i + 1, std::max(blocks, b + 1));
        }
    };
    rec(0, 0);
    return out;
}

Functional<Rational> moments_by_set_partitions(const Functional<Rational>& kappa) {
    Functional<Rational> mu(kappa.degree());
    for (int n = 0; n <= kappa.degree(); ++n) {
        Rational s = 0;
        for (const auto& sizes : set_partition_block_sizes(n)) {
            Rational p = 1;
            for (int b : sizes) p *= kappa(b);
            s += p;
        }
        mu[n] = s;
    }
    return mu;
}

Functional<Rational> inverse_by_neumann(const Functional<Rational>& phi) {
    const int D = phi.degree();
    const Functional<Rational> u = Functional<Rational>::unit(D);
    const Functional<Rational> delta = u - phi;
    Functional<Rational> power = u, sum = u;
    for (int k = 1; k <= D; ++k) {
        power = convolve(power, delta);
        sum += power;
    }
    return sum;
}

Functional<Rational> exp_by_series(const Functional<Rational>& phi) {
    const int D = phi.degree();
    Functional<Rational> power = Functional<Rational>::unit(D), sum = power;
    for (int k = 1; k <= D; ++k) {
        power = convolve(power, phi);
        sum += power.scaled(Rational(Integer(1), factorial(k)));
    }
    return sum;
}

std::vector<Rational> cauchy_product_of_transforms(const Functional<Rational>& phi,
                                                   const Functional<Rational>& psi) {
    const int D = phi.degree();
    std::vector<Rational> out(D + 1);
    for (int n = 0; n <= D; ++n)
        for (int k = 0; k <= n; ++k)
            out[n] += phi(k) / Rational(factorial(k)) * psi(n - k) / Rational(factorial(n - k));
    return out;
}

Integer count_partitions_with_blocks(int n, std::vector<int> sizes) {
    std::sort(sizes.begin(), sizes.end());
    Integer count = 0;
    for (auto s : set_partition_block_sizes(n)) {
        std::sort(s.begin(), s.end());
        if (s == sizes) ++count;
    }
    return count;
}

CovMatrix random_cov(std::mt19937_64& rng, int n) {
    CovMatrix C(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            C(i, j) = random_rational(rng);
            C(j, i) = C(i, j);
        }
    return C;
}

MultiPoly random_multipoly(std::mt19937_64& rng, int n, int deg, int terms) {
    std::uniform_int_distribution<int> var(0, n - 1), d(0, deg);
    MultiPoly p(n);
    for (int t = 0; t < terms; ++t) {
        std::vector<int> e(n, 0);
        const int total = d(rng);
        for (int i = 0; i < total; ++i) ++e[var(rng)];
        p.add_term(e, random_rational(rng));
    }
    return p;
}

SymTensor symmetrize_by_permutations(const Tensor& raw) {
    Tensor acc{raw.dim, raw.rank, {}};
    std::vector<int> perm(raw.rank);
    std::iota(perm.begin(), perm.end(), 0);
    const Rational w(Integer(1), factorial(raw.rank));
    do {
        for (const auto& [t, v] : raw.entries) {
            std::vector<int> s(raw.rank);
            for (int i = 0; i < raw.rank; ++i) s[i] = t[perm[i]];
            acc.add(s, v * w);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    SymTensor out{raw.dim, raw.rank, {}};
    for (const auto& [t, v] : acc.entries)
        if (std::is_sorted(t.begin(), t.end())) out.coeffs.emplace(t, v);
    return out;
}

double periodic_resolvent_green_d1(double x) {
    const double kappa = std::sqrt(2.0 * std::numbers::pi);
    auto U = [](double t) {
        Eigen::Matrix2d u;
        u << std::cosh(t), std::sinh(t), std::sinh(t), std::cosh(t);
        return u;
    };
    // In t = kappa x the period is kappa and f_t jumps by -kappa at t = 0.
    const Eigen::Vector2d start = (U(kappa) - Eigen::Matrix2d::Identity()).inverse() * Eigen::Vector2d(0.0, kappa);
    const double t = kappa * (x - std::floor(x));
    return (U(t) * start)(0);
}

double wick_variance_brute_force(int d, int N, int n) {
    const ModeLattice L = ModeLattice::build(d, N);
    std::vector<double> inv;
    for (double l : L.lambdas) inv.push_back(1.0 / l);
    auto weight = [&](const Mode& k) {
        if (l1_norm(k) > N) return 0.0;
        return 1.0 / lambda(k, d);
    };
    double total = 0;
    std::function<void(int, Mode, double)> rec = [&](int depth, Mode acc, double prod) {
        if (depth == n - 1) {
            total += prod * weight(-acc);
            return;
        }
        for (std::size_t i = 0; i < L.modes.size(); ++i) rec(depth + 1, acc + L.modes[i], prod * inv[i]);
    };
    rec(0, Mode{0, 0, 0}, 1.0);
    double fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    return fact * total;
}

}  // namespace wickworks::oracle

namespace wickworks::oracle {

bool isomorphic_brute_force(const Diagram& a, const Diagram& b) {
    if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() || a.legs.size() != b.legs.size())
        return false;
    const int n = a.vertex_count();
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::pair<int, int>> be = b.edges;
    std::sort(be.begin(), be.end());
    std::vector<std::pair<int, std::string>> bl = b.legs;
    std::sort(bl.begin(), bl.end());
    do {
        bool ok = true;
        for (int v = 0; v < n && ok; ++v) {
            const auto pv = static_cast<std::size_t>(perm[static_cast<std::size_t>(v)]);
            ok = a.arity[static_cast<std::size_t>(v)] == b.arity[pv] && a.label[static_cast<std::size_t>(v)] == b.label[pv];
        }
        if (!ok) continue;
        std::vector<std::pair<int, int>> ae;
        for (auto [u, v] : a.edges) {
            int pu = perm[static_cast<std::size_t>(u)], pv = perm[static_cast<std::size_t>(v)];
            ae.emplace_back(std::min(pu, pv), std::max(pu, pv));
        }
        std::sort(ae.begin(), ae.end());
        std::vector<std::pair<int, std::string>> al;
        for (const auto& [v, l] : a.legs) al.emplace_back(perm[static_cast<std::size_t>(v)], l);
        std::sort(al.begin(), al.end());
        if (ae == be && al == bl) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

std::vector<std::pair<Diagram, Integer>> classes_by_matchings(const std::vector<int>& arities,
                                                              const std::vector<std::string>& labels) {
    std::vector<int> owner;
    for (std::size_t v = 0; v < arities.size(); ++v) owner.insert(owner.end(), static_cast<std::size_t>(arities[v]), static_cast<int>(v));
    std::vector<std::string> lab(arities.size());
    std::copy(labels.begin(), labels.end(), lab.begin());
    std::vector<std::pair<Diagram, Integer>> classes;
    for_each_matching(static_cast<int>(owner.size()), true, [&](const Matching& m) {
        std::vector<std::pair<int, int>> edges;
        for (auto [i, j] : m.pairs) {
            const int u = owner[static_cast<std::size_t>(i)], v = owner[static_cast<std::size_t>(j)];
            if (u == v) return;
            edges.emplace_back(std::min(u, v), std::max(u, v));
        }
        const Diagram g = Diagram::from_edges(arities, edges, lab);
        for (auto& [rep, count] : classes)
            if (isomorphic_brute_force(rep, g)) {
                count += 1;
                return;
            }
        classes.emplace_back(g, Integer(1));
    });
    return classes;
}

double vacuum_sum_brute_force(const Diagram& g, int d, int N) {
    const ModeLattice L = ModeLattice::build(d, N);
    const std::size_t E = g.edges.size();
    std::vector<Mode> net(g.arity.size());
    double total = 0;
    std::function<void(std::size_t, double)> rec = [&](std::size_t e, double prod) {
        if (e == E) {
            for (const Mode& m : net)
                if (m != Mode{0, 0, 0}) return;
            total += prod;
            return;
        }
        const auto [u, v] = g.edges[e];
        for (std::size_t i = 0; i < L.modes.size(); ++i) {
            const Mode& k = L.modes[i];
            net[static_cast<std::size_t>(u)] = net[static_cast<std::size_t>(u)] + k;
            net[static_cast<std::size_t>(v)] = net[static_cast<std::size_t>(v)] + (-k);
            rec(e + 1, prod / L.lambdas[i]);
            net[static_cast<std::size_t>(u)] = net[static_cast<std::size_t>(u)] + (-k);
            net[static_cast<std::size_t>(v)] = net[static_cast<std::size_t>(v)] + k;
        }
    };
    rec(0, 1.0);
    return total;
}

}  // namespace wickworks::oracle
