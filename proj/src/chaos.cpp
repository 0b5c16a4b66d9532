#include "wickworks/chaos.hpp"

#include <algorithm>
#include <bit>
#include <random>

namespace wickworks {

int grade(const MultiIndex& k) {
    int g = 0;
    for (const auto& [i, p] : k) g += p;
    return g;
}

Integer multi_factorial(const MultiIndex& k) {
    Integer f = 1;
    for (const auto& [i, p] : k) f *= factorial(p);
    return f;
}

MultiIndex multi_index_of(std::span<const int> tuple) {
    MultiIndex k;
    for (int i : tuple) ++k[i];
    return k;
}

namespace {

std::vector<int> sorted_tuple(const MultiIndex& k) {
    std::vector<int> t;
    for (const auto& [i, p] : k) t.insert(t.end(), p, i);
    return t;
}

void check_tuple(const std::vector<int>& t, int dim, int rank) {
    if (static_cast<int>(t.size()) != rank) throw std::invalid_argument("tensor: tuple length differs from rank");
    for (int i : t)
        if (i < 0 || i >= dim) throw std::out_of_range("tensor: index out of range");
}

}  // namespace

Rational inner(const ChaosElement& F, const ChaosElement& G) {
    F.check_dim(G);
    Rational sum = 0;
    for (const auto& [k, c] : F.coeffs()) {
        const Rational d = G.coeff(k);
        if (d != 0) sum += Rational(multi_factorial(k)) * c * d;
    }
    return sum;
}

void Tensor::add(const std::vector<int>& t, const Rational& c) {
    check_tuple(t, dim, rank);
    if (c == 0) return;
    auto [it, inserted] = entries.emplace(t, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) entries.erase(it);
    }
}

Rational SymTensor::value(std::vector<int> tuple) const {
    std::sort(tuple.begin(), tuple.end());
    auto it = coeffs.find(tuple);
    return it == coeffs.end() ? Rational(0) : it->second;
}

SymTensor symmetrize(const Tensor& raw) {
    SymTensor s{raw.dim, raw.rank, {}};
    const Integer nf = factorial(raw.rank);
    for (const auto& [t, v] : raw.entries) {
        check_tuple(t, raw.dim, raw.rank);
        std::vector<int> key = t;
        std::sort(key.begin(), key.end());
        // An orbit tuple is hit by k! permutations out of n!.
        s.coeffs[key] += v * Rational(multi_factorial(multi_index_of(key)), nf);
    }
    std::erase_if(s.coeffs, [](const auto& kv) { return kv.second == 0; });
    return s;
}

Tensor expand(const SymTensor& f) {
    Tensor t{f.dim, f.rank, {}};
    for (const auto& [s, v] : f.coeffs) {
        std::vector<int> perm = s;
        do {
            t.entries.emplace(perm, v);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return t;
}

Tensor tensor_product(const Tensor& f, const Tensor& g) {
    if (f.dim != g.dim) throw std::invalid_argument("tensor_product: dimension mismatch");
    Tensor out{f.dim, f.rank + g.rank, {}};
    for (const auto& [a, x] : f.entries)
        for (const auto& [b, y] : g.entries) {
            std::vector<int> t = a;
            t.insert(t.end(), b.begin(), b.end());
            out.add(t, x * y);
        }
    return out;
}

Tensor outer(std::span<const std::vector<Rational>> factors) {
    if (factors.empty()) {
        Tensor t{0, 0, {}};
        t.entries.emplace(std::vector<int>{}, Rational(1));
        return t;
    }
    const int dim = static_cast<int>(factors.front().size());
    Tensor acc{dim, 0, {}};
    acc.entries.emplace(std::vector<int>{}, Rational(1));
    for (const auto& h : factors) {
        Tensor v{dim, 1, {}};
        for (int i = 0; i < dim; ++i) v.add({i}, h.at(i));
        acc = tensor_product(acc, v);
    }
    return acc;
}

Rational sym_inner(const SymTensor& f, const SymTensor& g) {
    if (f.dim != g.dim || f.rank != g.rank) throw std::invalid_argument("sym_inner: shape mismatch");
    const Integer nf = factorial(f.rank);
    Rational sum = 0;
    for (const auto& [s, v] : f.coeffs) {
        auto it = g.coeffs.find(s);
        if (it == g.coeffs.end()) continue;
        sum += Rational(nf, multi_factorial(multi_index_of(s))) * v * it->second;
    }
    return sum;
}

Rational tensor_inner(const Tensor& f, const Tensor& g) {
    Rational sum = 0;
    for (const auto& [t, v] : f.entries) {
        auto it = g.entries.find(t);
        if (it != g.entries.end()) sum += v * it->second;
    }
    return sum;
}

ChaosElement wiener_isometry(const SymTensor& f) {
    ChaosElement F(f.dim);
    const Integer nf = factorial(f.rank);
    for (const auto& [s, v] : f.coeffs) {
        const MultiIndex k = multi_index_of(s);
        F.add(k, v * Rational(nf, multi_factorial(k)));
    }
    return F;
}

ChaosElement wiener_isometry(const Tensor& h) {
    ChaosElement F(h.dim);
    for (const auto& [t, v] : h.entries) F.add(multi_index_of(t), v);
    return F;
}

SymTensor chaos_preimage(const ChaosElement& F) {
    const int n = F.homogeneous_grade();
    if (n < 0 && !F.is_zero()) throw std::invalid_argument("chaos_preimage: element is not homogeneous");
    SymTensor f{F.dim(), std::max(n, 0), {}};
    const Integer nf = factorial(f.rank);
    for (const auto& [k, c] : F.coeffs()) f.coeffs.emplace(sorted_tuple(k), c * Rational(multi_factorial(k), nf));
    return f;
}

namespace {

void injective_tuples(int m, int p, std::vector<int>& cur, std::vector<bool>& used,
                      std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == p) {
        out.push_back(cur);
        return;
    }
    for (int j = 0; j < m; ++j) {
        if (used[j]) continue;
        used[j] = true;
        cur.push_back(j);
        injective_tuples(m, p, cur, used, out);
        cur.pop_back();
        used[j] = false;
    }
}

}  // namespace

Tensor contract(const Tensor& f, const Tensor& g, int p) {
    const int n = f.rank, m = g.rank;
    if (f.dim != g.dim) throw std::invalid_argument("contract: dimension mismatch");
    if (p < 0 || p > std::min(n, m)) throw std::out_of_range("contract: p out of range");

    std::vector<std::vector<int>> subsets;  // increasing p-subsets of f's slots
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) != p) continue;
        std::vector<int> a;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) a.push_back(i);
        subsets.push_back(std::move(a));
    }
    std::vector<std::vector<int>> arrangements;  // ordered p-tuples of g's slots
    {
        std::vector<int> cur;
        std::vector<bool> used(m, false);
        injective_tuples(m, p, cur, used, arrangements);
    }

    Tensor out{f.dim, n + m - 2 * p, {}};
    std::vector<int> idx;
    for (const auto& A : subsets) {
        std::vector<bool> inA(n, false);
        for (int a : A) inA[a] = true;
        for (const auto& B : arrangements) {
            std::vector<bool> inB(m, false);
            for (int b : B) inB[b] = true;
            for (const auto& [t, x] : f.entries)
                for (const auto& [u, y] : g.entries) {
                    bool match = true;
                    for (int i = 0; i < p && match; ++i) match = t[A[i]] == u[B[i]];
                    if (!match) continue;
                    idx.clear();
                    for (int i = 0; i < n; ++i)
                        if (!inA[i]) idx.push_back(t[i]);
                    for (int j = 0; j < m; ++j)
                        if (!inB[j]) idx.push_back(u[j]);
                    out.add(idx, x * y);
                }
        }
    }
    return out;
}

Tensor contract(const SymTensor& f, const SymTensor& g, int p) {
    const int n = f.rank, m = g.rank;
    if (f.dim != g.dim) throw std::invalid_argument("contract: dimension mismatch");
    if (p < 0 || p > std::min(n, m)) throw std::out_of_range("contract: p out of range");
    using Rest = std::vector<std::pair<std::vector<int>, Rational>>;
    auto group = [p](const Tensor& t) {
        std::map<std::vector<int>, Rest> by_prefix;
        for (const auto& [tuple, v] : t.entries)
            by_prefix[std::vector<int>(tuple.begin(), tuple.begin() + p)].emplace_back(
                std::vector<int>(tuple.begin() + p, tuple.end()), v);
        return by_prefix;
    };
    const auto F = group(expand(f));
    const auto G = group(expand(g));
    const Rational weight(factorial(p) * binomial(n, p) * binomial(m, p));
    Tensor out{f.dim, n + m - 2 * p, {}};
    for (const auto& [prefix, rf] : F) {
        auto it = G.find(prefix);
        if (it == G.end()) continue;
        for (const auto& [a, x] : rf)
            for (const auto& [b, y] : it->second) {
                std::vector<int> t = a;
                t.insert(t.end(), b.begin(), b.end());
                out.add(t, weight * x * y);
            }
    }
    return out;
}

namespace {

ChaosElement multiply_direct(const ChaosElement& F, const ChaosElement& G) {
    ChaosElement out(F.dim());
    for (const auto& [k, c] : F.coeffs())
        for (const auto& [l, d] : G.coeffs()) {
            std::map<int, std::pair<int, int>> coords;
            for (const auto& [i, a] : k) coords[i].first = a;
            for (const auto& [i, b] : l) coords[i].second = b;
            std::vector<std::pair<MultiIndex, Rational>> partial{{MultiIndex{}, c * d}};
            for (const auto& [i, ab] : coords) {
                std::vector<std::pair<MultiIndex, Rational>> next;
                for (const auto& [r, coef] : hermite_product(ab.first, ab.second))
                    for (const auto& [mi, v] : partial) {
                        MultiIndex e = mi;
                        if (r > 0) e[i] = r;
                        next.emplace_back(std::move(e), v * coef);
                    }
                partial = std::move(next);
            }
            for (const auto& [mi, v] : partial) out.add(mi, v);
        }
    return out;
}

ChaosElement multiply_contraction(const ChaosElement& F, const ChaosElement& G) {
    ChaosElement out(F.dim());
    for (int n = 0; n <= F.max_grade(); ++n) {
        const ChaosElement Fn = F.grade_part(n);
        if (Fn.is_zero()) continue;
        const SymTensor f = chaos_preimage(Fn);
        for (int m = 0; m <= G.max_grade(); ++m) {
            const ChaosElement Gm = G.grade_part(m);
            if (Gm.is_zero()) continue;
            const SymTensor g = chaos_preimage(Gm);
            for (int p = 0; p <= std::min(n, m); ++p) out += wiener_isometry(contract(f, g, p));
        }
    }
    return out;
}

}  // namespace

ChaosElement chaos_multiply(const ChaosElement& F, const ChaosElement& G, MultiplyRoute route) {
    F.check_dim(G);
    return route == MultiplyRoute::direct ? multiply_direct(F, G) : multiply_contraction(F, G);
}

ChaosElement wick_product(const ChaosElement& F, const ChaosElement& G) {
    F.check_dim(G);
    if (F.is_zero() || G.is_zero()) return ChaosElement(F.dim());
    const int n = F.homogeneous_grade(), m = G.homogeneous_grade();
    if (n < 0 || m < 0) throw std::invalid_argument("wick_product: inputs must be homogeneous");
    return wiener_isometry(contract(chaos_preimage(F), chaos_preimage(G), 0));
}

ChaosElement chaos_from_poly(const MultiPoly& p) {
    ChaosElement out(p.nvars());
    for (const auto& [e, c] : p.terms()) {
        std::vector<std::pair<MultiIndex, Rational>> partial{{MultiIndex{}, c}};
        for (int i = 0; i < p.nvars(); ++i) {
            if (e[i] == 0) continue;
            std::vector<std::pair<MultiIndex, Rational>> next;
            for (const auto& [r, coef] : monomial_to_hermite(e[i]))
                for (const auto& [mi, v] : partial) {
                    MultiIndex k = mi;
                    if (r > 0) k[i] = r;
                    next.emplace_back(std::move(k), v * coef);
                }
            partial = std::move(next);
        }
        for (const auto& [mi, v] : partial) out.add(mi, v);
    }
    return out;
}

MultiPoly chaos_to_poly(const ChaosElement& F) {
    MultiPoly out(F.dim());
    for (const auto& [k, c] : F.coeffs()) {
        MultiPoly term = MultiPoly::constant(F.dim(), c);
        for (const auto& [i, p] : k) term = term * MultiPoly::from_univariate(F.dim(), i, hermite(p));
        out += term;
    }
    return out;
}

RealChaosElement ou_semigroup(const ChaosElement& F, double t) {
    if (t < 0) throw std::invalid_argument("ou_semigroup: t must be nonnegative");
    RealChaosElement out(F.dim());
    for (const auto& [k, c] : F.coeffs()) out.add(k, to_double(c) * std::exp(-grade(k) * t));
    return out;
}

std::vector<MehlerPoint> mehler_mc(const MultiPoly& f, double t, int samples, std::uint64_t seed,
                                   const std::vector<std::vector<double>>& points) {
    if (samples <= 0) throw std::invalid_argument("mehler_mc: samples must be positive");
    const int n = f.nvars();
    const RealChaosElement spectral = ou_semigroup(chaos_from_poly(f), t);
    const double a = std::exp(-t);
    const double b = std::sqrt(std::max(0.0, 1.0 - std::exp(-2 * t)));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<MehlerPoint> out;
    std::vector<double> z(n);
    for (const auto& x : points) {
        if (static_cast<int>(x.size()) != n) throw std::invalid_argument("mehler_mc: point dimension mismatch");
        double mean = 0, m2 = 0;
        for (int s = 0; s < samples; ++s) {
            for (int i = 0; i < n; ++i) z[i] = a * x[i] + b * normal(rng);
            const double v = f.evaluate(z);
            const double delta = v - mean;
            mean += delta / (s + 1);
            m2 += delta * (v - mean);
        }
        const double var = samples > 1 ? m2 / (samples - 1) : 0.0;
        out.push_back({x, mean, std::sqrt(var / samples), spectral.evaluate(x)});
    }
    return out;
}

std::pair<Rational, Rational> moment_equivalence_report(const ChaosElement& F, int p) {
    const int n = F.homogeneous_grade();
    if (n < 0) throw std::invalid_argument("moment_equivalence_report: F must be homogeneous and nonzero");
    if (p < 1) throw std::invalid_argument("moment_equivalence_report: p must be positive");
    const MultiPoly power = chaos_to_poly(F).pow(2 * p);
    Rational lhs = 0;
    for (const auto& [e, c] : power.terms()) {
        Integer m = 1;
        bool odd = false;
        for (int x : e) {
            if (x % 2) odd = true;
            m *= double_factorial(x - 1);
        }
        if (!odd) lhs += c * Rational(m);
    }
    Rational base = 1;
    for (int i = 0; i < n * p; ++i) base *= 2 * p - 1;
    Rational second = inner(F, F), rhs = base;
    for (int i = 0; i < p; ++i) rhs *= second;
    return {lhs, rhs};
}

}  // namespace wickworks
