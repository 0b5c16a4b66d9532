#pragma once

// Convolution algebra of linear functionals on R[x] (values in a commutative
// ring R), moment/cumulant relations, the Wick map and Bell polynomials.

#include "wickworks/polynomial.hpp"
#include "wickworks/rational.hpp"
#include "wickworks/ring.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace wickworks {

template <class R>
R scalar_as(const Rational& c) {
    return R(c);
}

// Linear functional known on x^0..x^D.
template <class R>
class Functional {
public:
    Functional() = default;
    explicit Functional(int degree) : values_(degree + 1, R(0)) {}
    explicit Functional(std::vector<R> values) : values_(std::move(values)) {
        if (values_.empty()) throw std::invalid_argument("Functional: empty value list");
    }

    static Functional unit(int degree) {
        Functional f(degree);
        f.values_[0] = R(1);
        return f;
    }

    int degree() const { return static_cast<int>(values_.size()) - 1; }
    const R& operator()(int n) const {
        if (n < 0 || n > degree()) throw std::out_of_range("Functional: degree beyond truncation");
        return values_[n];
    }
    R& operator[](int n) {
        if (n < 0 || n > degree()) throw std::out_of_range("Functional: degree beyond truncation");
        return values_[n];
    }
    const std::vector<R>& values() const { return values_; }

    friend bool operator==(const Functional&, const Functional&) = default;

    Functional& operator+=(const Functional& o) {
        check_same_degree(o);
        for (int i = 0; i <= degree(); ++i) values_[i] += o.values_[i];
        return *this;
    }
    Functional& operator-=(const Functional& o) {
        check_same_degree(o);
        for (int i = 0; i <= degree(); ++i) values_[i] -= o.values_[i];
        return *this;
    }
    friend Functional operator+(Functional a, const Functional& b) { return a += b; }
    friend Functional operator-(Functional a, const Functional& b) { return a -= b; }
    friend Functional operator-(Functional a) {
        for (auto& v : a.values_) v = R(0) - v;
        return a;
    }
    Functional scaled(const Rational& c) const {
        Functional out = *this;
        for (auto& v : out.values_) v = v * scalar_as<R>(c);
        return out;
    }

    void check_same_degree(const Functional& o) const {
        if (o.degree() != degree()) throw std::invalid_argument("Functional: mismatched truncation degrees");
    }

private:
    std::vector<R> values_;
};

template <class R>
Functional<R> convolve(const Functional<R>& phi, const Functional<R>& psi) {
    phi.check_same_degree(psi);
    Functional<R> out(phi.degree());
    for (int n = 0; n <= phi.degree(); ++n) {
        R acc(0);
        for (int k = 0; k <= n; ++k) acc += scalar_as<R>(Rational(binomial(n, k))) * phi(k) * psi(n - k);
        out[n] = acc;
    }
    return out;
}

template <class R>
Functional<R> conv_inverse(const Functional<R>& phi) {
    if (!(phi(0) == R(1))) throw std::invalid_argument("conv_inverse: phi(1) must equal 1");
    Functional<R> inv(phi.degree());
    inv[0] = R(1);
    for (int n = 1; n <= phi.degree(); ++n) {
        R acc(0);
        for (int k = 1; k <= n; ++k) acc += scalar_as<R>(Rational(binomial(n, k))) * phi(k) * inv(n - k);
        inv[n] = R(0) - acc;
    }
    return inv;
}

// Lambda(exp*(phi)) = exp(Lambda(phi)); e' = phi' e in the binomial basis.
template <class R>
Functional<R> exp_star(const Functional<R>& phi) {
    if (!(phi(0) == R(0))) throw std::invalid_argument("exp_star: phi(1) must vanish");
    Functional<R> e(phi.degree());
    e[0] = R(1);
    for (int n = 0; n < phi.degree(); ++n) {
        R acc(0);
        for (int k = 0; k <= n; ++k) acc += scalar_as<R>(Rational(binomial(n, k))) * phi(k + 1) * e(n - k);
        e[n + 1] = acc;
    }
    return e;
}

template <class R>
Functional<R> log_star(const Functional<R>& phi) {
    if (!(phi(0) == R(1))) throw std::invalid_argument("log_star: phi(1) must equal 1");
    Functional<R> l(phi.degree());
    for (int n = 0; n < phi.degree(); ++n) {
        R acc = phi(n + 1);
        for (int k = 0; k < n; ++k) acc -= scalar_as<R>(Rational(binomial(n, k))) * l(k + 1) * phi(n - k);
        l[n + 1] = acc;
    }
    return l;
}

template <class R>
Functional<R> moments_from_cumulants(const Functional<R>& kappa) {
    return exp_star(kappa);
}

template <class R>
Functional<R> cumulants_from_moments(const Functional<R>& mu) {
    return log_star(mu);
}

// Polynomial in x with coefficients in R; entry i multiplies x^i.
template <class R>
using WickPoly = std::vector<R>;

namespace detail {

template <class R>
WickPoly<R> binomial_pairing(const Functional<R>& phi, int n) {
    WickPoly<R> out(n + 1, R(0));
    for (int k = 0; k <= n; ++k) out[n - k] = scalar_as<R>(Rational(binomial(n, k))) * phi(k);
    return out;
}

template <class R>
void check_wick_kappa(const Functional<R>& kappa) {
    if (!(kappa(0) == R(0))) throw std::invalid_argument("wick_map: kappa(1) must vanish");
    if (kappa.degree() >= 1 && !(kappa(1) == R(0))) throw std::invalid_argument("wick_map: kappa(x) must vanish");
}

}  // namespace detail

// W(x^n) = sum_k C(n,k) mu^{-1}(x^k) x^{n-k}, with mu = exp*(kappa).
template <class R>
WickPoly<R> wick_map(const Functional<R>& kappa, int n) {
    detail::check_wick_kappa(kappa);
    if (n > kappa.degree()) throw std::out_of_range("wick_map: degree beyond truncation");
    return detail::binomial_pairing(conv_inverse(exp_star(kappa)), n);
}

template <class R>
WickPoly<R> wick_map_inverse(const Functional<R>& kappa, int n) {
    detail::check_wick_kappa(kappa);
    if (n > kappa.degree()) throw std::out_of_range("wick_map_inverse: degree beyond truncation");
    return detail::binomial_pairing(exp_star(kappa), n);
}

// Applies a linear map given on monomials (entry m = image of x^m) to a polynomial.
template <class R>
WickPoly<R> apply_linear(const std::vector<WickPoly<R>>& images, const WickPoly<R>& p) {
    WickPoly<R> out;
    for (std::size_t m = 0; m < p.size(); ++m) {
        const WickPoly<R>& img = images.at(m);
        if (img.size() > out.size()) out.resize(img.size(), R(0));
        for (std::size_t i = 0; i < img.size(); ++i) out[i] += p[m] * img[i];
    }
    return out;
}

// The symbolic Gaussian-type cumulant kappa(x^2) = value, zero elsewhere.
Functional<RingElem> quadratic_cumulant(int degree, const RingElem& value);

// Complete Bell polynomial B_n(x, y2, ..., yn) as an element of Q[x, y2, ...].
RingElem complete_bell(int n);
// Part of B_n of total degree k (x and each y_m count one).
RingElem incomplete_bell(int n, int k);

RingElem wick_poly_to_ring(const WickPoly<RingElem>& p, const std::string& var);

// Hopf structure of R[x]: Delta(x^n) = sum_k C(n,k) x^k (x) x^{n-k}.
std::map<std::pair<int, int>, Rational> coproduct(int n);
using TrinomialTable = std::map<std::tuple<int, int, int>, Rational>;
// ((Delta (x) id) Delta(x^n), (id (x) Delta) Delta(x^n)).
std::pair<TrinomialTable, TrinomialTable> coassociativity_tables(int n);
Rational counit(int n);
Rational antipode(int n);  // coefficient of x^n in A(x^n)

}  // namespace wickworks
