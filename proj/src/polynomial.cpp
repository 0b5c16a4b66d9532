#include "wickworks/polynomial.hpp"

#include <sstream>
#include <stdexcept>

namespace wickworks {

Integer factorial(int n) {
    Integer r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

Integer double_factorial(int n) {
    Integer r = 1;
    for (int i = n; i > 1; i -= 2) r *= i;
    return r;
}

Integer binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    Integer r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

std::string to_string(const Rational& r) { return r.str(); }

Polynomial::Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Polynomial::Polynomial(std::initializer_list<Rational> coeffs) : coeffs_(coeffs) { trim(); }

Polynomial Polynomial::constant(const Rational& c) { return Polynomial({c}); }

Polynomial Polynomial::monomial(int degree, const Rational& c) {
    std::vector<Rational> v(degree + 1);
    v[degree] = c;
    return Polynomial(std::move(v));
}

void Polynomial::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational Polynomial::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(coeffs_.size())) return 0;
    return coeffs_[i];
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<Rational> v(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) v[i - 1] = coeffs_[i] * static_cast<int>(i);
    return Polynomial(std::move(v));
}

Rational Polynomial::evaluate(const Rational& x) const {
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double Polynomial::evaluate(double x) const {
    double acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + to_double(*it);
    return acc;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    trim();
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    trim();
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
    for (auto& x : coeffs_) x *= c;
    trim();
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> v(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Polynomial(std::move(v));
}

std::string Polynomial::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const Rational& c = coeffs_[i];
        if (c == 0) continue;
        if (!first) os << ' ';
        if (!first && c > 0) os << '+';
        os << c.str();
        if (i >= 1) os << 'x';
        if (i >= 2) os << '^' << i;
        first = false;
    }
    return os.str();
}

Polynomial hermite(int n) {
    if (n < 0) throw std::invalid_argument("hermite: negative degree");
    Polynomial prev;  // H_{-1} = 0
    Polynomial cur = Polynomial::constant(1);
    const Polynomial x = Polynomial::monomial(1);
    for (int k = 0; k < n; ++k) {
        Polynomial next = x * cur - Rational(k) * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

Polynomial hermite_scaled(int n, const Rational& sigma2) {
    if (n < 0) throw std::invalid_argument("hermite_scaled: negative degree");
    // n! sum_k (-sigma2/2)^k x^{n-2k} / (k! (n-2k)!)
    std::vector<Rational> v(n + 1);
    const Rational nf(factorial(n));
    Rational power = 1;
    const Rational step = -sigma2 / 2;
    for (int k = 0; 2 * k <= n; ++k) {
        v[n - 2 * k] = nf * power / Rational(factorial(k) * factorial(n - 2 * k));
        power *= step;
    }
    return Polynomial(std::move(v));
}

Polynomial hermite_explicit(int n) {
    if (n < 0) throw std::invalid_argument("hermite_explicit: negative degree");
    std::vector<Rational> v(n + 1);
    const Integer nf = factorial(n);
    for (int k = 0; 2 * k <= n; ++k) {
        Integer den = factorial(k) * factorial(n - 2 * k);
        den <<= k;
        Rational c(nf, den);
        v[n - 2 * k] = (k % 2 == 0) ? c : Rational(-c);
    }
    return Polynomial(std::move(v));
}

Rational gaussian_expectation(const Polynomial& p) {
    Rational sum = 0;
    for (int i = 0; i <= p.degree(); i += 2) sum += p.coeff(i) * Rational(double_factorial(i - 1));
    return sum;
}

Polynomial gram_schmidt_hermite(int n) {
    if (n < 0) throw std::invalid_argument("gram_schmidt_hermite: negative degree");
    std::vector<Polynomial> basis;
    std::vector<Rational> norms;
    for (int k = 0; k <= n; ++k) {
        const Polynomial v = Polynomial::monomial(k);
        Polynomial u = v;
        for (std::size_t j = 0; j < basis.size(); ++j)
            u -= (gaussian_expectation(v * basis[j]) / norms[j]) * basis[j];
        norms.push_back(gaussian_expectation(u * u));
        basis.push_back(std::move(u));
    }
    return basis.back();
}

std::map<int, Rational> monomial_to_hermite(int n) {
    if (n < 0) throw std::invalid_argument("monomial_to_hermite: negative degree");
    // x^n = sum_k n! / (2^k k! (n-2k)!) H_{n-2k}
    std::map<int, Rational> out;
    const Integer nf = factorial(n);
    for (int k = 0; 2 * k <= n; ++k) {
        Integer den = factorial(k) * factorial(n - 2 * k);
        den <<= k;
        out[n - 2 * k] = Rational(nf, den);
    }
    return out;
}

std::map<int, Rational> hermite_product(int n, int m) {
    if (n < 0 || m < 0) throw std::invalid_argument("hermite_product: negative degree");
    std::map<int, Rational> out;
    for (int p = 0; p <= std::min(n, m); ++p)
        out[n + m - 2 * p] = Rational(factorial(p) * binomial(n, p) * binomial(m, p));
    return out;
}

Polynomial apply_operator(LadderOp op, const Polynomial& p) {
    const Polynomial x = Polynomial::monomial(1);
    switch (op) {
        case LadderOp::a: return p.derivative();
        case LadderOp::a_dagger: return x * p - p.derivative();
        case LadderOp::L: return p.derivative().derivative() - x * p.derivative();
    }
    return {};
}

namespace {

void add_to(BivariatePoly& acc, int i, int j, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = acc.emplace(std::make_pair(i, j), c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) acc.erase(it);
    }
}

}  // namespace

std::pair<BivariatePoly, BivariatePoly> hermite_binomial_lhs_rhs(int n, const Rational& sigma1sq,
                                                                const Rational& sigma2sq) {
    BivariatePoly lhs, rhs;
    const Polynomial h = hermite_scaled(n, sigma1sq + sigma2sq);
    // expand (x+y)^j
    for (int j = 0; j <= h.degree(); ++j)
        for (int a = 0; a <= j; ++a) add_to(lhs, a, j - a, h.coeff(j) * Rational(binomial(j, a)));
    for (int k = 0; k <= n; ++k) {
        const Polynomial hx = hermite_scaled(k, sigma1sq);
        const Polynomial hy = hermite_scaled(n - k, sigma2sq);
        const Rational c(binomial(n, k));
        for (int a = 0; a <= hx.degree(); ++a)
            for (int b = 0; b <= hy.degree(); ++b) add_to(rhs, a, b, c * hx.coeff(a) * hy.coeff(b));
    }
    return {lhs, rhs};
}

BivariateSeries hermite_generating_function(int order) {
    BivariateSeries s;
    s.order = order;
    for (int a = 0; a <= order; ++a)
        for (int b = 0; a + 2 * b <= order; ++b) {
            Integer den = factorial(a) * factorial(b);
            den <<= b;
            Rational c(Integer(1), den);
            add_to(s.coeffs, a + 2 * b, a, (b % 2 == 0) ? c : Rational(-c));
        }
    return s;
}

}  // namespace wickworks
