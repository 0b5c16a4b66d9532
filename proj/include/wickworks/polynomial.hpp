#pragma once

#include "wickworks/rational.hpp"

#include <initializer_list>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace wickworks {

// Dense univariate polynomial over the rationals. coeffs[i] multiplies x^i and
// the leading coefficient is never zero (the zero polynomial has no coeffs).
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Rational> coeffs);
    Polynomial(std::initializer_list<Rational> coeffs);

    static Polynomial constant(const Rational& c);
    static Polynomial monomial(int degree, const Rational& c = 1);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    Rational coeff(int i) const;
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    Polynomial derivative() const;
    Rational evaluate(const Rational& x) const;
    double evaluate(double x) const;

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Rational& c);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
    friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(Polynomial a) { return a *= Rational(-1); }
    friend bool operator==(const Polynomial&, const Polynomial&) = default;

    // "1x^4 -6x^2 +3" style, highest degree first.
    std::string to_string() const;

private:
    void trim();
    std::vector<Rational> coeffs_;
};

// Expanded bivariate polynomial: (deg_x, deg_y) -> coefficient, zeros dropped.
using BivariatePoly = std::map<std::pair<int, int>, Rational>;

// Truncated series in t with polynomial-in-x coefficients: entries (t-degree, x-degree).
struct BivariateSeries {
    int order = 0;
    BivariatePoly coeffs;
};

Polynomial hermite(int n);
Polynomial hermite_explicit(int n);
Polynomial gram_schmidt_hermite(int n);
Polynomial hermite_scaled(int n, const Rational& sigma2);

// x^n = sum_m c_m H_m(x).
std::map<int, Rational> monomial_to_hermite(int n);

// H_n H_m = sum_p p! C(n,p) C(m,p) H_{n+m-2p}.
std::map<int, Rational> hermite_product(int n, int m);

// E[p(X)] for a standard normal X.
Rational gaussian_expectation(const Polynomial& p);

enum class LadderOp { a, a_dagger, L };
Polynomial apply_operator(LadderOp op, const Polynomial& p);

// Both sides of H_n(x+y; s1+s2) = sum_k C(n,k) H_k(x; s1) H_{n-k}(y; s2).
std::pair<BivariatePoly, BivariatePoly> hermite_binomial_lhs_rhs(int n, const Rational& sigma1sq,
                                                                const Rational& sigma2sq);

// exp(t x - t^2/2) truncated at t^order.
BivariateSeries hermite_generating_function(int order);

}  // namespace wickworks
