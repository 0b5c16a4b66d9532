#pragma once

#include "wickworks/polynomial.hpp"
#include "wickworks/rational.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace wickworks {

// Sparse polynomial in X_0..X_{n-1}; keys are exponent vectors of length n.
class MultiPoly {
public:
    using Exponents = std::vector<int>;

    explicit MultiPoly(int nvars = 0) : nvars_(nvars) {}

    static MultiPoly constant(int nvars, const Rational& c);
    static MultiPoly variable(int nvars, int i);
    static MultiPoly monomial(const Exponents& e, const Rational& c = 1);
    // p(X_var) for a univariate p.
    static MultiPoly from_univariate(int nvars, int var, const Polynomial& p);

    int nvars() const { return nvars_; }
    const std::map<Exponents, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const;

    void add_term(const Exponents& e, const Rational& c);

    MultiPoly& operator+=(const MultiPoly& o);
    MultiPoly& operator-=(const MultiPoly& o);
    MultiPoly& operator*=(const Rational& c);
    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
    friend MultiPoly operator*(MultiPoly a, const Rational& c) { return a *= c; }
    friend MultiPoly operator*(const Rational& c, MultiPoly a) { return a *= c; }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
    friend bool operator==(const MultiPoly&, const MultiPoly&) = default;

    MultiPoly pow(int k) const;
    MultiPoly derivative(int var) const;
    double evaluate(std::span<const double> x) const;

    std::string to_string() const;

private:
    int nvars_ = 0;
    std::map<Exponents, Rational> terms_;
};

}  // namespace wickworks
