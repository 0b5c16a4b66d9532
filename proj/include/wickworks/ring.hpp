#pragma once

#include "wickworks/rational.hpp"

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace wickworks {

// Product of formal symbols with positive exponents, sorted by symbol name.
using Monomial = std::vector<std::pair<std::string, int>>;

Monomial monomial_product(const Monomial& a, const Monomial& b);
int total_degree(const Monomial& m);

// Sparse multivariate polynomial with rational coefficients over named symbols.
// Terms are kept in a sorted map and zero coefficients are never stored, so
// structural equality is mathematical equality.
class RingElem {
public:
    RingElem() = default;
    RingElem(const Rational& c);  // NOLINT: scalars embed implicitly
    RingElem(int c) : RingElem(Rational(c)) {}  // NOLINT

    static RingElem symbol(const std::string& name, int power = 1);
    static RingElem term(const Monomial& m, const Rational& c);

    bool is_zero() const { return terms_.empty(); }
    const std::map<Monomial, Rational>& terms() const { return terms_; }
    Rational coefficient(const Monomial& m) const;
    Rational constant_term() const { return coefficient({}); }

    RingElem& operator+=(const RingElem& o);
    RingElem& operator-=(const RingElem& o);
    RingElem& operator*=(const RingElem& o);
    RingElem& operator*=(const Rational& c);
    friend RingElem operator+(RingElem a, const RingElem& b) { return a += b; }
    friend RingElem operator-(RingElem a, const RingElem& b) { return a -= b; }
    friend RingElem operator*(RingElem a, const RingElem& b) { return a *= b; }
    friend RingElem operator-(RingElem a) { return a *= Rational(-1); }
    friend bool operator==(const RingElem&, const RingElem&) = default;

    // Part of total degree k, every symbol counting once per power.
    RingElem homogeneous_part(int k) const;

    double evaluate(const std::function<double(const std::string&)>& value) const;
    RingElem substitute(const std::string& name, const RingElem& value) const;

    std::string to_string() const;

private:
    void add_term(const Monomial& m, const Rational& c);
    std::map<Monomial, Rational> terms_;
};

}  // namespace wickworks
