#include "wickworks/multipoly.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wickworks {

MultiPoly MultiPoly::constant(int nvars, const Rational& c) {
    MultiPoly p(nvars);
    p.add_term(Exponents(nvars, 0), c);
    return p;
}

MultiPoly MultiPoly::variable(int nvars, int i) {
    Exponents e(nvars, 0);
    e.at(i) = 1;
    return monomial(e);
}

MultiPoly MultiPoly::monomial(const Exponents& e, const Rational& c) {
    MultiPoly p(static_cast<int>(e.size()));
    p.add_term(e, c);
    return p;
}

MultiPoly MultiPoly::from_univariate(int nvars, int var, const Polynomial& q) {
    MultiPoly p(nvars);
    for (int k = 0; k <= q.degree(); ++k) {
        Exponents e(nvars, 0);
        e.at(var) = k;
        p.add_term(e, q.coeff(k));
    }
    return p;
}

int MultiPoly::degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
        int s = 0;
        for (int x : e) s += x;
        d = std::max(d, s);
    }
    return d;
}

void MultiPoly::add_term(const Exponents& e, const Rational& c) {
    if (static_cast<int>(e.size()) != nvars_) throw std::invalid_argument("MultiPoly: exponent length mismatch");
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

MultiPoly& MultiPoly::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, v] : terms_) v *= c;
    return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    if (a.nvars_ != b.nvars_) throw std::invalid_argument("MultiPoly: variable count mismatch");
    MultiPoly out(a.nvars_);
    MultiPoly::Exponents e(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            for (int i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
            out.add_term(e, ca * cb);
        }
    return out;
}

MultiPoly MultiPoly::pow(int k) const {
    MultiPoly result = constant(nvars_, 1);
    MultiPoly base = *this;
    while (k > 0) {
        if (k & 1) result = result * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return result;
}

MultiPoly MultiPoly::derivative(int var) const {
    MultiPoly out(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e.at(var) == 0) continue;
        Exponents f = e;
        f[var] -= 1;
        out.add_term(f, c * e[var]);
    }
    return out;
}

double MultiPoly::evaluate(std::span<const double> x) const {
    double sum = 0;
    for (const auto& [e, c] : terms_) {
        double t = to_double(c);
        for (int i = 0; i < nvars_; ++i)
            if (e[i]) t *= std::pow(x[i], e[i]);
        sum += t;
    }
    return sum;
}

std::string MultiPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        os << c.str();
        for (int i = 0; i < nvars_; ++i)
            if (e[i]) os << "*X" << i << (e[i] > 1 ? "^" + std::to_string(e[i]) : "");
        first = false;
    }
    return os.str();
}

}  // namespace wickworks
