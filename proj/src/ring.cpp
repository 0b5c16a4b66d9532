#include "wickworks/ring.hpp"

#include <cmath>
#include <sstream>

namespace wickworks {

Monomial monomial_product(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.reserve(a.size() + b.size());
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() || j != b.end()) {
        if (j == b.end() || (i != a.end() && i->first < j->first)) {
            out.push_back(*i++);
        } else if (i == a.end() || j->first < i->first) {
            out.push_back(*j++);
        } else {
            out.emplace_back(i->first, i->second + j->second);
            ++i;
            ++j;
        }
    }
    return out;
}

int total_degree(const Monomial& m) {
    int d = 0;
    for (const auto& [s, p] : m) d += p;
    return d;
}

RingElem::RingElem(const Rational& c) {
    if (c != 0) terms_.emplace(Monomial{}, c);
}

RingElem RingElem::symbol(const std::string& name, int power) {
    RingElem r;
    r.terms_.emplace(power == 0 ? Monomial{} : Monomial{{name, power}}, Rational(1));
    return r;
}

RingElem RingElem::term(const Monomial& m, const Rational& c) {
    RingElem r;
    r.add_term(m, c);
    return r;
}

Rational RingElem::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

void RingElem::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

RingElem& RingElem::operator+=(const RingElem& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

RingElem& RingElem::operator-=(const RingElem& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

RingElem& RingElem::operator*=(const RingElem& o) {
    RingElem out;
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) out.add_term(monomial_product(ma, mb), ca * cb);
    terms_ = std::move(out.terms_);
    return *this;
}

RingElem& RingElem::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

RingElem RingElem::homogeneous_part(int k) const {
    RingElem out;
    for (const auto& [m, c] : terms_)
        if (total_degree(m) == k) out.terms_.emplace(m, c);
    return out;
}

double RingElem::evaluate(const std::function<double(const std::string&)>& value) const {
    double sum = 0;
    for (const auto& [m, c] : terms_) {
        double t = to_double(c);
        for (const auto& [s, p] : m) t *= std::pow(value(s), p);
        sum += t;
    }
    return sum;
}

RingElem RingElem::substitute(const std::string& name, const RingElem& value) const {
    RingElem out;
    for (const auto& [m, c] : terms_) {
        Monomial rest;
        int power = 0;
        for (const auto& f : m) {
            if (f.first == name)
                power = f.second;
            else
                rest.push_back(f);
        }
        RingElem t = RingElem::term(rest, c);
        for (int i = 0; i < power; ++i) t *= value;
        out += t;
    }
    return out;
}

std::string RingElem::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << '-';
        const Rational a = c < 0 ? Rational(-c) : c;
        const bool unit = (a == 1) && !m.empty();
        if (!unit) os << a.str();
        bool firstf = unit;
        for (const auto& [s, p] : m) {
            if (!firstf) os << '*';
            os << s;
            if (p > 1) os << '^' << p;
            firstf = false;
        }
        first = false;
    }
    return os.str();
}

}  // namespace wickworks
