#include "wickworks/cumulants.hpp"

namespace wickworks {

Functional<RingElem> quadratic_cumulant(int degree, const RingElem& value) {
    Functional<RingElem> k(degree);
    if (degree >= 2) k[2] = value;
    return k;
}

RingElem wick_poly_to_ring(const WickPoly<RingElem>& p, const std::string& var) {
    RingElem out;
    for (std::size_t i = 0; i < p.size(); ++i) out += p[i] * RingElem::symbol(var, static_cast<int>(i));
    return out;
}

RingElem complete_bell(int n) {
    if (n < 0) throw std::invalid_argument("complete_bell: negative degree");
    // exp(tx + sum_m y_m t^m/m!) is the Wick exponential for kappa(x^m) = -y_m.
    Functional<RingElem> kappa(std::max(n, 1));
    for (int m = 2; m <= n; ++m) kappa[m] = -RingElem::symbol("y" + std::to_string(m));
    return wick_poly_to_ring(wick_map(kappa, n), "x");
}

RingElem incomplete_bell(int n, int k) {
    if (k < 0 || k > n) throw std::out_of_range("incomplete_bell: k out of range");
    return complete_bell(n).homogeneous_part(k);
}

std::map<std::pair<int, int>, Rational> coproduct(int n) {
    std::map<std::pair<int, int>, Rational> out;
    for (int k = 0; k <= n; ++k) out[{k, n - k}] = Rational(binomial(n, k));
    return out;
}

std::pair<TrinomialTable, TrinomialTable> coassociativity_tables(int n) {
    TrinomialTable left, right;
    for (const auto& [ab, c] : coproduct(n)) {
        for (const auto& [ij, c2] : coproduct(ab.first)) left[{ij.first, ij.second, ab.second}] += c * c2;
        for (const auto& [ij, c2] : coproduct(ab.second)) right[{ab.first, ij.first, ij.second}] += c * c2;
    }
    return {left, right};
}

Rational counit(int n) { return n == 0 ? Rational(1) : Rational(0); }

Rational antipode(int n) { return n % 2 == 0 ? Rational(1) : Rational(-1); }

}  // namespace wickworks
