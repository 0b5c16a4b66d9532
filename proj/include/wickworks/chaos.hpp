#pragma once

// Finite-dimensional Fock space over R^N. Basis indices are 0-based.
// Chaos elements are stored in the basis Phi_k = prod_i H_{k_i}(X_i).

#include "wickworks/multipoly.hpp"
#include "wickworks/polynomial.hpp"
#include "wickworks/rational.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

namespace wickworks {

using MultiIndex = std::map<int, int>;  // basis index -> positive power

int grade(const MultiIndex& k);
Integer multi_factorial(const MultiIndex& k);
MultiIndex multi_index_of(std::span<const int> tuple);

template <class Scalar>
class BasicChaosElement {
public:
    explicit BasicChaosElement(int dim = 0) : dim_(dim) {}

    static BasicChaosElement basis(int dim, const MultiIndex& k, const Scalar& c = Scalar(1)) {
        BasicChaosElement e(dim);
        e.add(k, c);
        return e;
    }

    int dim() const { return dim_; }
    const std::map<MultiIndex, Scalar>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    Scalar coeff(const MultiIndex& k) const {
        auto it = coeffs_.find(k);
        return it == coeffs_.end() ? Scalar(0) : it->second;
    }

    void add(const MultiIndex& k, const Scalar& c) {
        for (const auto& [i, p] : k)
            if (i < 0 || i >= dim_ || p <= 0) throw std::out_of_range("chaos: bad multi-index");
        if (c == Scalar(0)) return;
        auto [it, inserted] = coeffs_.emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second == Scalar(0)) coeffs_.erase(it);
        }
    }

    BasicChaosElement& operator+=(const BasicChaosElement& o) {
        check_dim(o);
        for (const auto& [k, c] : o.coeffs_) add(k, c);
        return *this;
    }
    BasicChaosElement& operator-=(const BasicChaosElement& o) {
        check_dim(o);
        for (const auto& [k, c] : o.coeffs_) add(k, -c);
        return *this;
    }
    BasicChaosElement& operator*=(const Scalar& s) {
        if (s == Scalar(0)) coeffs_.clear();
        for (auto& [k, c] : coeffs_) c *= s;
        return *this;
    }
    friend BasicChaosElement operator+(BasicChaosElement a, const BasicChaosElement& b) { return a += b; }
    friend BasicChaosElement operator-(BasicChaosElement a, const BasicChaosElement& b) { return a -= b; }
    friend BasicChaosElement operator*(BasicChaosElement a, const Scalar& s) { return a *= s; }
    friend bool operator==(const BasicChaosElement&, const BasicChaosElement&) = default;

    // Component in the n-th chaos.
    BasicChaosElement grade_part(int n) const {
        BasicChaosElement out(dim_);
        for (const auto& [k, c] : coeffs_)
            if (grade(k) == n) out.coeffs_.emplace(k, c);
        return out;
    }

    int max_grade() const {
        int g = -1;
        for (const auto& [k, c] : coeffs_) g = std::max(g, grade(k));
        return g;
    }

    // Grade of a nonzero homogeneous element, -1 if mixed or zero.
    int homogeneous_grade() const {
        int g = -1;
        for (const auto& [k, c] : coeffs_) {
            if (g >= 0 && grade(k) != g) return -1;
            g = grade(k);
        }
        return g;
    }

    Scalar expectation() const { return coeff({}); }

    double evaluate(std::span<const double> x) const {
        double sum = 0;
        for (const auto& [k, c] : coeffs_) {
            double t = to_real(c);
            for (const auto& [i, p] : k) t *= hermite(p).evaluate(x[i]);
            sum += t;
        }
        return sum;
    }

    void check_dim(const BasicChaosElement& o) const {
        if (o.dim_ != dim_) throw std::invalid_argument("chaos: dimension mismatch");
    }

private:
    static double to_real(const Scalar& c) {
        if constexpr (std::is_same_v<Scalar, double>)
            return c;
        else
            return to_double(c);
    }

    int dim_;
    std::map<MultiIndex, Scalar> coeffs_;
};

using ChaosElement = BasicChaosElement<Rational>;
using RealChaosElement = BasicChaosElement<double>;

// E[F G] = sum_k k! F_k G_k.
Rational inner(const ChaosElement& F, const ChaosElement& G);
inline Rational expectation(const ChaosElement& F) { return F.expectation(); }

// General rank-n tensor over R^N as a sparse map from index tuples.
struct Tensor {
    int dim = 0;
    int rank = 0;
    std::map<std::vector<int>, Rational> entries;

    void add(const std::vector<int>& t, const Rational& c);
    friend bool operator==(const Tensor&, const Tensor&) = default;
};

// Symmetric tensor: one entry per sorted tuple, holding the tensor's value on
// that tuple (not the orbit sum).
struct SymTensor {
    int dim = 0;
    int rank = 0;
    std::map<std::vector<int>, Rational> coeffs;

    Rational value(std::vector<int> tuple) const;
    friend bool operator==(const SymTensor&, const SymTensor&) = default;
};

SymTensor symmetrize(const Tensor& raw);
Tensor expand(const SymTensor& f);
Tensor tensor_product(const Tensor& f, const Tensor& g);
// Elementary tensor h_1 (x) ... (x) h_n from dense vectors.
Tensor outer(std::span<const std::vector<Rational>> factors);
// <f, g> summed over all index tuples.
Rational sym_inner(const SymTensor& f, const SymTensor& g);
Rational tensor_inner(const Tensor& f, const Tensor& g);

// Unnormalised isometry: sum over tuples t of h(t) Phi_{k(t)}.
ChaosElement wiener_isometry(const SymTensor& f);
ChaosElement wiener_isometry(const Tensor& h);
// Symmetric kernel of a homogeneous chaos element.
SymTensor chaos_preimage(const ChaosElement& F);

// Shuffle definition: every choice of p slots of f, p slots of g and a
// bijection between them; output slots are f's remaining slots then g's.
Tensor contract(const Tensor& f, const Tensor& g, int p);
// p! C(n,p) C(m,p) sum_k f(k, i) g(k, j) for symmetric inputs.
Tensor contract(const SymTensor& f, const SymTensor& g, int p);

enum class MultiplyRoute { contraction, direct };
ChaosElement chaos_multiply(const ChaosElement& F, const ChaosElement& G, MultiplyRoute route);
ChaosElement wick_product(const ChaosElement& F, const ChaosElement& G);

ChaosElement chaos_from_poly(const MultiPoly& p);
MultiPoly chaos_to_poly(const ChaosElement& F);

RealChaosElement ou_semigroup(const ChaosElement& F, double t);

struct MehlerPoint {
    std::vector<double> x;
    double estimate = 0;
    double stderr_ = 0;
    double reference = 0;  // spectral route
};
std::vector<MehlerPoint> mehler_mc(const MultiPoly& f, double t, int samples, std::uint64_t seed,
                                   const std::vector<std::vector<double>>& points);

// (E[F^{2p}], (2p-1)^{np} E[F^2]^p) for F homogeneous of grade n.
std::pair<Rational, Rational> moment_equivalence_report(const ChaosElement& F, int p);

}  // namespace wickworks
