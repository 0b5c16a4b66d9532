#pragma once

// Valuation of Feynman diagrams on the truncated torus lattice, power
// counting, and the Hopf-algebraic renormalisation of divergent subgraphs.

#include "wickworks/diagram.hpp"
#include "wickworks/modearray.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace wickworks {

// Momentum lattice and edge weight lambda^{-exponent} used for dimension d.
// Integer d in {1, 2, 3} uses its own lattice with exponent 1; d in (3, 4)
// uses the d = 3 lattice with exponent (5 - d) / 2, so that the propagator
// decays like |x|^{2 - d} in position space.
struct ValuationContext {
    double d = 3;
    int N = 4;
    int lattice_dim = 3;
    double exponent = 1;
    int threads = 0;

    static ValuationContext make(double d, int N, int threads = 0);
    ModeArray edge_weight() const;
};

// Pi_N of a vacuum diagram (labels allowed, legs not): the sum over edge
// momenta conserved at every vertex of the product of edge weights.
// Series-parallel parts are reduced by pointwise products and convolutions;
// what remains is summed over independent loop momenta (budgeted).
// Results are cached per (canonical form, d, N).
double valuate(const Diagram& g, double d, int N);
// Uncached, on the given presentation.
double valuate_uncached(const Diagram& g, const ValuationContext& ctx);
// Sum of coefficient times the product of component valuations.
double valuate(const DiagramSum& s, double d, int N);
void clear_valuation_cache();

// Diagrams whose vertices labelled x and y are the two endpoints: the
// momentum profile W with G_2(x, y) = sum_p W(p) e^{2 pi i p.(x - y)}.
// Vacuum components not attached to x or y multiply W.
ModeArray two_point_profile(const Diagram& g, double d, int N);
double two_point_value(const Diagram& g, double d, int N, std::span<const double> x, std::span<const double> y);

struct McEstimate {
    double estimate = 0;
    double stderr_ = 0;
};
// Integral over vertex positions of the product of truncated Green
// functions, uniform sampling (integer d only).
McEstimate valuate_position_mc(const Diagram& g, int d, int N, std::int64_t samples, std::uint64_t seed);

// deg = constant + slope * d, from d (|V| - 1) - (d - 2) |E|.
struct AffineDegree {
    int constant = 0;
    int slope = 0;
    double at(double d) const { return constant + slope * d; }
    friend bool operator==(const AffineDegree&, const AffineDegree&) = default;
};
AffineDegree degree_form(const Diagram& g);
double degree(const Diagram& g, double d);

struct Subgraph {
    std::vector<int> vertices;  // sorted, in the presentation of the parent
    Diagram graph;              // canonical induced subgraph
};
// Proper connected vertex-induced subgraphs with at least two vertices and
// deg <= 0.
std::vector<Subgraph> divergent_subgraphs(const Diagram& g, double d);
bool weinberg_check(const Diagram& g, double d);
// Nonempty sets of pairwise vertex-disjoint divergent subgraphs.
std::vector<std::vector<Subgraph>> divergent_forests(const Diagram& g, double d);

// Formal sums of tensors of monomials; a monomial is a diagram whose
// components are the factors, the empty diagram is the unit.
class TensorSum {
public:
    void add(const Diagram& left, const Diagram& right, const Rational& c);
    const std::map<std::pair<Diagram, Diagram>, Rational>& terms() const& { return terms_; }
    std::map<std::pair<Diagram, Diagram>, Rational> terms() && { return std::move(terms_); }
    std::size_t size() const { return terms_.size(); }
    friend bool operator==(const TensorSum&, const TensorSum&) = default;

private:
    std::map<std::pair<Diagram, Diagram>, Rational> terms_;
};

using TripleSum = std::map<std::array<Diagram, 3>, Rational>;

// Delta(G) = G (x) 1 + 1 (x) G + sum over divergent forests F of
// prod(F) (x) G / F; extended multiplicatively to monomials.
TensorSum ck_coproduct(const Diagram& g, double d);
// (Delta (x) id) Delta and (id (x) Delta) Delta.
TripleSum iterate_coproduct_left(const Diagram& g, double d);
TripleSum iterate_coproduct_right(const Diagram& g, double d);

// A(G) = -G - sum_F A(F) G / F on connected G, multiplicative on monomials.
DiagramSum antipode(const Diagram& g, double d);
DiagramSum antipode(const DiagramSum& s, double d);
// A(G) when deg G <= 0, otherwise 0; multiplicative.
DiagramSum twisted_antipode(const Diagram& g, double d);

// (twisted antipode (x) id) Delta(G) multiplied out, as a formal sum.
DiagramSum bphz_expansion(const Diagram& g, double d);
enum class BphzRoute { direct, lemma };
// direct: valuation of bphz_expansion. lemma: 0 if deg <= 0, else
// -Pi_N(A(G)).
double bphz_valuate(const Diagram& g, double d, int N, BphzRoute route = BphzRoute::direct);

}  // namespace wickworks
