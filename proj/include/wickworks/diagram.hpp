#pragma once

// Feynman multigraphs: vertices with an arity and an optional label
// (external points), undirected edges (self-loops allowed in the type) and
// free legs. Sums of diagrams with rational coefficients; disjoint union is
// the product.

#include "wickworks/rational.hpp"

#include <compare>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace wickworks {

struct Diagram {
    std::vector<int> arity;
    std::vector<std::string> label;                 // "" for internal vertices
    std::vector<std::pair<int, int>> edges;         // u <= v, sorted
    std::vector<std::pair<int, std::string>> legs;  // free legs (vertex, label)

    static Diagram from_edges(std::vector<int> arity, std::vector<std::pair<int, int>> edges,
                              std::vector<std::string> labels = {});

    int vertex_count() const { return static_cast<int>(arity.size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }
    int self_loops() const;
    int multiplicity(int u, int v) const;
    bool empty() const { return arity.empty(); }
    // sum of arities == 2 |edges| + |legs| and arity == degree + legs per vertex
    bool valid() const;
    std::vector<int> degrees() const;
    // independent cycles |E| - |V| + components
    int loop_number() const;

    friend auto operator<=>(const Diagram&, const Diagram&) = default;
    friend bool operator==(const Diagram&, const Diagram&) = default;
};

// Canonical relabelling: colour refinement on (arity, label, loops, legs,
// neighbour multiset), then the lexicographically least adjacency encoding
// over permutations inside the colour cells.
Diagram canonical(const Diagram& g);
bool is_canonical(const Diagram& g);
// Short stable text key of a canonical diagram, e.g. "4,4|0-1x4".
std::string key(const Diagram& g);

bool is_connected(const Diagram& g);
std::vector<Diagram> connected_components(const Diagram& g);  // canonical
Diagram disjoint_union(const Diagram& a, const Diagram& b);   // canonical
// Every edge is in a cycle (bridgeless); loops and parallel edges count.
bool is_one_particle_irreducible(const Diagram& g);

// Vertex-induced subgraph with every edge between the chosen vertices;
// arities become internal degrees, legs are dropped.
Diagram induced_subgraph(const Diagram& g, std::span<const int> vertices);
// Drops the free legs; each vertex keeps only its internal degree as arity.
Diagram amputate(const Diagram& g);
// Contracts each vertex set (pairwise disjoint) to a single vertex whose
// arity is the number of edge ends and legs leaving the set.
Diagram contract_subgraphs(const Diagram& g, const std::vector<std::vector<int>>& parts);

class DiagramSum {
public:
    DiagramSum() = default;
    // c times the unit (empty diagram); lets diagram sums serve as scalars.
    explicit DiagramSum(const Rational& c) { add(Diagram{}, c); }
    static DiagramSum single(const Diagram& g, const Rational& c = 1);
    static DiagramSum unit() { return single(Diagram{}); }

    void add(const Diagram& g, const Rational& c);
    const std::map<Diagram, Rational>& terms() const& { return terms_; }
    std::map<Diagram, Rational> terms() && { return std::move(terms_); }
    Rational coefficient(const Diagram& g) const;
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    Rational total() const;

    DiagramSum& operator+=(const DiagramSum& o);
    DiagramSum& operator-=(const DiagramSum& o);
    DiagramSum& operator*=(const Rational& s);
    friend DiagramSum operator+(DiagramSum a, const DiagramSum& b) { return a += b; }
    friend DiagramSum operator-(DiagramSum a, const DiagramSum& b) { return a -= b; }
    friend DiagramSum operator*(DiagramSum a, const Rational& s) { return a *= s; }
    // disjoint-union product, bilinear
    friend DiagramSum operator*(const DiagramSum& a, const DiagramSum& b);
    friend bool operator==(const DiagramSum&, const DiagramSum&) = default;

    DiagramSum connected_part() const;

private:
    std::map<Diagram, Rational> terms_;  // canonical keys, nonzero
};

// All perfect leg matchings of vertices with the given arities, grouped by
// isomorphism class; the first labels.size() vertices carry the labels.
// The coefficient of a class counts the matchings producing it.
DiagramSum generate_diagrams(std::span<const int> arities, const std::vector<std::string>& labels = {},
                             bool allow_loops = false);

// Connected two-leg diagrams on n four-valent vertices with 2n - 1 internal
// edges and no self-loops; legs are free and labelled "ext".
std::vector<Diagram> two_leg_diagrams(int n, bool one_particle_irreducible = true);

namespace named {
Diagram propagator();  // two 1-valent vertices, one edge
Diagram bubble();          // two 2-valent vertices, double edge
Diagram sunset();          // two 3-valent vertices, triple edge
Diagram melon();           // two 4-valent vertices, four edges
Diagram double_triangle(); // triangle of double edges on three 4-valent vertices
Diagram sunset_plus();     // sunset whose ends are joined through a 2-valent vertex
Diagram bubble_pair();     // 4-valent vertex joined by double edges to two 2-valent vertices
Diagram triangle();        // three 2-valent vertices in a cycle
}  // namespace named

}  // namespace wickworks
