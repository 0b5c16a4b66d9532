#include "wickworks/diagram.hpp"

#include "wickworks/budget.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace wickworks {

namespace {

using Matrix = std::vector<std::vector<int>>;

Matrix multiplicities(const Diagram& g) {
    const int n = g.vertex_count();
    Matrix m(n, std::vector<int>(n, 0));
    for (auto [u, v] : g.edges) {
        if (u == v)
            ++m[u][u];
        else {
            ++m[u][v];
            ++m[v][u];
        }
    }
    return m;
}

std::vector<std::vector<std::string>> legs_by_vertex(const Diagram& g) {
    std::vector<std::vector<std::string>> out(g.vertex_count());
    for (const auto& [v, l] : g.legs) out[v].push_back(l);
    for (auto& l : out) std::sort(l.begin(), l.end());
    return out;
}

template <class Key>
std::vector<int> rank_keys(const std::vector<Key>& keys) {
    std::vector<Key> sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> out;
    for (const Key& k : keys) out.push_back(static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), k) - sorted.begin()));
    return out;
}

int count_distinct(const std::vector<int>& v) { return static_cast<int>(std::set<int>(v.begin(), v.end()).size()); }

Diagram relabel(const Diagram& g, const std::vector<int>& new_of_old) {
    const int n = g.vertex_count();
    Diagram out;
    out.arity.resize(n);
    out.label.resize(n);
    for (int v = 0; v < n; ++v) {
        out.arity[new_of_old[v]] = g.arity[v];
        out.label[new_of_old[v]] = g.label[v];
    }
    for (auto [u, v] : g.edges) {
        const int a = new_of_old[u], b = new_of_old[v];
        out.edges.emplace_back(std::min(a, b), std::max(a, b));
    }
    for (const auto& [v, l] : g.legs) out.legs.emplace_back(new_of_old[v], l);
    std::sort(out.edges.begin(), out.edges.end());
    std::sort(out.legs.begin(), out.legs.end());
    return out;
}

// Union-find over vertices using the edges.
std::vector<int> component_ids(const Diagram& g) {
    std::vector<int> parent(g.vertex_count());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (auto [u, v] : g.edges) parent[find(u)] = find(v);
    std::vector<int> roots;
    for (int v = 0; v < g.vertex_count(); ++v) roots.push_back(find(v));
    return rank_keys(roots);
}

}  // namespace

Diagram Diagram::from_edges(std::vector<int> arity, std::vector<std::pair<int, int>> edges,
                            std::vector<std::string> labels) {
    Diagram g;
    g.arity = std::move(arity);
    g.label = std::move(labels);
    g.label.resize(g.arity.size());
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= g.vertex_count() || v >= g.vertex_count())
            throw std::out_of_range("diagram: edge endpoint out of range");
        g.edges.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

int Diagram::self_loops() const {
    return static_cast<int>(std::count_if(edges.begin(), edges.end(), [](auto e) { return e.first == e.second; }));
}

int Diagram::multiplicity(int u, int v) const {
    const std::pair<int, int> e(std::min(u, v), std::max(u, v));
    return static_cast<int>(std::count(edges.begin(), edges.end(), e));
}

std::vector<int> Diagram::degrees() const {
    std::vector<int> deg(vertex_count(), 0);
    for (auto [u, v] : edges) {
        ++deg[u];
        ++deg[v];
    }
    return deg;
}

bool Diagram::valid() const {
    if (label.size() != arity.size()) return false;
    std::vector<int> used = degrees();
    for (const auto& [v, l] : legs) {
        if (v < 0 || v >= vertex_count()) return false;
        ++used[v];
    }
    return used == arity;
}

int Diagram::loop_number() const {
    const std::vector<int> comp = component_ids(*this);
    const int components = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
    return edge_count() - vertex_count() + components;
}

Diagram canonical(const Diagram& g) {
    const int n = g.vertex_count();
    if (n == 0) return g;
    Diagram src = g;
    src.label.resize(n);
    const Matrix m = multiplicities(src);
    const auto legs = legs_by_vertex(src);

    std::vector<std::tuple<int, std::string, int, std::vector<std::string>>> initial;
    for (int v = 0; v < n; ++v) initial.emplace_back(src.arity[v], src.label[v], m[v][v], legs[v]);
    std::vector<int> colour = rank_keys(initial);
    for (;;) {
        std::vector<std::pair<int, std::vector<std::pair<int, int>>>> keys;
        for (int v = 0; v < n; ++v) {
            std::vector<std::pair<int, int>> nb;
            for (int w = 0; w < n; ++w)
                if (w != v && m[v][w] > 0) nb.emplace_back(colour[w], m[v][w]);
            std::sort(nb.begin(), nb.end());
            keys.emplace_back(colour[v], std::move(nb));
        }
        std::vector<int> refined = rank_keys(keys);
        const bool stable = count_distinct(refined) == count_distinct(colour);
        colour = std::move(refined);
        if (stable) break;
    }

    const int cells_count = count_distinct(colour);
    std::vector<std::vector<int>> cells(cells_count);
    for (int v = 0; v < n; ++v) cells[colour[v]].push_back(v);
    double work = 1;
    for (const auto& c : cells)
        for (std::size_t i = 2; i <= c.size(); ++i) work *= static_cast<double>(i);
    if (work > 5e6) throw BudgetExceeded("canonical: too many symmetric vertices");

    std::vector<int> order, best_order;
    std::vector<int> best_code;
    auto encode = [&](const std::vector<int>& ord) {
        std::vector<int> code;
        code.reserve(n * (n + 1) / 2);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) code.push_back(m[ord[i]][ord[j]]);
        return code;
    };
    std::function<void(int)> rec = [&](int c) {
        if (c == cells_count) {
            std::vector<int> code = encode(order);
            if (best_order.empty() || code < best_code) {
                best_code = std::move(code);
                best_order = order;
            }
            return;
        }
        std::vector<int> cell = cells[c];
        do {
            order.insert(order.end(), cell.begin(), cell.end());
            rec(c + 1);
            order.resize(order.size() - cell.size());
        } while (std::next_permutation(cell.begin(), cell.end()));
    };
    rec(0);

    std::vector<int> new_of_old(n);
    for (int i = 0; i < n; ++i) new_of_old[best_order[i]] = i;
    return relabel(src, new_of_old);
}

bool is_canonical(const Diagram& g) { return canonical(g) == g; }

std::string key(const Diagram& g) {
    if (g.empty()) return "unit";
    std::ostringstream out;
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (v) out << ',';
        out << g.arity[v];
        if (!g.label[v].empty()) out << ':' << g.label[v];
    }
    out << '|';
    bool first = true;
    for (std::size_t i = 0; i < g.edges.size();) {
        std::size_t j = i;
        while (j < g.edges.size() && g.edges[j] == g.edges[i]) ++j;
        if (!first) out << ',';
        first = false;
        out << g.edges[i].first << '-' << g.edges[i].second;
        if (j - i > 1) out << 'x' << (j - i);
        i = j;
    }
    if (!g.legs.empty()) {
        out << "|legs";
        for (const auto& [v, l] : g.legs) out << ' ' << v << ':' << l;
    }
    return out.str();
}

bool is_connected(const Diagram& g) {
    if (g.vertex_count() <= 1) return true;
    const std::vector<int> comp = component_ids(g);
    return *std::max_element(comp.begin(), comp.end()) == 0;
}

std::vector<Diagram> connected_components(const Diagram& g) {
    const std::vector<int> comp = component_ids(g);
    const int count = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
    std::vector<Diagram> out;
    for (int c = 0; c < count; ++c) {
        std::vector<int> index(g.vertex_count(), -1);
        Diagram part;
        for (int v = 0; v < g.vertex_count(); ++v)
            if (comp[v] == c) {
                index[v] = part.vertex_count();
                part.arity.push_back(g.arity[v]);
                part.label.push_back(g.label[v]);
            }
        for (auto [u, v] : g.edges)
            if (comp[u] == c) part.edges.emplace_back(index[u], index[v]);
        for (const auto& [v, l] : g.legs)
            if (comp[v] == c) part.legs.emplace_back(index[v], l);
        out.push_back(canonical(part));
    }
    std::sort(out.begin(), out.end());
    return out;
}

Diagram disjoint_union(const Diagram& a, const Diagram& b) {
    Diagram out = a;
    out.label.resize(a.vertex_count());
    const int shift = a.vertex_count();
    out.arity.insert(out.arity.end(), b.arity.begin(), b.arity.end());
    std::vector<std::string> bl = b.label;
    bl.resize(b.vertex_count());
    out.label.insert(out.label.end(), bl.begin(), bl.end());
    for (auto [u, v] : b.edges) out.edges.emplace_back(u + shift, v + shift);
    for (const auto& [v, l] : b.legs) out.legs.emplace_back(v + shift, l);
    return canonical(out);
}

bool is_one_particle_irreducible(const Diagram& g) {
    const std::vector<int> before = component_ids(g);
    const int count = before.empty() ? 0 : *std::max_element(before.begin(), before.end()) + 1;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const auto [u, v] = g.edges[i];
        if (u == v || g.multiplicity(u, v) > 1) continue;
        Diagram cut = g;
        cut.edges.erase(cut.edges.begin() + static_cast<long>(i));
        const std::vector<int> after = component_ids(cut);
        if (*std::max_element(after.begin(), after.end()) + 1 > count) return false;
    }
    return true;
}

Diagram induced_subgraph(const Diagram& g, std::span<const int> vertices) {
    std::vector<int> index(g.vertex_count(), -1);
    Diagram sub;
    for (int v : vertices) {
        if (v < 0 || v >= g.vertex_count()) throw std::out_of_range("induced_subgraph: vertex out of range");
        if (index[v] >= 0) continue;
        index[v] = sub.vertex_count();
        sub.arity.push_back(0);
        sub.label.push_back(v < static_cast<int>(g.label.size()) ? g.label[v] : "");
    }
    for (auto [u, v] : g.edges)
        if (index[u] >= 0 && index[v] >= 0) {
            sub.edges.emplace_back(index[u], index[v]);
            ++sub.arity[index[u]];
            ++sub.arity[index[v]];
        }
    return canonical(sub);
}

Diagram amputate(const Diagram& g) {
    Diagram out = g;
    out.legs.clear();
    out.arity = g.degrees();
    return canonical(out);
}

Diagram contract_subgraphs(const Diagram& g, const std::vector<std::vector<int>>& parts) {
    const int n = g.vertex_count();
    std::vector<int> part_of(n, -1);
    for (std::size_t p = 0; p < parts.size(); ++p)
        for (int v : parts[p]) {
            if (v < 0 || v >= n) throw std::out_of_range("contract_subgraphs: vertex out of range");
            if (part_of[v] >= 0) throw std::invalid_argument("contract_subgraphs: parts overlap");
            part_of[v] = static_cast<int>(p);
        }
    Diagram out;
    std::vector<int> index(n, -1);
    for (std::size_t p = 0; p < parts.size(); ++p) {
        out.arity.push_back(0);
        out.label.emplace_back();
        for (int v : parts[p]) index[v] = static_cast<int>(p);
    }
    for (int v = 0; v < n; ++v)
        if (part_of[v] < 0) {
            index[v] = out.vertex_count();
            out.arity.push_back(g.arity[v]);
            out.label.push_back(g.label[v]);
        }
    for (std::size_t p = 0; p < parts.size(); ++p)
        for (int v : parts[p]) out.arity[p] += g.arity[v];
    for (auto [u, v] : g.edges) {
        if (part_of[u] >= 0 && part_of[u] == part_of[v]) {
            out.arity[part_of[u]] -= 2;
            continue;
        }
        out.edges.emplace_back(index[u], index[v]);
    }
    for (const auto& [v, l] : g.legs) out.legs.emplace_back(index[v], l);
    return canonical(out);
}

DiagramSum DiagramSum::single(const Diagram& g, const Rational& c) {
    DiagramSum s;
    s.add(g, c);
    return s;
}

void DiagramSum::add(const Diagram& g, const Rational& c) {
    if (c == 0) return;
    const Diagram k = canonical(g);
    auto [it, inserted] = terms_.emplace(k, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Rational DiagramSum::coefficient(const Diagram& g) const {
    auto it = terms_.find(canonical(g));
    return it == terms_.end() ? Rational(0) : it->second;
}

Rational DiagramSum::total() const {
    Rational s = 0;
    for (const auto& [g, c] : terms_) s += c;
    return s;
}

DiagramSum& DiagramSum::operator+=(const DiagramSum& o) {
    for (const auto& [g, c] : o.terms_) add(g, c);
    return *this;
}

DiagramSum& DiagramSum::operator-=(const DiagramSum& o) {
    for (const auto& [g, c] : o.terms_) add(g, -c);
    return *this;
}

DiagramSum& DiagramSum::operator*=(const Rational& s) {
    if (s == 0) terms_.clear();
    for (auto& [g, c] : terms_) c *= s;
    return *this;
}

DiagramSum operator*(const DiagramSum& a, const DiagramSum& b) {
    DiagramSum out;
    for (const auto& [x, c] : a.terms_)
        for (const auto& [y, e] : b.terms_) out.add(disjoint_union(x, y), c * e);
    return out;
}

DiagramSum DiagramSum::connected_part() const {
    DiagramSum out;
    for (const auto& [g, c] : terms_)
        if (!g.empty() && is_connected(g)) out.terms_.emplace(g, c);
    return out;
}

DiagramSum generate_diagrams(std::span<const int> arities, const std::vector<std::string>& labels, bool allow_loops) {
    const int n = static_cast<int>(arities.size());
    if (static_cast<int>(labels.size()) > n) throw std::invalid_argument("generate_diagrams: more labels than vertices");
    int legs = 0;
    for (int a : arities) {
        if (a < 0) throw std::invalid_argument("generate_diagrams: negative arity");
        legs += a;
    }
    if (legs % 2) throw std::invalid_argument("generate_diagrams: odd number of legs");

    std::vector<std::string> vertex_labels(labels);
    vertex_labels.resize(n);
    std::vector<std::pair<int, int>> pairs;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);

    Integer numerator = 1;
    for (int a : arities) numerator *= factorial(a);

    DiagramSum out;
    std::uint64_t visited = 0;
    const std::uint64_t limit = budget().matchings;
    std::vector<int> remaining(arities.begin(), arities.end());
    std::vector<int> loops(n, 0), mult(pairs.size(), 0);

    std::function<void(std::size_t)> fill_pairs = [&](std::size_t i) {
        if (i == pairs.size()) {
            if (std::any_of(remaining.begin(), remaining.end(), [](int r) { return r != 0; })) return;
            if (++visited > limit) throw BudgetExceeded("generate_diagrams: matching budget exceeded");
            Integer den = 1;
            Diagram g;
            g.arity.assign(arities.begin(), arities.end());
            g.label = vertex_labels;
            for (int v = 0; v < n; ++v) {
                den *= factorial(loops[v]) * (Integer(1) << loops[v]);
                for (int l = 0; l < loops[v]; ++l) g.edges.emplace_back(v, v);
            }
            for (std::size_t p = 0; p < pairs.size(); ++p) {
                den *= factorial(mult[p]);
                for (int k = 0; k < mult[p]; ++k) g.edges.push_back(pairs[p]);
            }
            std::sort(g.edges.begin(), g.edges.end());
            out.add(g, Rational(numerator, den));
            return;
        }
        const auto [u, v] = pairs[i];
        // u's last pair must use up all of u's remaining legs
        const bool last_for_u = (i + 1 == pairs.size()) || pairs[i + 1].first != u;
        const int hi = std::min(remaining[u], remaining[v]);
        for (int k = last_for_u ? remaining[u] : 0; k <= hi; ++k) {
            mult[i] = k;
            remaining[u] -= k;
            remaining[v] -= k;
            fill_pairs(i + 1);
            remaining[u] += k;
            remaining[v] += k;
        }
        mult[i] = 0;
    };
    std::function<void(int)> fill_loops = [&](int v) {
        if (v == n) {
            fill_pairs(0);
            return;
        }
        const int max_loops = allow_loops ? remaining[v] / 2 : 0;
        for (int l = 0; l <= max_loops; ++l) {
            loops[v] = l;
            remaining[v] -= 2 * l;
            fill_loops(v + 1);
            remaining[v] += 2 * l;
        }
        loops[v] = 0;
    };
    fill_loops(0);
    return out;
}

std::vector<Diagram> two_leg_diagrams(int n, bool one_particle_irreducible) {
    if (n < 2) throw std::invalid_argument("two_leg_diagrams: need at least two vertices");
    std::set<Diagram> found;
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            std::vector<int> internal(n, 4);
            --internal[a];
            --internal[b];
            for (const auto& [g, c] : generate_diagrams(internal).terms()) {
                (void)c;
                if (!is_connected(g)) continue;
                // reattach the legs on a vertex whose internal degree is short
                Diagram h = g;
                for (int v = 0; v < n; ++v) {
                    const int missing = 4 - h.arity[v];
                    for (int k = 0; k < missing; ++k) h.legs.emplace_back(v, "ext");
                    h.arity[v] = 4;
                }
                std::sort(h.legs.begin(), h.legs.end());
                if (one_particle_irreducible && !is_one_particle_irreducible(h)) continue;
                found.insert(canonical(h));
            }
        }
    return {found.begin(), found.end()};
}

namespace named {

Diagram propagator() { return canonical(Diagram::from_edges({1, 1}, {{0, 1}})); }
Diagram bubble() { return canonical(Diagram::from_edges({2, 2}, {{0, 1}, {0, 1}})); }
Diagram sunset() { return canonical(Diagram::from_edges({3, 3}, {{0, 1}, {0, 1}, {0, 1}})); }
Diagram melon() { return canonical(Diagram::from_edges({4, 4}, {{0, 1}, {0, 1}, {0, 1}, {0, 1}})); }
Diagram double_triangle() {
    return canonical(Diagram::from_edges({4, 4, 4}, {{0, 1}, {0, 1}, {1, 2}, {1, 2}, {0, 2}, {0, 2}}));
}
Diagram sunset_plus() {
    return canonical(Diagram::from_edges({4, 4, 2}, {{0, 1}, {0, 1}, {0, 1}, {0, 2}, {1, 2}}));
}
Diagram bubble_pair() { return canonical(Diagram::from_edges({4, 2, 2}, {{0, 1}, {0, 1}, {0, 2}, {0, 2}})); }
Diagram triangle() { return canonical(Diagram::from_edges({2, 2, 2}, {{0, 1}, {1, 2}, {0, 2}})); }

}  // namespace named

}  // namespace wickworks
