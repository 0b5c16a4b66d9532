#include "wickworks/feynman.hpp"

#include "wickworks/budget.hpp"
#include "wickworks/torusfield.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <mutex>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace wickworks {

ValuationContext ValuationContext::make(double d, int N, int threads) {
    if (N < 0) throw std::invalid_argument("valuation: N must be nonnegative");
    ValuationContext ctx;
    ctx.d = d;
    ctx.N = N;
    ctx.threads = threads;
    if (d == 1 || d == 2 || d == 3) {
        ctx.lattice_dim = static_cast<int>(d);
        ctx.exponent = 1;
    } else if (d > 3 && d < 4) {
        ctx.lattice_dim = 3;
        ctx.exponent = (5 - d) / 2;
    } else {
        throw std::invalid_argument("valuation: d must be 1, 2, 3 or in (3, 4)");
    }
    return ctx;
}

ModeArray ValuationContext::edge_weight() const { return weight_array(lattice_dim, N, exponent); }

namespace {

struct WorkEdge {
    int u, v;
    ModeArray w;
};

// A multigraph whose edges carry momentum profiles. Terminals are never
// eliminated.
struct WorkGraph {
    std::vector<bool> alive;
    std::vector<bool> terminal;
    std::vector<WorkEdge> edges;
    double factor = 1;
};

WorkGraph work_graph(const Diagram& g, const ValuationContext& ctx, const std::vector<bool>& terminal) {
    WorkGraph wg;
    wg.alive.assign(g.vertex_count(), true);
    wg.terminal = terminal;
    const ModeArray w = ctx.edge_weight();
    for (auto [u, v] : g.edges) wg.edges.push_back({u, v, w});
    return wg;
}

// Merges parallel edges by convolution and removes self-loops (each loop
// momentum is free). Returns whether anything changed.
bool merge_parallel(WorkGraph& wg, const ValuationContext& ctx) {
    bool changed = false;
    std::map<std::pair<int, int>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < wg.edges.size(); ++i) {
        auto& e = wg.edges[i];
        groups[{std::min(e.u, e.v), std::max(e.u, e.v)}].push_back(i);
    }
    std::vector<WorkEdge> out;
    for (auto& [uv, idx] : groups) {
        if (uv.first == uv.second) {
            for (std::size_t i : idx) wg.factor *= total(wg.edges[i].w);
            changed = true;
            continue;
        }
        ModeArray acc = std::move(wg.edges[idx[0]].w);
        for (std::size_t j = 1; j < idx.size(); ++j) {
            acc = convolve(acc, wg.edges[idx[j]].w, ConvolutionMethod::automatic, ctx.threads);
            changed = true;
        }
        out.push_back({uv.first, uv.second, std::move(acc)});
    }
    wg.edges = std::move(out);
    return changed;
}

// Pendant and series eliminations of one non-terminal vertex.
bool eliminate_one(WorkGraph& wg) {
    for (int v = 0; v < static_cast<int>(wg.alive.size()); ++v) {
        if (!wg.alive[v] || wg.terminal[v]) continue;
        std::vector<std::size_t> inc;
        for (std::size_t i = 0; i < wg.edges.size(); ++i)
            if (wg.edges[i].u == v || wg.edges[i].v == v) inc.push_back(i);
        if (inc.empty()) {
            wg.alive[v] = false;
            return true;
        }
        if (inc.size() == 1) {
            wg.factor *= wg.edges[inc[0]].w.at({0, 0, 0});
            wg.edges.erase(wg.edges.begin() + static_cast<long>(inc[0]));
            wg.alive[v] = false;
            return true;
        }
        if (inc.size() == 2) {
            const WorkEdge& e1 = wg.edges[inc[0]];
            const WorkEdge& e2 = wg.edges[inc[1]];
            const int a = e1.u == v ? e1.v : e1.u;
            const int b = e2.u == v ? e2.v : e2.u;
            WorkEdge joined{std::min(a, b), std::max(a, b), multiply(e1.w, e2.w)};
            wg.edges.erase(wg.edges.begin() + static_cast<long>(inc[1]));
            wg.edges.erase(wg.edges.begin() + static_cast<long>(inc[0]));
            wg.edges.push_back(std::move(joined));
            wg.alive[v] = false;
            return true;
        }
    }
    return false;
}

void reduce(WorkGraph& wg, const ValuationContext& ctx) {
    merge_parallel(wg, ctx);
    while (eliminate_one(wg)) merge_parallel(wg, ctx);
}

struct SupportPoint {
    Mode k;
    double w;
};

// Sum over independent loop momenta of a connected simple graph whose edges
// carry profiles. Co-tree edges get the smallest supports.
double nested_sum(int vertex_count, std::vector<WorkEdge> edges, const ValuationContext& ctx) {
    std::stable_sort(edges.begin(), edges.end(),
                     [](const WorkEdge& a, const WorkEdge& b) { return a.w.radius() > b.w.radius(); });
    std::vector<int> parent(vertex_count);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    std::vector<const WorkEdge*> tree, cotree;
    for (const WorkEdge& e : edges) {
        const int a = find(e.u), b = find(e.v);
        if (a != b) {
            parent[a] = b;
            tree.push_back(&e);
        } else {
            cotree.push_back(&e);
        }
    }
    const int loops = static_cast<int>(cotree.size());
    if (loops > budget().max_loops)
        throw BudgetExceeded("valuate: " + std::to_string(loops) + " independent loop momenta exceed the budget");

    std::vector<std::vector<SupportPoint>> support(loops);
    double cost = 1;
    for (int c = 0; c < loops; ++c) {
        const ModeArray& w = cotree[c]->w;
        const auto vals = w.values();
        for (std::size_t i = 0; i < vals.size(); ++i)
            if (vals[i] != 0) support[c].push_back({w.mode_at(i), vals[i]});
        cost *= static_cast<double>(support[c].size());
    }
    if (cost > budget().nested_terms)
        throw BudgetExceeded("valuate: nested momentum sum of " + std::to_string(cost) + " terms exceeds the budget");

    // coef[t][c]: multiple of the c-th loop momentum carried by tree edge t
    // in its u -> v orientation. Loop c runs u_c -> v_c and returns through
    // the tree.
    const int T = static_cast<int>(tree.size());
    std::vector<std::vector<int>> coef(T, std::vector<int>(loops, 0));
    std::vector<std::vector<std::pair<int, int>>> adj(vertex_count);  // (neighbour, tree index)
    for (int t = 0; t < T; ++t) {
        adj[tree[t]->u].emplace_back(tree[t]->v, t);
        adj[tree[t]->v].emplace_back(tree[t]->u, t);
    }
    for (int c = 0; c < loops; ++c) {
        const int from = cotree[c]->v, to = cotree[c]->u;
        std::vector<std::pair<int, int>> via(vertex_count, {-1, -1});
        std::vector<int> queue{from};
        via[from] = {from, -1};
        for (std::size_t q = 0; q < queue.size(); ++q)
            for (auto [w, t] : adj[queue[q]])
                if (via[w].first < 0) {
                    via[w] = {queue[q], t};
                    queue.push_back(w);
                }
        for (int x = to; x != from; x = via[x].first) {
            const int prev = via[x].first, t = via[x].second;
            coef[t][c] += tree[t]->u == prev ? 1 : -1;
        }
    }
    // Tree edges are multiplied in at the level where their momentum is
    // known. Their profiles are zero-padded so that every reachable momentum
    // is a valid flat index.
    std::vector<std::vector<int>> settled(loops + 1);
    std::vector<int> reach(T, 0);
    for (int t = 0; t < T; ++t) {
        int last = -1;
        for (int c = 0; c < loops; ++c)
            if (coef[t][c] != 0) {
                last = c;
                reach[t] += cotree[c]->w.radius();
            }
        settled[last + 1].push_back(t);
    }
    double base = 1;
    for (int t : settled[0]) base *= tree[t]->w.at({0, 0, 0});
    if (loops == 0 || base == 0) return base;

    const int dim = ctx.lattice_dim;
    std::vector<std::vector<double>> padded(T);
    std::vector<long> centre(T);
    std::vector<std::array<long, 3>> stride(T);
    for (int t = 0; t < T; ++t) {
        const ModeArray& w = tree[t]->w;
        ModeArray p(dim, std::max(w.radius(), reach[t]));
        const auto vals = w.values();
        for (std::size_t i = 0; i < vals.size(); ++i)
            if (vals[i] != 0) p[w.mode_at(i)] = vals[i];
        long st = 1;
        stride[t] = {0, 0, 0};
        for (int j = dim - 1; j >= 0; --j) {
            stride[t][j] = st;
            st *= p.side();
        }
        centre[t] = static_cast<long>(p.index({0, 0, 0}));
        padded[t].assign(p.values().begin(), p.values().end());
    }
    // offsets[c][t][i]: flat shift of tree edge t for the i-th momentum of loop c
    std::vector<std::vector<std::vector<long>>> offsets(loops, std::vector<std::vector<long>>(T));
    for (int c = 0; c < loops; ++c)
        for (int t = 0; t < T; ++t) {
            if (coef[t][c] == 0) continue;
            for (const SupportPoint& p : support[c]) {
                long o = 0;
                for (int j = 0; j < dim; ++j) o += static_cast<long>(p.k[j]) * stride[t][j];
                offsets[c][t].push_back(coef[t][c] * o);
            }
        }
    std::vector<std::vector<int>> moving(loops);  // tree edges whose momentum changes at loop c
    for (int c = 0; c < loops; ++c)
        for (int t = 0; t < T; ++t)
            if (coef[t][c] != 0) moving[c].push_back(t);

    auto inner = [&](std::size_t outer_index) {
        std::vector<std::vector<long>> at(loops + 1, std::vector<long>(centre));
        auto level = [&](auto& self, int c, double weight) -> double {
            double s = 0;
            const std::vector<long>& prev = at[c];
            std::vector<long>& cur = at[c + 1];
            cur = prev;
            const auto& pts = support[c];
            for (std::size_t i = 0; i < pts.size(); ++i) {
                for (int t : moving[c]) cur[t] = prev[t] + offsets[c][t][i];
                double w = weight * pts[i].w;
                for (int t : settled[c + 1]) w *= padded[t][cur[t]];
                if (w == 0) continue;
                s += c + 1 == loops ? w : self(self, c + 1, w);
            }
            return s;
        };
        std::vector<long>& cur = at[1];
        for (int t : moving[0]) cur[t] = centre[t] + offsets[0][t][outer_index];
        double w = base * support[0][outer_index].w;
        for (int t : settled[1]) w *= padded[t][cur[t]];
        if (w == 0) return 0.0;
        return loops == 1 ? w : level(level, 1, w);
    };
    std::vector<double> partial(support[0].size());
    parallel_for(partial.size(), ctx.threads, [&](std::size_t i) { partial[i] = inner(i); });
    CompensatedSum s;
    for (double x : partial) s.add(x);
    return s.value();
}

// Splits the alive part into connected pieces and sums each.
double finish_vacuum(WorkGraph& wg, const ValuationContext& ctx) {
    double value = wg.factor;
    const int n = static_cast<int>(wg.alive.size());
    std::vector<int> comp(n, -1);
    int count = 0;
    for (int s = 0; s < n; ++s) {
        if (!wg.alive[s] || comp[s] >= 0) continue;
        std::vector<int> stack{s};
        comp[s] = count;
        while (!stack.empty()) {
            const int x = stack.back();
            stack.pop_back();
            for (const WorkEdge& e : wg.edges) {
                const int y = e.u == x ? e.v : e.v == x ? e.u : -1;
                if (y >= 0 && comp[y] < 0) {
                    comp[y] = count;
                    stack.push_back(y);
                }
            }
        }
        ++count;
    }
    for (int c = 0; c < count; ++c) {
        std::vector<int> index(n, -1);
        int m = 0;
        for (int v = 0; v < n; ++v)
            if (comp[v] == c) index[v] = m++;
        std::vector<WorkEdge> edges;
        for (const WorkEdge& e : wg.edges)
            if (comp[e.u] == c) edges.push_back({index[e.u], index[e.v], e.w});
        if (edges.empty()) continue;
        value *= nested_sum(m, std::move(edges), ctx);
    }
    return value;
}

std::mutex cache_mutex;
std::map<std::string, double>& cache() {
    static std::map<std::string, double> c;
    return c;
}

std::string cache_key(const Diagram& canonical_component, double d, int N) {
    std::ostringstream out;
    out.precision(17);
    out << key(canonical_component) << '@' << d << '/' << N;
    return out.str();
}

void require_vacuum(const Diagram& g) {
    if (!g.legs.empty()) throw std::invalid_argument("valuate: diagram has free legs");
}

}  // namespace

double valuate_uncached(const Diagram& g, const ValuationContext& ctx) {
    require_vacuum(g);
    WorkGraph wg = work_graph(g, ctx, std::vector<bool>(g.vertex_count(), false));
    reduce(wg, ctx);
    return finish_vacuum(wg, ctx);
}

double valuate(const Diagram& g, double d, int N) {
    require_vacuum(g);
    const ValuationContext ctx = ValuationContext::make(d, N);
    double value = 1;
    for (const Diagram& c : connected_components(g)) {
        const std::string k = cache_key(c, d, N);
        {
            std::lock_guard lock(cache_mutex);
            auto it = cache().find(k);
            if (it != cache().end()) {
                value *= it->second;
                continue;
            }
        }
        const double v = valuate_uncached(c, ctx);
        {
            std::lock_guard lock(cache_mutex);
            cache().emplace(k, v);
        }
        value *= v;
    }
    return value;
}

double valuate(const DiagramSum& s, double d, int N) {
    CompensatedSum sum;
    for (const auto& [g, c] : s.terms()) sum.add(to_double(c) * valuate(g, d, N));
    return sum.value();
}

void clear_valuation_cache() {
    std::lock_guard lock(cache_mutex);
    cache().clear();
}

ModeArray two_point_profile(const Diagram& g, double d, int N) {
    require_vacuum(g);
    const ValuationContext ctx = ValuationContext::make(d, N);
    int x = -1, y = -1;
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (g.label[v] == "x") x = v;
        if (g.label[v] == "y") y = v;
    }
    if (x < 0 || y < 0) throw std::invalid_argument("two_point_profile: vertices labelled x and y are required");
    if (g.arity[x] != 1 || g.arity[y] != 1) throw std::invalid_argument("two_point_profile: x and y must be 1-valent");

    std::vector<bool> terminal(g.vertex_count(), false);
    terminal[x] = terminal[y] = true;
    WorkGraph wg = work_graph(g, ctx, terminal);
    reduce(wg, ctx);
    auto touches = [&](const WorkEdge& e) { return e.u == x || e.v == x || e.u == y || e.v == y; };
    const WorkEdge* through = nullptr;
    WorkGraph rest;
    rest.alive = wg.alive;
    rest.alive[x] = rest.alive[y] = false;
    rest.terminal.assign(wg.alive.size(), false);
    for (const WorkEdge& e : wg.edges) {
        if (!touches(e)) {
            rest.edges.push_back(e);
            continue;
        }
        if (through || std::minmax(e.u, e.v) != std::minmax(x, y))
            throw std::invalid_argument("two_point_profile: diagram does not reduce to a single x-y propagator");
        through = &e;
    }
    if (!through) throw std::invalid_argument("two_point_profile: x and y are not connected");
    ModeArray W = through->w;
    const double scale = wg.factor * finish_vacuum(rest, ctx);
    for (double& v : W.values()) v *= scale;
    return W;
}

double two_point_value(const Diagram& g, double d, int N, std::span<const double> x, std::span<const double> y) {
    const ModeArray W = two_point_profile(g, d, N);
    if (static_cast<int>(x.size()) != W.dim() || static_cast<int>(y.size()) != W.dim())
        throw std::invalid_argument("two_point_value: point dimension mismatch");
    CompensatedSum s;
    const auto vals = W.values();
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (vals[i] == 0) continue;
        const Mode k = W.mode_at(i);
        double phase = 0;
        for (int j = 0; j < W.dim(); ++j) phase += k[j] * (x[j] - y[j]);
        s.add(vals[i] * std::cos(2 * std::numbers::pi * phase));
    }
    return s.value();
}

McEstimate valuate_position_mc(const Diagram& g, int d, int N, std::int64_t samples, std::uint64_t seed) {
    require_vacuum(g);
    if (d < 1 || d > 3) throw std::invalid_argument("valuate_position_mc: d must be 1, 2 or 3");
    if (samples <= 1) throw std::invalid_argument("valuate_position_mc: need at least two samples");
    const ModeLattice lat = ModeLattice::build(d, N);
    const int V = g.vertex_count();
    // One vertex per component sits at the origin (translation invariance).
    std::vector<bool> pinned(V, false);
    {
        std::vector<bool> seen(V, false);
        for (int s = 0; s < V; ++s) {
            if (seen[s]) continue;
            pinned[s] = true;
            std::vector<int> stack{s};
            seen[s] = true;
            while (!stack.empty()) {
                const int a = stack.back();
                stack.pop_back();
                for (auto [u, v] : g.edges) {
                    const int b = u == a ? v : v == a ? u : -1;
                    if (b >= 0 && !seen[b]) {
                        seen[b] = true;
                        stack.push_back(b);
                    }
                }
            }
        }
    }
    auto green = [&](const double* dx) {
        double s = 0;
        for (std::size_t i = 0; i < lat.modes.size(); ++i) {
            double ph = 0;
            for (int j = 0; j < d; ++j) ph += lat.modes[i][j] * dx[j];
            s += std::cos(2 * std::numbers::pi * ph) / lat.lambdas[i];
        }
        return s;
    };
    constexpr std::int64_t batch = 4096;
    const std::size_t batches = static_cast<std::size_t>((samples + batch - 1) / batch);
    std::vector<std::pair<double, double>> moments(batches);
    parallel_for(batches, 0, [&](std::size_t b) {
        std::mt19937_64 rng(stream_seed(seed, b));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const std::int64_t count = std::min<std::int64_t>(batch, samples - static_cast<std::int64_t>(b) * batch);
        std::vector<double> pos(static_cast<std::size_t>(V) * d, 0.0), dx(d);
        double s1 = 0, s2 = 0;
        for (std::int64_t i = 0; i < count; ++i) {
            for (int v = 0; v < V; ++v)
                for (int j = 0; j < d; ++j) pos[v * d + j] = pinned[v] ? 0.0 : unit(rng);
            double f = 1;
            for (auto [u, v] : g.edges) {
                for (int j = 0; j < d; ++j) dx[j] = pos[u * d + j] - pos[v * d + j];
                f *= green(dx.data());
            }
            s1 += f;
            s2 += f * f;
        }
        moments[b] = {s1, s2};
    });
    double s1 = 0, s2 = 0;
    for (auto [a, b] : moments) {
        s1 += a;
        s2 += b;
    }
    const double n = static_cast<double>(samples);
    const double mean = s1 / n;
    const double var = std::max(0.0, (s2 / n - mean * mean) * n / (n - 1));
    return {mean, std::sqrt(var / n)};
}

AffineDegree degree_form(const Diagram& g) {
    return {2 * g.edge_count(), g.vertex_count() - 1 - g.edge_count()};
}

double degree(const Diagram& g, double d) { return degree_form(g).at(d); }

std::vector<Subgraph> divergent_subgraphs(const Diagram& g, double d) {
    const int V = g.vertex_count();
    if (V > 20) throw BudgetExceeded("divergent_subgraphs: too many vertices");
    std::vector<Subgraph> out;
    const std::uint32_t full = (V == 0) ? 0 : ((1u << V) - 1);
    for (std::uint32_t mask = 1; mask < full; ++mask) {
        if (std::popcount(mask) < 2) continue;
        std::vector<int> vs;
        for (int v = 0; v < V; ++v)
            if (mask >> v & 1u) vs.push_back(v);
        Diagram sub = induced_subgraph(g, vs);
        if (!is_connected(sub) || degree(sub, d) > 1e-12) continue;
        out.push_back({std::move(vs), std::move(sub)});
    }
    return out;
}

bool weinberg_check(const Diagram& g, double d) { return divergent_subgraphs(g, d).empty() && degree(g, d) > 0; }

std::vector<std::vector<Subgraph>> divergent_forests(const Diagram& g, double d) {
    const std::vector<Subgraph> subs = divergent_subgraphs(g, d);
    std::vector<std::uint32_t> masks;
    for (const Subgraph& s : subs) {
        std::uint32_t m = 0;
        for (int v : s.vertices) m |= 1u << v;
        masks.push_back(m);
    }
    std::vector<std::vector<Subgraph>> out;
    std::vector<Subgraph> current;
    std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t from, std::uint32_t used) {
        for (std::size_t i = from; i < subs.size(); ++i) {
            if (masks[i] & used) continue;
            current.push_back(subs[i]);
            out.push_back(current);
            rec(i + 1, used | masks[i]);
            current.pop_back();
        }
    };
    rec(0, 0);
    return out;
}

void TensorSum::add(const Diagram& left, const Diagram& right, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(std::make_pair(canonical(left), canonical(right)), c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

namespace {

Diagram forest_product(const std::vector<Subgraph>& forest) {
    Diagram out;
    for (const Subgraph& s : forest) out = disjoint_union(out, s.graph);
    return out;
}

Diagram forest_quotient(const Diagram& g, const std::vector<Subgraph>& forest) {
    std::vector<std::vector<int>> parts;
    for (const Subgraph& s : forest) parts.push_back(s.vertices);
    return contract_subgraphs(g, parts);
}

void require_connected(const Diagram& g, const char* what) {
    if (g.empty() || !is_connected(g)) throw std::invalid_argument(std::string(what) + ": diagram must be connected");
}

// Coproduct of a monomial (possibly empty or disconnected).
TensorSum monomial_coproduct(const Diagram& m, double d) {
    TensorSum acc;
    acc.add(Diagram{}, Diagram{}, 1);
    for (const Diagram& c : connected_components(m)) {
        const TensorSum dc = ck_coproduct(c, d);
        TensorSum next;
        for (const auto& [ab, x] : acc.terms())
            for (const auto& [cd, y] : dc.terms())
                next.add(disjoint_union(ab.first, cd.first), disjoint_union(ab.second, cd.second), x * y);
        acc = std::move(next);
    }
    return acc;
}

void add_triple(TripleSum& s, const Diagram& a, const Diagram& b, const Diagram& c, const Rational& x) {
    if (x == 0) return;
    auto [it, inserted] = s.emplace(std::array<Diagram, 3>{a, b, c}, x);
    if (!inserted) {
        it->second += x;
        if (it->second == 0) s.erase(it);
    }
}

std::string antipode_key(const Diagram& g, double d) {
    std::ostringstream out;
    out.precision(17);
    out << key(g) << '@' << d;
    return out.str();
}

std::mutex antipode_mutex;

}  // namespace

TensorSum ck_coproduct(const Diagram& g, double d) {
    require_connected(g, "ck_coproduct");
    TensorSum out;
    out.add(g, Diagram{}, 1);
    out.add(Diagram{}, g, 1);
    for (const auto& forest : divergent_forests(g, d)) out.add(forest_product(forest), forest_quotient(g, forest), 1);
    return out;
}

TripleSum iterate_coproduct_left(const Diagram& g, double d) {
    TripleSum out;
    for (const auto& [ab, x] : ck_coproduct(g, d).terms())
        for (const auto& [cd, y] : monomial_coproduct(ab.first, d).terms())
            add_triple(out, cd.first, cd.second, ab.second, x * y);
    return out;
}

TripleSum iterate_coproduct_right(const Diagram& g, double d) {
    TripleSum out;
    for (const auto& [ab, x] : ck_coproduct(g, d).terms())
        for (const auto& [cd, y] : monomial_coproduct(ab.second, d).terms())
            add_triple(out, ab.first, cd.first, cd.second, x * y);
    return out;
}

DiagramSum antipode(const Diagram& g, double d) {
    if (g.empty()) return DiagramSum::unit();
    if (!is_connected(g)) {
        DiagramSum out = DiagramSum::unit();
        for (const Diagram& c : connected_components(g)) out = out * antipode(c, d);
        return out;
    }
    static std::map<std::string, DiagramSum> memo;
    const Diagram cg = canonical(g);
    const std::string k = antipode_key(cg, d);
    {
        std::lock_guard lock(antipode_mutex);
        auto it = memo.find(k);
        if (it != memo.end()) return it->second;
    }
    DiagramSum out = DiagramSum::single(cg, -1);
    const auto forests = divergent_forests(cg, d);
    if (forests.size() > 4096) throw BudgetExceeded("antipode: too many divergent forests");
    for (const auto& forest : forests) {
        DiagramSum a = DiagramSum::unit();
        for (const Subgraph& s : forest) a = a * antipode(s.graph, d);
        out -= a * DiagramSum::single(forest_quotient(cg, forest));
    }
    std::lock_guard lock(antipode_mutex);
    memo.emplace(k, out);
    return out;
}

DiagramSum antipode(const DiagramSum& s, double d) {
    DiagramSum out;
    for (const auto& [g, c] : s.terms()) out += antipode(g, d) * c;
    return out;
}

DiagramSum twisted_antipode(const Diagram& g, double d) {
    if (g.empty()) return DiagramSum::unit();
    if (!is_connected(g)) {
        DiagramSum out = DiagramSum::unit();
        for (const Diagram& c : connected_components(g)) out = out * twisted_antipode(c, d);
        return out;
    }
    return degree(g, d) <= 1e-12 ? antipode(g, d) : DiagramSum{};
}

DiagramSum bphz_expansion(const Diagram& g, double d) {
    DiagramSum out;
    for (const auto& [ab, c] : ck_coproduct(g, d).terms())
        out += twisted_antipode(ab.first, d) * DiagramSum::single(ab.second, c);
    return out;
}

double bphz_valuate(const Diagram& g, double d, int N, BphzRoute route) {
    require_connected(g, "bphz_valuate");
    if (route == BphzRoute::direct) return valuate(bphz_expansion(g, d), d, N);
    if (degree(g, d) <= 1e-12) return 0.0;
    return -valuate(antipode(g, d), d, N);
}

}  // namespace wickworks
