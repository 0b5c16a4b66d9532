#include "wickworks/io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace wickworks::io {

json diagram_to_json(const Diagram& g) {
    json edges = json::array(), legs = json::array();
    for (const auto& [u, v] : g.edges) edges.push_back({u, v});
    for (const auto& [v, l] : g.legs) legs.push_back({{"vertex", v}, {"label", l}});
    const bool canon = is_canonical(g);
    return {{"key", key(canon ? g : canonical(g))},
            {"canonical", canon},
            {"arities", g.arity},
            {"labels", g.label},
            {"edges", edges},
            {"legs", legs}};
}

Diagram diagram_from_json(const json& j) {
    Diagram g;
    g.arity = j.at("arities").get<std::vector<int>>();
    g.label = j.contains("labels") ? j.at("labels").get<std::vector<std::string>>()
                                   : std::vector<std::string>(g.arity.size());
    for (const auto& e : j.at("edges")) g.edges.emplace_back(std::min(e[0].get<int>(), e[1].get<int>()),
                                                             std::max(e[0].get<int>(), e[1].get<int>()));
    std::sort(g.edges.begin(), g.edges.end());
    if (j.contains("legs"))
        for (const auto& l : j.at("legs")) g.legs.emplace_back(l.at("vertex").get<int>(), l.at("label").get<std::string>());
    std::sort(g.legs.begin(), g.legs.end());
    if (!g.valid()) throw std::invalid_argument("diagram_from_json: arities do not match edges and legs");
    return g;
}

json diagram_sum_to_json(const DiagramSum& s) {
    json out = json::array();
    for (const auto& [g, c] : s.terms()) {
        json entry = diagram_to_json(g);
        entry["coefficient"] = to_string(c);
        entry["connected"] = is_connected(g);
        out.push_back(std::move(entry));
    }
    return out;
}

json diagram_listing(std::span<const int> arities, bool connected_only, const DiagramSum& s) {
    return {{"schema", diagrams_schema},
            {"arities", std::vector<int>(arities.begin(), arities.end())},
            {"connected_only", connected_only},
            {"classes", s.size()},
            {"total", to_string(s.total())},
            {"diagrams", diagram_sum_to_json(s)}};
}

std::string diagram_sum_to_dot(const DiagramSum& s) {
    std::ostringstream os;
    os << "graph diagrams {\n  node [shape=circle, fontsize=10];\n";
    int cls = 0;
    for (const auto& [g, c] : s.terms()) {
        const std::string p = "c" + std::to_string(cls) + "_";
        os << "  subgraph cluster_" << cls << " {\n";
        os << "    label=\"" << to_string(c) << "  " << key(g) << "\";\n";
        for (int v = 0; v < g.vertex_count(); ++v) {
            const std::string& l = g.label[static_cast<std::size_t>(v)];
            os << "    " << p << v << " [label=\"" << (l.empty() ? std::to_string(g.arity[static_cast<std::size_t>(v)]) : l)
               << "\"];\n";
        }
        for (const auto& [u, v] : g.edges) os << "    " << p << u << " -- " << p << v << ";\n";
        int leg = 0;
        for (const auto& [v, l] : g.legs) {
            os << "    " << p << "leg" << leg << " [shape=plaintext, label=\"" << l << "\"];\n";
            os << "    " << p << v << " -- " << p << "leg" << leg << " [style=dashed];\n";
            ++leg;
        }
        os << "  }\n";
        ++cls;
    }
    os << "}\n";
    return os.str();
}

json field_header(const FieldSample& f, int grid, GridFormat format, const std::string& data_file) {
    json j = {{"schema", field_schema},
              {"d", f.lattice.d},
              {"N", f.lattice.N},
              {"profile", f.profile.name()},
              {"seed", f.seed},
              {"grid", grid}};
    std::int64_t points = 1;
    for (int i = 0; i < f.lattice.d; ++i) points *= grid;
    j["points"] = points;
    j["format"] = format == GridFormat::csv ? "csv" : "float64-le";
    j["order"] = "first coordinate slowest, point j / grid";
    j["data_file"] = data_file;
    return j;
}

void write_grid_csv(std::ostream& os, std::span<const double> values, int d, int grid) {
    static const char* axis[] = {"x", "y", "z"};
    for (int i = 0; i < d; ++i) os << axis[i] << ',';
    os << "value\n";
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    os << std::setprecision(17);
    for (double v : values) {
        for (int i = 0; i < d; ++i) os << static_cast<double>(idx[static_cast<std::size_t>(i)]) / grid << ',';
        os << v << '\n';
        for (int i = d - 1; i >= 0; --i) {
            if (++idx[static_cast<std::size_t>(i)] < grid) break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
    }
}

void write_grid_binary(std::ostream& os, std::span<const double> values) {
    for (double v : values) {
        unsigned char b[8];
        std::memcpy(b, &v, 8);
        if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + 8);
        os.write(reinterpret_cast<const char*>(b), 8);
    }
}

json series_to_json(const ExpansionSeries& s) {
    json coeffs = json::array();
    for (const SeriesTerm& t : s.terms) {
        json c = {{"n", t.n}, {"factor", to_string(t.factor)}, {"value", t.value}};
        json diagrams = json::array();
        for (const auto& [g, count] : t.diagrams.terms()) {
            diagrams.push_back({{"key", key(g)},
                                {"count", to_string(count)},
                                {"coefficient", to_string(t.factor * count)},
                                {"valuation", valuate(g, s.d, s.N)}});
        }
        c["diagrams"] = std::move(diagrams);
        coeffs.push_back(std::move(c));
    }
    return {{"d", s.d}, {"N", s.N}, {"order", s.order}, {"variant", to_string(s.variant)}, {"coefficients", coeffs}};
}

json counterterms_to_json(const CountertermSet& c) {
    return {{"alpha", c.alpha},
            {"beta", {{"alpha2", to_string(c.beta2)}, {"sunset", c.sunset}, {"value", c.beta()}}},
            {"gamma",
             {{"alpha2", to_string(c.gamma2)},
              {"melon", c.melon},
              {"alpha3", to_string(c.gamma3)},
              {"double_triangle", c.double_triangle},
              {"value", c.gamma()}}}};
}

json mc_to_json(const std::vector<MonteCarloResult>& mc, std::int64_t samples, std::uint64_t seed) {
    json rows = json::array();
    for (const auto& r : mc) rows.push_back({{"alpha", r.alpha}, {"estimate", r.estimate}, {"stderr", r.stderr_}});
    return {{"samples", samples}, {"seed", seed}, {"results", rows}};
}

json phi4_report(const ExpansionSeries& series, const std::optional<CountertermSet>& counterterms,
                 const std::optional<json>& mc) {
    json j = {{"schema", phi4_schema}};
    const json body = series_to_json(series);
    for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
    if (counterterms) j["counterterms"] = counterterms_to_json(*counterterms);
    if (mc) j["mc"] = *mc;
    return j;
}

void write_ladder_csv(std::ostream& os, std::span<const ExpansionSeries> ladder) {
    os << "d,N,n,factor,coefficient\n" << std::setprecision(17);
    for (const ExpansionSeries& s : ladder)
        for (const SeriesTerm& t : s.terms) os << s.d << ',' << s.N << ',' << t.n << ',' << to_string(t.factor) << ',' << t.value << '\n';
}

}  // namespace wickworks::io
