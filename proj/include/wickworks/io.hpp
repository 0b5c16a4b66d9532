#pragma once

// Machine-readable exports. JSON documents carry a versioned "schema" field;
// CSV and DOT are projections of the same data.

#include "wickworks/diagram.hpp"
#include "wickworks/phi4.hpp"
#include "wickworks/torusfield.hpp"

#include "json.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wickworks::io {

using json = nlohmann::ordered_json;

inline constexpr const char* diagrams_schema = "wickworks.diagrams/1";
inline constexpr const char* field_schema = "wickworks.field/1";
inline constexpr const char* phi4_schema = "wickworks.phi4/1";

// {"key", "canonical", "arities", "labels", "edges", "legs"}
json diagram_to_json(const Diagram& g);
Diagram diagram_from_json(const json& j);

json diagram_sum_to_json(const DiagramSum& s);
// Listing document for a generated table.
json diagram_listing(std::span<const int> arities, bool connected_only, const DiagramSum& s);
// One cluster per class, labelled with its coefficient.
std::string diagram_sum_to_dot(const DiagramSum& s);

enum class GridFormat { csv, binary };

// Header of a sampled grid; `data_file` names the companion file.
json field_header(const FieldSample& f, int grid, GridFormat format, const std::string& data_file);
// CSV: one row per grid point, coordinates then value. Binary: little-endian
// float64 values in grid order, first coordinate slowest.
void write_grid_csv(std::ostream& os, std::span<const double> values, int d, int grid);
void write_grid_binary(std::ostream& os, std::span<const double> values);

json series_to_json(const ExpansionSeries& s);
json counterterms_to_json(const CountertermSet& c);
json mc_to_json(const std::vector<MonteCarloResult>& mc, std::int64_t samples, std::uint64_t seed);
json phi4_report(const ExpansionSeries& series, const std::optional<CountertermSet>& counterterms,
                 const std::optional<json>& mc);
// Rows "N,n,coefficient" for each series of the ladder.
void write_ladder_csv(std::ostream& os, std::span<const ExpansionSeries> ladder);

}  // namespace wickworks::io
