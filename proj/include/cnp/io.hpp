#pragma once

// JSON forms of the artifact's objects. Every top-level document carries
// "schema_version".

#include <string>

#include "json.hpp"

#include "cnp/colorsat.hpp"
#include "cnp/graphs.hpp"
#include "cnp/packing.hpp"
#include "cnp/tilings.hpp"

namespace cnp {

inline constexpr int kSchemaVersion = 1;

nlohmann::json graph_to_json(const ColoringInstance& g);
/// Accepts the form written by graph_to_json. For e- and w-graphs the stored
/// edges are checked against the distance window; custom graphs need
/// "vertices" as [x, y], "edges", and "window": {"lo", "hi"}.
ColoringInstance graph_from_json(const nlohmann::json& j);

nlohmann::json tiling_to_json(const TilingSpec& spec);
TilingSpec tiling_from_json(const nlohmann::json& j);
nlohmann::json report_to_json(const TilingReport& report);

nlohmann::json sublattice_to_json(const SublatticeColoring& c);
nlohmann::json radial_to_json(const RadialColoring& c);

nlohmann::json packing_to_json(const PackingResult& p);
/// Width and min_dist are recomputed from the points.
PackingResult packing_from_json(const nlohmann::json& j);

nlohmann::json outcome_to_json(const SolveOutcome& outcome, bool with_model = true);

nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace cnp
