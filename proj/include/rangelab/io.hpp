#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "rangelab/cover.hpp"
#include "rangelab/lbgeom.hpp"
#include "rangelab/rrds.hpp"

namespace rangelab {

using json = nlohmann::json;

// Every reader throws Input on malformed data, naming the offending field.

/// {dim, terms: [[exponents, coefficient], ...]}
json to_json(const MultiPoly& p);
MultiPoly poly_from_json(const json& j);

/// {factors: [{poly, sign}], slab: {poly, a, b}}; sign is "<=" or ">=".
json to_json(const QueryRange& range);
QueryRange query_from_json(const json& j);

json to_json(const CostStats& stats);
/// {ids, stats}
json to_json(const QueryResult& result);
json to_json(const SpaceReport& report);
json to_json(const StructureConfig& config);
/// {q, levels, counts_per_level, total}
json catalog_summary(const RotatedCatalog& catalog);
json to_json(const LBParams& params);

/// "x,y" rows with a header line; doubles in shortest round-trip form.
void write_points_csv(std::ostream& out, const std::vector<Vec2>& points);
/// Skips the "x,y" header, blank lines and lines starting with '#'.
std::vector<Vec2> read_points_csv(std::istream& in);

std::vector<Vec2> read_points_file(const std::string& path);
json read_json_file(const std::string& path);

}  // namespace rangelab
