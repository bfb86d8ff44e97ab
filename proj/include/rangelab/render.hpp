#pragma once

#include <string>

#include "rangelab/rrds.hpp"

namespace rangelab {

struct RenderOptions {
    int pixels = 800;  // side of the unit square
    int margin = 20;
};

struct RenderSummary {
    std::size_t grid_lines = 0;
    std::size_t curves = 0;          // traced boundary polylines
    std::size_t covered_subcurves = 0;
    std::size_t slab_polygons = 0;
    std::size_t regions = 0;         // inside chunks and faces plus exact cells
};

/// Static SVG of the grid and, for a query, the traced boundary, the scanned
/// slabs (filled by width level) and the remaining regions. Regions are shaded
/// only when classified inside, so an empty query renders as the grid alone.
/// Output depends only on the structure, the range and the options.
std::string render_svg(const RangeStructure& structure, const QueryRange* range,
                       RenderSummary* summary = nullptr, const RenderOptions& options = {});

}  // namespace rangelab
