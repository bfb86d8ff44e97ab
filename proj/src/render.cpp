#include "rangelab/render.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace rangelab {

namespace {

constexpr const char* kLevelColors[] = {"#d62728", "#ff7f0e", "#bcbd22", "#2ca02c",
                                        "#17becf", "#1f77b4", "#9467bd"};
constexpr int kColorCount = sizeof kLevelColors / sizeof kLevelColors[0];

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

/// Maps the unit square to pixels with y pointing up.
class Canvas {
public:
    explicit Canvas(const RenderOptions& o) : side_(o.pixels), margin_(o.margin) {}

    int total() const { return side_ + 2 * margin_; }
    double px(double x) const { return margin_ + x * side_; }
    double py(double y) const { return margin_ + (1.0 - y) * side_; }

    std::string points(const std::vector<Vec2>& pts) const {
        std::string s;
        for (std::size_t i = 0; i < pts.size(); ++i) s += (i ? " " : "") + num(px(pts[i].x)) + "," + num(py(pts[i].y));
        return s;
    }

    std::string rect(const Box& b) const {
        return "x=\"" + num(px(b.x0)) + "\" y=\"" + num(py(b.y1)) + "\" width=\"" + num(b.width() * side_) +
               "\" height=\"" + num(b.height() * side_) + "\"";
    }

private:
    int side_;
    int margin_;
};

std::vector<Vec2> poly_slab_outline(const PolySlab& s, const Box& cell) {
    constexpr int kSteps = 16;
    std::vector<Vec2> lower, upper;
    for (int i = 0; i <= kSteps; ++i) {
        const double x = s.x_lo + (s.x_hi - s.x_lo) * i / kSteps;
        lower.push_back({x, std::clamp(s.lower(x), cell.y0, cell.y1)});
        upper.push_back({x, std::clamp(s.upper(x), cell.y0, cell.y1)});
    }
    lower.insert(lower.end(), upper.rbegin(), upper.rend());
    return lower;
}

}  // namespace

std::string render_svg(const RangeStructure& structure, const QueryRange* range, RenderSummary* summary,
                       const RenderOptions& options) {
    RenderSummary sum;
    const Canvas cv(options);
    const Grid& grid = structure.grid();
    const int q = grid.q();
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << cv.total() << "\" height=\"" << cv.total()
        << "\" viewBox=\"0 0 " << cv.total() << ' ' << cv.total() << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << cv.total() << "\" height=\"" << cv.total() << "\" fill=\"white\"/>\n";

    if (range) {
        const QueryResult res = structure.query(*range);

        out << "<g id=\"regions\" stroke=\"none\">\n";
        for (const Region& r : res.regions) {
            const bool exact = r.kind == Region::Kind::ExactCell;
            if (!exact && !r.inside) continue;
            const Box lo = grid.box({r.row_lo, r.col});
            const Box hi = grid.box({r.row_hi, r.col});
            const Box b{lo.x0, lo.y0, lo.x1, hi.y1};
            const char* cls = exact ? "exact" : r.kind == Region::Kind::Chunk ? "chunk" : "face";
            const char* fill = exact ? "#fdd0a2" : r.kind == Region::Kind::Chunk ? "#c7e9c0" : "#a1d99b";
            out << "<rect class=\"" << cls << "\" " << cv.rect(b) << " fill=\"" << fill << "\"/>\n";
            ++sum.regions;
        }
        out << "</g>\n";

        out << "<g id=\"slabs\" fill-opacity=\"0.35\" stroke-width=\"0.5\">\n";
        for (const CoverRecord& c : res.covers) {
            ++sum.covered_subcurves;
            const char* color = kLevelColors[std::min(c.level, kColorCount - 1)];
            const Box cell = grid.box(c.owner);
            for (const RotatedSlab& s : c.rotated) {
                out << "<polygon class=\"slab\" data-level=\"" << s.level << "\" points=\"" << cv.points(s.polygon())
                    << "\" fill=\"" << color << "\" stroke=\"" << color << "\"/>\n";
                ++sum.slab_polygons;
            }
            for (const PolySlab& s : c.poly) {
                out << "<polygon class=\"slab\" data-level=\"" << s.level << "\" points=\""
                    << cv.points(poly_slab_outline(s, cell)) << "\" fill=\"" << color << "\" stroke=\"" << color
                    << "\"/>\n";
                ++sum.slab_polygons;
            }
        }
        out << "</g>\n";

        out << "<g id=\"boundary\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\">\n";
        for (const Factor& f : range->conjuncts()) {
            if (f.poly.degree() == 0) continue;
            for (const Polyline& line : trace_for_grid(f.poly, grid)) {
                out << "<polyline class=\"curve\" points=\"" << cv.points(line) << "\"/>\n";
                ++sum.curves;
            }
        }
        out << "</g>\n";
    }

    out << "<g id=\"grid\" stroke=\"#888888\" stroke-width=\"0.5\">\n";
    for (int i = 0; i <= q; ++i) {
        const double t = static_cast<double>(i) / q;
        out << "<line x1=\"" << num(cv.px(t)) << "\" y1=\"" << num(cv.py(0)) << "\" x2=\"" << num(cv.px(t))
            << "\" y2=\"" << num(cv.py(1)) << "\"/>\n";
        out << "<line x1=\"" << num(cv.px(0)) << "\" y1=\"" << num(cv.py(t)) << "\" x2=\"" << num(cv.px(1))
            << "\" y2=\"" << num(cv.py(t)) << "\"/>\n";
        sum.grid_lines += 2;
    }
    out << "</g>\n</svg>\n";
    if (summary) *summary = sum;
    return out.str();
}

}  // namespace rangelab
