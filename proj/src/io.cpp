#include "rangelab/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "rangelab/error.hpp"
#include "rangelab/format.hpp"

namespace rangelab {

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::Input, where + ": missing \"" + key + "\"");
    return j.at(key);
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) throw Error(ErrorKind::Input, where + ": expected a number");
    return j.get<double>();
}

const char* sign_text(Sign s) { return s == Sign::LessEq ? "<=" : ">="; }

Sign sign_from(const json& j, const std::string& where) {
    if (j == "<=") return Sign::LessEq;
    if (j == ">=") return Sign::GreaterEq;
    throw Error(ErrorKind::Input, where + ": sign must be \"<=\" or \">=\"");
}

}  // namespace

json to_json(const MultiPoly& p) {
    json terms = json::array();
    for (const auto& [idx, c] : p.terms()) terms.push_back(json::array({idx, c}));
    return {{"dim", p.dim()}, {"terms", terms}};
}

MultiPoly poly_from_json(const json& j) {
    const json& dim = field(j, "dim", "poly");
    if (!dim.is_number_integer() || dim.get<int>() < 1) throw Error(ErrorKind::Input, "poly: dim must be a positive integer");
    MultiPoly p(dim.get<int>());
    const json& terms = field(j, "terms", "poly");
    if (!terms.is_array()) throw Error(ErrorKind::Input, "poly: terms must be an array");
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string where = "poly term " + std::to_string(i);
        const json& t = terms[i];
        if (!t.is_array() || t.size() != 2 || !t[0].is_array())
            throw Error(ErrorKind::Input, where + ": expected [exponents, coefficient]");
        MultiIndex idx;
        for (const json& e : t[0]) {
            if (!e.is_number_integer() || e.get<int>() < 0)
                throw Error(ErrorKind::Input, where + ": exponents must be nonnegative integers");
            idx.push_back(e.get<int>());
        }
        if (static_cast<int>(idx.size()) != p.dim()) throw Error(ErrorKind::Input, where + ": exponent length != dim");
        p.add_term(idx, number(t[1], where));
    }
    return p;
}

json to_json(const QueryRange& range) {
    json out;
    json factors = json::array();
    for (const Factor& f : range.factors) factors.push_back({{"poly", to_json(f.poly)}, {"sign", sign_text(f.sign)}});
    out["factors"] = factors;
    if (range.slab) out["slab"] = {{"poly", to_json(range.slab->poly)}, {"a", range.slab->a}, {"b", range.slab->b}};
    return out;
}

QueryRange query_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorKind::Input, "query: expected an object");
    QueryRange r;
    if (j.contains("factors")) {
        const json& fs = j.at("factors");
        if (!fs.is_array()) throw Error(ErrorKind::Input, "query: factors must be an array");
        for (std::size_t i = 0; i < fs.size(); ++i) {
            const std::string where = "query factor " + std::to_string(i);
            r.factors.push_back({poly_from_json(field(fs[i], "poly", where)), sign_from(field(fs[i], "sign", where), where)});
        }
    }
    if (j.contains("slab") && !j.at("slab").is_null()) {
        const json& s = j.at("slab");
        r.slab = SlabForm{poly_from_json(field(s, "poly", "query slab")), number(field(s, "a", "query slab"), "query slab a"),
                          number(field(s, "b", "query slab"), "query slab b")};
    }
    return r;
}

json to_json(const CostStats& s) {
    return {{"slabs_visited", s.slabs_visited},
            {"points_scanned", s.points_scanned},
            {"regions_enumerated", s.regions_enumerated},
            {"dedup_checks", s.dedup_checks},
            {"output_size", s.output_size},
            {"overscan", s.overscan()},
            {"subcurves", s.subcurves},
            {"crossed_cells", s.crossed_cells},
            {"type1_chunks", s.type1_chunks},
            {"type2_faces", s.type2_faces},
            {"exact_cells", s.exact_cells},
            {"cover_fallbacks", s.cover_fallbacks},
            {"max_cover_size", s.max_cover_size}};
}

json to_json(const QueryResult& r) { return {{"ids", r.ids}, {"stats", to_json(r.stats)}}; }

json to_json(const SpaceReport& r) {
    json hist = json::array();
    for (const auto& [occ, count] : r.slab_histogram) hist.push_back(json::array({occ, count}));
    return {{"modeled_space", r.modeled_space},
            {"tradeoff_space", r.tradeoff_space},
            {"prediction", r.prediction},
            {"prediction_exponent", r.prediction_exponent},
            {"beta", r.beta},
            {"slabs", r.slabs},
            {"estimated", r.estimated},
            {"slab_histogram", hist}};
}

json to_json(const StructureConfig& c) {
    return {{"q", c.q},
            {"mode", to_string(c.mode)},
            {"order", c.order},
            {"derivative_bound", c.derivative_bound},
            {"max_degree", c.max_degree},
            {"beta_model", c.beta()},
            {"strict_derivatives", c.strict_derivatives},
            {"c_cover", c.cover.c_cover},
            {"K", c.cover.max_slabs},
            {"curvature_budget", c.refine.curvature_budget},
            {"per_cell_cap", c.refine.per_cell_cap},
            {"step", c.refine.step}};
}

json catalog_summary(const RotatedCatalog& catalog) {
    json counts = json::array();
    for (int l = 0; l < catalog.level_count(); ++l) counts.push_back(catalog.count_at_level(l));
    return {{"q", catalog.grid().q()},
            {"levels", catalog.level_count()},
            {"angles", catalog.angle_count()},
            {"counts_per_level", counts},
            {"total", catalog.total_count()}};
}

json to_json(const LBParams& p) {
    return {{"mode", to_string(p.mode)},
            {"n", p.n},
            {"Q", p.Q},
            {"dim", p.dim},
            {"degree", p.degree},
            {"c_w", p.c_w},
            {"beta", p.beta},
            {"beta_plane", p.beta_plane},
            {"beta_plane_pairs", p.beta_plane_pairs},
            {"slab_width", p.slab_width},
            {"delta", p.delta},
            {"eta", p.eta},
            {"tau", p.tau},
            {"coeff_scale", p.coeff_scale},
            {"grid_step", p.grid_step},
            {"closeness_exponent", p.closeness_exponent},
            {"log2_family_size", p.log2_family_size},
            {"n_exponent", p.n_exponent},
            {"q_exponent", p.q_exponent},
            {"coeff_cap", kPackedCoeffCap},
            {"warnings", p.warnings}};
}

void write_points_csv(std::ostream& out, const std::vector<Vec2>& points) {
    out << "x,y\n";
    for (const Vec2& p : points) out << format_double(p.x) << ',' << format_double(p.y) << '\n';
}

std::vector<Vec2> read_points_csv(std::istream& in) {
    std::vector<Vec2> out;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#' || line == "x,y") continue;
        const auto comma = line.find(',');
        const auto bad = [&] { return Error(ErrorKind::Input, "points line " + std::to_string(lineno) + ": expected x,y"); };
        if (comma == std::string::npos) throw bad();
        Vec2 p;
        const char* b = line.data();
        const char* e = b + line.size();
        auto rx = std::from_chars(b, b + comma, p.x);
        auto ry = std::from_chars(b + comma + 1, e, p.y);
        if (rx.ec != std::errc() || rx.ptr != b + comma || ry.ec != std::errc() || ry.ptr != e) throw bad();
        out.push_back(p);
    }
    return out;
}

std::vector<Vec2> read_points_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Input, "cannot open " + path);
    return read_points_csv(in);
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Input, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Input, path + ": " + e.what());
    }
}

}  // namespace rangelab
