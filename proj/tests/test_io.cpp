#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "rangelab/error.hpp"
#include "rangelab/io.hpp"
#include "rangelab/render.hpp"
#include "rangelab/suite.hpp"

using namespace rangelab;

namespace {

std::size_t count_of(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

QueryRange far_disk() {
    QueryRange q;
    // x^2 + y^2 + 1 <= 0 has no real solutions.
    q.factors.push_back({MultiPoly(2, {{{2, 0}, 1.0}, {{0, 2}, 1.0}, {{0, 0}, 1.0}}), Sign::LessEq});
    return q;
}

}  // namespace

TEST_CASE("polynomials and queries survive a JSON round trip") {
    std::mt19937_64 rng(7);
    for (QueryKind k : {QueryKind::Disk, QueryKind::Ellipse, QueryKind::Cubic, QueryKind::QuarticSlab}) {
        for (int i = 0; i < 10; ++i) {
            const QueryRange q = random_query(k, rng);
            const QueryRange back = query_from_json(json::parse(to_json(q).dump()));
            REQUIRE(back.factors.size() == q.factors.size());
            for (std::size_t f = 0; f < q.factors.size(); ++f) {
                CHECK(back.factors[f].poly == q.factors[f].poly);
                CHECK(back.factors[f].sign == q.factors[f].sign);
            }
            REQUIRE(back.slab.has_value() == q.slab.has_value());
            if (q.slab) {
                CHECK(back.slab->poly == q.slab->poly);
                CHECK(back.slab->a == q.slab->a);
                CHECK(back.slab->b == q.slab->b);
            }
        }
    }
}

TEST_CASE("malformed JSON input is rejected as Input") {
    auto kind_of = [](const json& j) {
        try {
            query_from_json(j);
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::Contract;
    };
    CHECK(kind_of(json::array()) == ErrorKind::Input);
    CHECK(kind_of(json::parse(R"({"factors":[{"poly":{"dim":2,"terms":[]},"sign":"<"}]})")) == ErrorKind::Input);
    CHECK(kind_of(json::parse(R"({"factors":[{"poly":{"dim":2,"terms":[[[1],1.0]]},"sign":"<="}]})")) == ErrorKind::Input);
    CHECK(kind_of(json::parse(R"({"factors":[{"poly":{"dim":2,"terms":[[[1,-1],1.0]]},"sign":"<="}]})")) ==
          ErrorKind::Input);
    CHECK(kind_of(json::parse(R"({"slab":{"poly":{"dim":2,"terms":[]},"a":0}})")) == ErrorKind::Input);
}

TEST_CASE("points CSV round trip is exact") {
    const std::vector<Vec2> pts = uniform_points(500, 3);
    std::stringstream ss;
    ss << "# comment line\n";
    write_points_csv(ss, pts);
    ss << "\n";
    const std::vector<Vec2> back = read_points_csv(ss);
    REQUIRE(back.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(back[i].x == pts[i].x);
        CHECK(back[i].y == pts[i].y);
    }
}

TEST_CASE("bad CSV rows name the line") {
    std::stringstream ss("x,y\n0.1,0.2\n0.3;0.4\n");
    try {
        read_points_csv(ss);
        FAIL("expected an Input error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Input);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    std::stringstream trailing("0.1,0.2x\n");
    CHECK_THROWS_AS(read_points_csv(trailing), Error);
}

TEST_CASE("render draws at least one slab per covered sub-curve") {
    StructureConfig cfg;
    cfg.q = 8;
    const RangeStructure s = RangeStructure::build(uniform_points(2000, 11), cfg);
    std::mt19937_64 rng(5);
    const QueryRange q = random_query(QueryKind::Ellipse, rng);
    RenderSummary sum;
    const std::string svg = render_svg(s, &q, &sum);
    CHECK(sum.grid_lines == 18);
    CHECK(sum.curves >= 1);
    CHECK(sum.covered_subcurves >= 1);
    CHECK(sum.slab_polygons >= sum.covered_subcurves);
    CHECK(count_of(svg, "class=\"slab\"") == sum.slab_polygons);
    CHECK(count_of(svg, "class=\"curve\"") == sum.curves);
    CHECK(render_svg(s, &q) == svg);
}

TEST_CASE("an empty query renders the grid alone") {
    StructureConfig cfg;
    cfg.q = 8;
    const RangeStructure s = RangeStructure::build(uniform_points(500, 2), cfg);
    const QueryRange q = far_disk();
    RenderSummary with_query, grid_only;
    const std::string a = render_svg(s, &q, &with_query);
    render_svg(s, nullptr, &grid_only);
    CHECK(with_query.slab_polygons == 0);
    CHECK(with_query.regions == 0);
    CHECK(with_query.curves == 0);
    CHECK(grid_only.grid_lines == with_query.grid_lines);
    CHECK(count_of(a, "<line ") == 18);
}

TEST_CASE("structure config and LB parameters serialize every field") {
    const json c = to_json(StructureConfig{});
    for (const char* key : {"q", "mode", "order", "derivative_bound", "max_degree", "beta_model", "c_cover", "K"})
        CHECK(c.contains(key));
    const json p = to_json(lb_parameters(65536, 4, 2, 4));
    CHECK(p.at("beta").get<int>() == 14);
    CHECK(p.at("warnings").is_array());
}
