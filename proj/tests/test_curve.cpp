#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "rangelab/curve.hpp"
#include "rangelab/error.hpp"

using namespace rangelab;
using std::numbers::pi;

namespace {

MultiPoly circle(double cx, double cy, double r) {
    return MultiPoly(2, {{{2, 0}, 1.0}, {{1, 0}, -2 * cx}, {{0, 2}, 1.0}, {{0, 1}, -2 * cy}, {{0, 0}, cx * cx + cy * cy - r * r}});
}

MultiPoly line(double a, double b, double c) {  // a x + b y + c
    return MultiPoly(2, {{{1, 0}, a}, {{0, 1}, b}, {{0, 0}, c}});
}

// Closed cells met by a circle: distance from the centre to the box is at
// most r and the farthest corner is at least r away.
std::set<Cell> circle_cells_oracle(double cx, double cy, double r, int q, double slack = 0.0) {
    std::set<Cell> out;
    for (int row = 0; row < q; ++row)
        for (int col = 0; col < q; ++col) {
            const double x0 = double(col) / q, x1 = double(col + 1) / q;
            const double y0 = double(row) / q, y1 = double(row + 1) / q;
            const double dx = std::max({x0 - cx, 0.0, cx - x1}), dy = std::max({y0 - cy, 0.0, cy - y1});
            const double near = std::hypot(dx, dy);
            const double far = std::hypot(std::max(std::abs(x0 - cx), std::abs(x1 - cx)),
                                          std::max(std::abs(y0 - cy), std::abs(y1 - cy)));
            if (near <= r + slack && far >= r - slack) out.insert({row, col});
        }
    return out;
}

MultiPoly random_dense(std::mt19937_64& rng, int degree) {
    std::uniform_real_distribution<double> u(-1, 1);
    MultiPoly p(2);
    for (int i = 0; i <= degree; ++i)
        for (int j = 0; i + j <= degree; ++j) p.add_term({i, j}, u(rng));
    return p;
}

}  // namespace

TEST_CASE("grid geometry") {
    const Grid g(4);
    CHECK(g.cell_of({0.0, 0.0}) == Cell{0, 0});
    CHECK(g.cell_of({1.0, 1.0}) == Cell{3, 3});
    CHECK(g.cell_of({0.25, 0.6}) == Cell{2, 1});
    const Box b = g.box({2, 1});
    CHECK(b.x0 == 0.25);
    CHECK(b.y1 == 0.75);
    CHECK_THROWS_AS(Grid(1), Error);
}

TEST_CASE("trace: horizontal line") {
    const auto lines = trace_zero_set(line(0, 1, -0.5), kUnitSquare, 1e-2);
    REQUIRE(lines.size() == 1);
    for (const Vec2& s : lines[0]) CHECK(s.y == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::min(lines[0].front().x, lines[0].back().x) == doctest::Approx(0.0));
    CHECK(std::max(lines[0].front().x, lines[0].back().x) == doctest::Approx(1.0));
}

TEST_CASE("trace: circle residual and spacing") {
    const MultiPoly c = circle(0.5, 0.5, 0.3);
    const double step = 1e-2;
    const auto lines = trace_zero_set(c, kUnitSquare, step);
    REQUIRE(lines.size() == 1);
    CHECK(is_closed(lines[0]));
    for (std::size_t k = 0; k < lines[0].size(); ++k) {
        const Vec2 s = lines[0][k];
        CHECK(std::abs(c(s.x, s.y)) <= 1e-9);
        CHECK(std::abs(std::hypot(s.x - 0.5, s.y - 0.5) - 0.3) <= 1e-9);
        if (k > 0) CHECK(distance(lines[0][k - 1], s) <= step);
    }
}

TEST_CASE("trace: empty and degenerate inputs") {
    CHECK(trace_zero_set(circle(3, 3, 0.5), kUnitSquare, 1e-2).empty());
    CHECK_THROWS_AS(trace_zero_set(MultiPoly(2), kUnitSquare, 1e-2), Error);
    CHECK_THROWS_AS(trace_zero_set(circle(0.5, 0.5, 0.2), kUnitSquare, 0.0), Error);
}

TEST_CASE("crossed cells: circle strictly inside the central block") {
    const auto cells = crossed_cells(circle(0.5, 0.5, 0.24), Grid(4));
    const std::set<Cell> got(cells.begin(), cells.end());
    CHECK(got == std::set<Cell>{{1, 1}, {1, 2}, {2, 1}, {2, 2}});
}

TEST_CASE("crossed cells: circle tangent to grid lines counts grazed cells") {
    // r = 0.25 touches x, y = 0.25, 0.75 at grid vertices, so the closed
    // cells meeting the circle are the 4 central ones plus 8 grazed ones.
    const auto cells = crossed_cells(circle(0.5, 0.5, 0.25), Grid(4));
    const std::set<Cell> got(cells.begin(), cells.end());
    const auto want = circle_cells_oracle(0.5, 0.5, 0.25, 4);
    CHECK(want.size() == 12);
    CHECK(got == want);
}

TEST_CASE("crossed cells: diagonal lines") {
    for (int q : {4, 8, 16}) {
        // y = x passes through grid vertices and grazes the off-diagonal neighbours
        CHECK(crossed_cells(line(-1, 1, 0), Grid(q)).size() == std::size_t(3 * q - 2));
        // a generic diagonal crosses 2q - 1 cells
        CHECK(crossed_cells(line(-1, 1, -0.3 / q), Grid(q)).size() == std::size_t(2 * q - 1));
    }
    CHECK(crossed_cells(circle(5, 5, 1), Grid(8)).empty());
}

TEST_CASE("crossed cells agree with the closed-region oracle on random circles") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0, 1), ur(0.05, 0.6);
    for (int t = 0; t < 30; ++t) {
        const double cx = u(rng), cy = u(rng), r = ur(rng);
        const int q = 4 + 4 * (t % 4);
        const auto cells = crossed_cells(circle(cx, cy, r), Grid(q));
        const std::set<Cell> got(cells.begin(), cells.end());
        // cells within 1e-6 of tangency may go either way
        const auto sure = circle_cells_oracle(cx, cy, r, q, -1e-6);
        const auto maybe = circle_cells_oracle(cx, cy, r, q, 1e-6);
        for (const Cell& c : sure) CHECK(got.count(c) == 1);
        for (const Cell& c : got) CHECK(maybe.count(c) == 1);
        // Bernstein certification never drops a crossed cell
        const auto unc = uncertified_cells(circle(cx, cy, r), Grid(q));
        const std::set<Cell> uset(unc.begin(), unc.end());
        for (const Cell& c : sure) CHECK(uset.count(c) == 1);
    }
}

TEST_CASE("certified sign") {
    const MultiPoly c = circle(0.5, 0.5, 0.2);
    CHECK(certified_sign(c, {0.0, 0.0, 0.1, 0.1}) == 1);
    CHECK(certified_sign(c, {0.45, 0.45, 0.55, 0.55}) == -1);
    CHECK(certified_sign(c, {0.6, 0.4, 0.8, 0.6}) == 0);
}

TEST_CASE("singular points") {
    const MultiPoly node(2, {{{2, 0}, 1.0}, {{0, 2}, -1.0}});
    auto s = singular_points(node, {-1, -1, 1, 1});
    REQUIRE(s.size() == 1);
    CHECK(std::abs(s[0].x) <= 1e-9);
    CHECK(std::abs(s[0].y) <= 1e-9);

    CHECK(singular_points(circle(0, 0, 1), {-2, -2, 2, 2}).empty());

    const MultiPoly cusp(2, {{{0, 2}, 1.0}, {{3, 0}, -1.0}});
    s = singular_points(cusp, {-1, -1, 1, 1});
    REQUIRE(s.size() == 1);
    CHECK(std::abs(s[0].x) <= 1e-5);
    CHECK(std::abs(s[0].y) <= 1e-5);

    // shifted node inside the unit square
    const MultiPoly shifted = line(1, 1, -0.9) * line(1, -1, -0.1);
    s = singular_points(shifted, kUnitSquare);
    REQUIRE(s.size() == 1);
    CHECK(s[0].x == doctest::Approx(0.5));
    CHECK(s[0].y == doctest::Approx(0.4));

    // a squared factor shares a factor with both partials
    const MultiPoly sq = line(1, 1, -1) * line(1, 1, -1);
    CHECK_THROWS_AS(singular_points(sq, kUnitSquare), Error);
}

TEST_CASE("total absolute curvature") {
    const MultiPoly seg = line(1, -2, 0.3);
    const auto lines = trace_zero_set(seg, kUnitSquare, 1e-2);
    REQUIRE(lines.size() == 1);
    CHECK(total_abs_curvature(lines[0], seg) == doctest::Approx(0.0));

    const MultiPoly full = circle(0.5, 0.5, 0.3);
    const auto loop = trace_zero_set(full, kUnitSquare, 1.0 / 128);
    REQUIRE(loop.size() == 1);
    CHECK(std::abs(total_abs_curvature(loop[0], full) - 2 * pi) <= 1e-3);

    // quarter arcs: the grid lines through the centre cut the circle into quarters
    const MultiPoly c = circle(0.5, 0.5, 0.4);
    const auto lines2 = trace_for_grid(c, Grid(2));
    REQUIRE(lines2.size() == 1);
    Polyline quarter;
    for (const Vec2& s : lines2[0])
        if (s.x >= 0.5 && s.y >= 0.5) quarter.push_back(s);
    // ensure arc order
    std::sort(quarter.begin(), quarter.end(), [](Vec2 a, Vec2 b) { return a.x < b.x; });
    CHECK(quarter.front().x == doctest::Approx(0.5));
    CHECK(quarter.back().y == doctest::Approx(0.5));
    CHECK(std::abs(total_abs_curvature(quarter, c) - pi / 2) <= 1e-3);

    const MultiPoly node(2, {{{2, 0}, 1.0}, {{0, 2}, -1.0}});
    CHECK_THROWS_AS(total_abs_curvature({{0, 0}, {0.1, 0.1}}, node), Error);
}

TEST_CASE("refine: line across q = 8") {
    const Grid g(8);
    const MultiPoly seg = line(0.3, -1, 0.2);
    const auto subs = refine_subcurves(seg, g);
    const auto crossed = crossed_cells(seg, g);
    std::set<Cell> owners;
    for (const auto& s : subs) {
        owners.insert(s.owner);
        CHECK(s.kappa == doctest::Approx(0.0));
    }
    CHECK(subs.size() == owners.size());
    CHECK(owners.size() == crossed.size());
}

TEST_CASE("refine: circle r = 0.4 on q = 2") {
    const Grid g(2);
    const MultiPoly c = circle(0.5, 0.5, 0.4);
    const auto subs = refine_subcurves(c, g);
    CHECK(subs.size() >= 8);
    double per_cell[4] = {0, 0, 0, 0};
    for (const auto& s : subs) {
        CHECK(s.kappa <= pi / 4 + 1e-6);
        CHECK(s.singular_free);
        const Box b = g.box(s.owner);
        for (const Vec2& p : s.samples) CHECK(b.contains(p, 1e-12));
        per_cell[g.index(s.owner)] += s.kappa;
    }
    for (double k : per_cell) CHECK(std::abs(k - pi / 2) <= 1e-3);
    // ordered by owner cell
    for (std::size_t k = 1; k < subs.size(); ++k) CHECK(g.index(subs[k - 1].owner) <= g.index(subs[k].owner));
}

TEST_CASE("refine: no curve, and pieces avoid singular points") {
    CHECK(refine_subcurves(circle(4, 4, 1), Grid(4)).empty());
    const MultiPoly node = line(1, 1, -0.9) * line(1, -1, -0.1);
    const auto subs = refine_subcurves(node, Grid(4));
    CHECK(!subs.empty());
    for (const auto& s : subs)
        for (const Vec2& p : s.samples) CHECK(distance(p, {0.5, 0.4}) >= 1e-6);
}

TEST_CASE("refine: sub-curves reproduce the trace") {
    const Grid g(8);
    const MultiPoly ell(2, {{{2, 0}, 4.0}, {{1, 0}, -4.0}, {{0, 2}, 9.0}, {{0, 1}, -9.0}, {{0, 0}, 1.0 + 2.25 - 0.6}});
    const double step = default_step(g);
    const auto subs = refine_subcurves(ell, g);
    for (const Polyline& l : trace_for_grid(ell, g))
        for (const Vec2& s : l) {
            double best = INFINITY;
            for (const auto& sc : subs)
                for (const Vec2& p : sc.samples) best = std::min(best, distance(p, s));
            CHECK(best <= step);
        }
}

TEST_CASE("tangent counts") {
    CHECK(tangent_count_with_slope(circle(0, 0, 1), {-2, -2, 2, 2}, 0.0) == 2);
    const MultiPoly parabola(2, {{{0, 1}, 1.0}, {{2, 0}, -1.0}});
    CHECK(tangent_count_with_slope(parabola, {-2, -2, 2, 2}, 0.0) == 1);
    CHECK(tangent_count_with_slope(circle(0, 0, 1), {-2, -2, 2, 2}, 1.0) == 2);
    CHECK_THROWS_AS(tangent_count_with_slope(line(-2, 1, 0), kUnitSquare, 2.0), Error);

    std::mt19937_64 rng(44);
    for (int t = 0; t < 20; ++t) {
        const MultiPoly p = random_dense(rng, 4);
        CHECK(tangent_count_with_slope(p, {-2, -2, 2, 2}, 0.3 * t - 3) <= 16);
    }
}

TEST_CASE("Bezout-style bounds on random curves") {
    std::mt19937_64 rng(101);
    for (int t = 0; t < 20; ++t) {
        const int deg = 2 + t % 3;
        const MultiPoly p = random_dense(rng, deg);
        const int q = 8;
        CHECK(crossed_cells(p, Grid(q)).size() <= std::size_t(8 * deg * deg * q));
        double total = 0.0;
        for (const auto& s : refine_subcurves(p, Grid(q))) total += s.kappa;
        CHECK(total <= 2 * pi * deg * deg * deg * deg);
    }
}

TEST_CASE("curve csv export") {
    const MultiPoly c = circle(0.5, 0.5, 0.3);
    const auto lines = trace_zero_set(c, kUnitSquare, 0.05);
    std::ostringstream os;
    write_curve_csv(os, lines.at(0), c);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "x,y,cumulative_arclength,cumulative_abs_curvature");
    std::string row, last;
    int rows = 0;
    while (std::getline(is, row)) {
        ++rows;
        last = row;
    }
    CHECK(rows == static_cast<int>(lines[0].size()));
    const double turn = std::stod(last.substr(last.rfind(',') + 1));
    CHECK(turn == doctest::Approx(2 * pi).epsilon(1e-2));
}
