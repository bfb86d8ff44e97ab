#pragma once

#include <compare>
#include <iosfwd>
#include <numbers>
#include <vector>

#include "rangelab/poly.hpp"

namespace rangelab {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Vec2&, const Vec2&) = default;
};

double distance(Vec2 a, Vec2 b);

struct Box {
    double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    /// Closed containment with slack `tol`.
    bool contains(Vec2 p, double tol = 0.0) const {
        return p.x >= x0 - tol && p.x <= x1 + tol && p.y >= y0 - tol && p.y <= y1 + tol;
    }
};

inline constexpr Box kUnitSquare{0.0, 0.0, 1.0, 1.0};

struct Cell {
    int row = 0;
    int col = 0;
    auto operator<=>(const Cell&) const = default;
};

/// q x q partition of the unit square. Cell (r, c) is [c/q, (c+1)/q] x [r/q, (r+1)/q].
class Grid {
public:
    explicit Grid(int q);

    int q() const noexcept { return q_; }
    double side() const noexcept { return 1.0 / q_; }
    int cell_count() const noexcept { return q_ * q_; }
    int index(Cell c) const noexcept { return c.row * q_ + c.col; }
    Cell cell_at(int index) const noexcept { return {index / q_, index % q_}; }
    Box box(Cell c) const;
    /// Half-open assignment; the lines x = 1 and y = 1 belong to the last cells.
    Cell cell_of(Vec2 p) const;

private:
    int q_;
};

/// A polyline on Z(P). Closed loops repeat their first sample at the end.
using Polyline = std::vector<Vec2>;

inline bool is_closed(const Polyline& line) { return line.size() > 2 && line.front() == line.back(); }

/// Connected polyline approximations of Z(P) inside `box`, consecutive
/// samples at most `step` apart and every sample with |P| <= 1e-9.
std::vector<Polyline> trace_zero_set(const MultiPoly& p, const Box& box, double step);

/// Same tracer with an explicit lattice of n x n leaves over `box`.
std::vector<Polyline> trace_on_lattice(const MultiPoly& p, const Box& box, int n);

inline double default_step(const Grid& grid) { return 1.0 / (64.0 * grid.q()); }

/// Polylines of Z(P) over the unit square on a lattice aligned with the
/// grid lines, so that every segment lies in a single cell.
std::vector<Polyline> trace_for_grid(const MultiPoly& p, const Grid& grid, double step = 0.0);

/// Cells whose closed region lies within 1e-9 of a traced sample, row-major.
std::vector<Cell> crossed_cells(const MultiPoly& p, const Grid& grid, double step = 0.0);

/// +1 or -1 when the Bernstein coefficients of P over `box` certify a
/// constant sign, 0 otherwise. Undecided boxes are split up to `depth` times.
int certified_sign(const MultiPoly& p, const Box& box, int depth = 2);

/// Cells in which the sign of P is not certified constant, row-major.
/// Every cell that Z(P) meets is included.
std::vector<Cell> uncertified_cells(const MultiPoly& p, const Grid& grid, int depth = 2);

/// Points in `box` where P, P_x and P_y all vanish to 1e-9, deduplicated at 1e-6.
/// Throws SharedFactor when the eliminating resultants vanish identically.
std::vector<Vec2> singular_points(const MultiPoly& p, const Box& box);

/// Unsigned curvature of Z(P) at a regular point.
double curvature(const DenseBivariate& p, Vec2 at);

/// Trapezoidal integral of |curvature| over arc length along `samples`.
double total_abs_curvature(const Polyline& samples, const MultiPoly& p);

struct SubCurve {
    Cell owner;
    std::vector<Vec2> samples;
    Vec2 p;  // first sample
    Vec2 q;  // last sample
    double kappa = 0.0;
    bool singular_free = true;
};

struct RefineOptions {
    double step = 0.0;  // 0 selects default_step(grid)
    double curvature_budget = std::numbers::pi / 4;
    int per_cell_cap = 64;
};

/// Pieces of Z(P) inside the unit square, cut at cell boundaries, away from
/// singular points, and at the curvature budget. Ordered by cell (row-major)
/// and then by position along the trace. The curve within `step` of a
/// singular point is left uncovered; those points go to `singular_out`.
std::vector<SubCurve> refine_subcurves(const MultiPoly& p, const Grid& grid,
                                       const RefineOptions& options = {},
                                       std::vector<Vec2>* singular_out = nullptr);

/// Number of points of Z(P) in `box` whose tangent has the given slope.
int tangent_count_with_slope(const MultiPoly& p, const Box& box, double slope);

/// CSV rows x, y, cumulative_arclength, cumulative_abs_curvature.
void write_curve_csv(std::ostream& out, const Polyline& line, const MultiPoly& p);

}  // namespace rangelab
