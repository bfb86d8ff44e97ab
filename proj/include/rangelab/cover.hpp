#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rangelab/curve.hpp"
#include "rangelab/poly.hpp"

namespace rangelab {

struct CoverConfig {
    double c_cover = 4.0;  // width multiplier in cover_curvature
    int max_slabs = 16;    // K: slabs allowed per sub-curve
};

/// A strip of one rotated family, clipped to its owner cell.
///
/// The family (owner, angle_index, level) tiles the cell with `count` strips
/// {base + k*width <= n.p < base + (k+1)*width}, n = (-sin angle, cos angle).
/// The first and last strips absorb the cell corners, so every point of the
/// cell lies in exactly one strip of the family.
struct RotatedSlab {
    int q = 2;
    Cell owner;
    int angle_index = 1;  // j, angle = j / q radians
    double angle = 0.0;
    int level = 0;        // i, alpha = 2^i / q
    double width = 0.0;   // alpha / q
    int offset_index = 0;
    int count = 1;        // strips in the family
    double base = 0.0;    // smallest n.p over the cell

    bool contains(Vec2 p) const;
    /// Closed strip test without the owner-cell restriction.
    bool strip_contains(Vec2 p, double tol = 0.0) const;
    /// Corners of the strip clipped to the owner cell (counter-clockwise).
    std::vector<Vec2> polygon() const;
};

/// Index-to-geometry catalog of all rotated slab families over a grid.
/// Nothing is materialized; every slab is computed from its indices.
class RotatedCatalog {
public:
    explicit RotatedCatalog(const Grid& grid);

    const Grid& grid() const noexcept { return grid_; }
    int angle_count() const noexcept { return angles_; }  // floor(2 pi q)
    int level_count() const noexcept { return levels_; }  // floor(log2 q) + 1
    double angle(int j) const { return static_cast<double>(j) / grid_.q(); }
    double alpha(int level) const;
    double width(int level) const { return alpha(level) / grid_.q(); }

    /// Strips in the family (same for every cell).
    int family_size(int angle_index, int level) const;
    /// Index of the strip of family (cell, j, level) holding p, for p in the closed cell.
    int offset_of(Cell cell, int angle_index, int level, Vec2 p) const;
    RotatedSlab slab(Cell cell, int angle_index, int level, int offset) const;

    std::uint64_t count_at_level(int level) const;
    std::uint64_t total_count() const;

private:
    double base(Cell cell, int angle_index) const;

    Grid grid_;
    int angles_;
    int levels_;
};

struct CurvatureCover {
    int angle_index = 0;
    int level = 0;
    int escalations = 0;
    std::vector<RotatedSlab> slabs;
};

/// Covers a refined sub-curve with <= K strips of one rotated family. The
/// angle is the chord direction rounded to the lattice and the level is the
/// smallest with width >= c_cover * (kappa / q + 1 / q^2), escalated while
/// more than K strips are needed.
CurvatureCover cover_curvature(const SubCurve& sigma, const RotatedCatalog& catalog,
                               const CoverConfig& config = {});

/// Region between a degree-`level` lower boundary and the same curve shifted
/// up by `vertical_width`, restricted to the owner cell.
struct PolySlab {
    int q = 2;
    Cell owner;
    int level = 1;
    std::vector<int> guess_index;  // lattice index per derivative order 1..level
    std::vector<double> guesses;   // derivative guesses at the left cell boundary
    double x0 = 0.0;               // left boundary of the owner cell
    double base = 0.0;             // offset origin of the family
    int anchor_index = 0;
    int anchor_count = 1;
    double vertical_width = 0.0;   // 1 / q^(level+1)
    double x_lo = 0.0, x_hi = 0.0;

    /// Parent slab indices: guesses one level up and the anchor holding this
    /// slab's anchor point.
    struct ParentKey {
        std::vector<int> guess_index;
        int anchor_index = 0;
    };
    std::optional<ParentKey> parent;

    /// Offset-free part of the lower boundary: sum_j g_j (x - x0)^j / j!.
    double shape(double x) const;
    double lower(double x) const { return base + anchor_index * vertical_width + shape(x); }
    double upper(double x) const { return lower(x) + vertical_width; }
    /// Lower boundary as a univariate polynomial in x.
    MultiPoly lower_boundary() const;
    bool contains(Vec2 p) const;
};

/// Derivative-guess hierarchy of i-slabs, i = 1..delta-1, computed lazily from
/// lattice indices.
///
/// At level i the guess for derivative order j < i lies on the lattice
/// -c + k * 2c / q^(i-j+1); order i uses step 2c / q. Slabs have vertical
/// width 1 / q^(i+1) and anchors on the left cell boundary at that spacing.
class ISlabHierarchy {
public:
    ISlabHierarchy(const Grid& grid, int delta, double c);

    const Grid& grid() const noexcept { return grid_; }
    int delta() const noexcept { return delta_; }
    int depth() const noexcept { return delta_ - 1; }
    double bound() const noexcept { return c_; }

    double step(int level, int order) const;
    int guess_count(int level, int order) const;
    double guess_value(int level, int order, int index) const;
    /// Nearest lattice guess, ties to the smaller value. Throws DerivativeBound
    /// outside [-c, c].
    int nearest_guess(int level, int order, double value) const;
    double vertical_width(int level) const;

    /// Number of guess tuples (families) per cell at a level.
    std::uint64_t families_per_cell(int level) const;
    /// Family size: anchors needed to tile the cell for this guess tuple.
    int anchor_count(int level, const std::vector<int>& guess_index) const;

    PolySlab slab(Cell cell, int level, const std::vector<int>& guess_index, int anchor) const;
    int anchor_of(Cell cell, int level, const std::vector<int>& guess_index, Vec2 p) const;

    std::vector<PolySlab> children(const PolySlab& parent) const;

private:
    double family_base(Cell cell, int level, const std::vector<int>& guess_index, double* bound) const;

    Grid grid_;
    int delta_;
    double c_;
};

/// Covers a sub-curve of Z(P) with <= K slabs at hierarchy level `order`,
/// using Taylor guesses from the implicit derivatives at its left endpoint.
std::vector<PolySlab> cover_taylor(const MultiPoly& p, const SubCurve& sigma,
                                   const ISlabHierarchy& hierarchy, int order,
                                   const CoverConfig& config = {});

bool slab_contains(const RotatedSlab& slab, Vec2 p);
bool slab_contains(const PolySlab& slab, Vec2 p);

}  // namespace rangelab
