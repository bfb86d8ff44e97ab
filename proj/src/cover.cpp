#include "rangelab/cover.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "rangelab/error.hpp"
#include "rangelab/format.hpp"

namespace rangelab {

namespace {

Vec2 normal_of(double angle) { return {-std::sin(angle), std::cos(angle)}; }

double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

int clamp_index(double value, int count) {
    if (!(value >= 0.0)) return 0;  // also catches NaN
    if (value >= count) return count - 1;
    return std::min(static_cast<int>(value), count - 1);
}

std::uint64_t ipow(std::uint64_t base, int exp) {
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

std::string describe(const SubCurve& sigma) {
    return "sub-curve in cell (" + std::to_string(sigma.owner.row) + "," +
           std::to_string(sigma.owner.col) + ") from (" + format_double(sigma.p.x) + "," +
           format_double(sigma.p.y) + ") to (" + format_double(sigma.q.x) + "," +
           format_double(sigma.q.y) + "), kappa " + format_double(sigma.kappa);
}

/// Sutherland-Hodgman clip of a convex polygon against {p : dot(n, p) >= c}.
std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, Vec2 n, double c) {
    std::vector<Vec2> out;
    const std::size_t m = poly.size();
    for (std::size_t i = 0; i < m; ++i) {
        Vec2 a = poly[i];
        Vec2 b = poly[(i + 1) % m];
        double da = dot(n, a) - c;
        double db = dot(n, b) - c;
        if (da >= 0) out.push_back(a);
        if ((da >= 0) != (db >= 0)) {
            double t = da / (da - db);
            out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
        }
    }
    return out;
}

bool in_owner_cell(int q, Cell owner, Vec2 p) { return Grid(q).cell_of(p) == owner; }

}  // namespace

// ---------------------------------------------------------------------------
// Rotated slabs

bool RotatedSlab::strip_contains(Vec2 p, double tol) const {
    double d = dot(normal_of(angle), p);
    double lo = offset_index == 0 ? -INFINITY : base + offset_index * width;
    double hi = offset_index == count - 1 ? INFINITY : base + (offset_index + 1) * width;
    return d >= lo - tol && d <= hi + tol;
}

bool RotatedSlab::contains(Vec2 p) const {
    if (!in_owner_cell(q, owner, p)) return false;
    double d = dot(normal_of(angle), p);
    return clamp_index(std::floor((d - base) / width), count) == offset_index;
}

std::vector<Vec2> RotatedSlab::polygon() const {
    Box b = Grid(q).box(owner);
    std::vector<Vec2> poly{{b.x0, b.y0}, {b.x1, b.y0}, {b.x1, b.y1}, {b.x0, b.y1}};
    Vec2 n = normal_of(angle);
    if (offset_index > 0) poly = clip_halfplane(poly, n, base + offset_index * width);
    if (offset_index < count - 1 && !poly.empty())
        poly = clip_halfplane(poly, {-n.x, -n.y}, -(base + (offset_index + 1) * width));
    return poly;
}

RotatedCatalog::RotatedCatalog(const Grid& grid)
    : grid_(grid),
      angles_(static_cast<int>(std::floor(2.0 * std::numbers::pi * grid.q()))),
      levels_(static_cast<int>(std::floor(std::log2(static_cast<double>(grid.q())))) + 1) {}

double RotatedCatalog::alpha(int level) const {
    if (level < 0 || level >= levels_)
        throw Error(ErrorKind::Contract, "rotated slab level " + std::to_string(level) + " out of range");
    return std::ldexp(1.0, level) / grid_.q();
}

int RotatedCatalog::family_size(int angle_index, int level) const {
    double g = angle(angle_index);
    double extent = (std::abs(std::sin(g)) + std::abs(std::cos(g))) / grid_.q();
    return std::max(1, static_cast<int>(std::ceil(extent / width(level) - 1e-9)));
}

double RotatedCatalog::base(Cell cell, int angle_index) const {
    Box b = grid_.box(cell);
    Vec2 n = normal_of(angle(angle_index));
    return std::min({dot(n, {b.x0, b.y0}), dot(n, {b.x1, b.y0}), dot(n, {b.x0, b.y1}),
                     dot(n, {b.x1, b.y1})});
}

int RotatedCatalog::offset_of(Cell cell, int angle_index, int level, Vec2 p) const {
    double d = dot(normal_of(angle(angle_index)), p);
    return clamp_index(std::floor((d - base(cell, angle_index)) / width(level)),
                       family_size(angle_index, level));
}

RotatedSlab RotatedCatalog::slab(Cell cell, int angle_index, int level, int offset) const {
    if (angle_index < 1 || angle_index > angles_)
        throw Error(ErrorKind::Contract, "angle index " + std::to_string(angle_index) + " out of range");
    RotatedSlab s;
    s.q = grid_.q();
    s.owner = cell;
    s.angle_index = angle_index;
    s.angle = angle(angle_index);
    s.level = level;
    s.width = width(level);
    s.count = family_size(angle_index, level);
    if (offset < 0 || offset >= s.count)
        throw Error(ErrorKind::Contract, "slab offset " + std::to_string(offset) + " out of range");
    s.offset_index = offset;
    s.base = base(cell, angle_index);
    return s;
}

std::uint64_t RotatedCatalog::count_at_level(int level) const {
    std::uint64_t per_cell = 0;
    for (int j = 1; j <= angles_; ++j) per_cell += static_cast<std::uint64_t>(family_size(j, level));
    return per_cell * static_cast<std::uint64_t>(grid_.cell_count());
}

std::uint64_t RotatedCatalog::total_count() const {
    std::uint64_t total = 0;
    for (int i = 0; i < levels_; ++i) total += count_at_level(i);
    return total;
}

CurvatureCover cover_curvature(const SubCurve& sigma, const RotatedCatalog& catalog,
                               const CoverConfig& config) {
    if (!(sigma.kappa <= std::numbers::pi / 4 + 1e-9))
        throw Error(ErrorKind::Contract, "curvature exceeds pi/4 on " + describe(sigma));
    if (!sigma.singular_free)
        throw Error(ErrorKind::Contract, "singular point on " + describe(sigma));
    if (sigma.samples.empty()) throw Error(ErrorKind::Contract, "empty sub-curve");

    const int q = catalog.grid().q();
    Vec2 dir{sigma.q.x - sigma.p.x, sigma.q.y - sigma.p.y};
    if (std::hypot(dir.x, dir.y) < 1e-15) {
        for (std::size_t k = 1; k < sigma.samples.size(); ++k) {
            dir = {sigma.samples[k].x - sigma.p.x, sigma.samples[k].y - sigma.p.y};
            if (std::hypot(dir.x, dir.y) >= 1e-15) break;
        }
    }
    const double phi = std::atan2(dir.y, dir.x);

    // Nearest lattice angle modulo pi; ties go to the smaller index.
    auto mod_pi_distance = [](double a, double b) {
        double d = std::fmod(std::abs(a - b), std::numbers::pi);
        return std::min(d, std::numbers::pi - d);
    };
    int best_j = 1;
    double best_d = INFINITY;
    for (double shift : {-std::numbers::pi, 0.0, std::numbers::pi, 2 * std::numbers::pi}) {
        int centre = static_cast<int>(std::lround((phi + shift) * q));
        for (int j = centre - 1; j <= centre + 1; ++j) {
            if (j < 1 || j > catalog.angle_count()) continue;
            double d = mod_pi_distance(catalog.angle(j), phi);
            if (d < best_d - 1e-15 || (std::abs(d - best_d) <= 1e-15 && j < best_j)) {
                best_d = d;
                best_j = j;
            }
        }
    }

    const double target = config.c_cover * (sigma.kappa / q + 1.0 / (double(q) * q));
    const int top = catalog.level_count() - 1;
    int level = 0;
    while (level < top && catalog.width(level) < target) ++level;

    CurvatureCover result;
    result.angle_index = best_j;
    for (int lv = level; lv <= top; ++lv) {
        int lo = INT32_MAX, hi = -1;
        for (Vec2 s : sigma.samples) {
            int t = catalog.offset_of(sigma.owner, best_j, lv, s);
            lo = std::min(lo, t);
            hi = std::max(hi, t);
        }
        if (hi - lo + 1 <= config.max_slabs) {
            result.level = lv;
            result.escalations = lv - level;
            for (int t = lo; t <= hi; ++t) result.slabs.push_back(catalog.slab(sigma.owner, best_j, lv, t));
            return result;
        }
    }
    throw Error(ErrorKind::CoverFailure,
                "no level covers " + describe(sigma) + " with " + std::to_string(config.max_slabs) + " slabs");
}

// ---------------------------------------------------------------------------
// i-slabs

double PolySlab::shape(double x) const {
    const double h = x - x0;
    double acc = 0.0;
    double term = 1.0;
    for (int j = 1; j <= level; ++j) {
        term *= h / j;
        acc += guesses[j - 1] * term;
    }
    return acc;
}

MultiPoly PolySlab::lower_boundary() const {
    // (x - x0)^j expanded with binomial coefficients.
    std::vector<double> coeffs(level + 1, 0.0);
    coeffs[0] = base + anchor_index * vertical_width;
    for (int j = 1; j <= level; ++j) {
        double scale = guesses[j - 1] / factorial(j);
        for (int k = 0; k <= j; ++k)
            coeffs[k] += scale * static_cast<double>(binomial(j, k)) * std::pow(-x0, j - k);
    }
    return MultiPoly::univariate(coeffs);
}

bool PolySlab::contains(Vec2 p) const {
    if (!in_owner_cell(q, owner, p)) return false;
    return clamp_index(std::floor((p.y - shape(p.x) - base) / vertical_width), anchor_count) == anchor_index;
}

ISlabHierarchy::ISlabHierarchy(const Grid& grid, int delta, double c) : grid_(grid), delta_(delta), c_(c) {
    if (delta < 2) throw Error(ErrorKind::Contract, "i-slab hierarchy needs delta >= 2");
    if (!(c >= 1.0)) throw Error(ErrorKind::Contract, "derivative bound must be >= 1");
}

double ISlabHierarchy::step(int level, int order) const {
    if (level < 1 || level > depth() || order < 1 || order > level)
        throw Error(ErrorKind::Contract, "i-slab level/order out of range");
    return 2.0 * c_ / static_cast<double>(ipow(grid_.q(), level - order + 1));
}

int ISlabHierarchy::guess_count(int level, int order) const {
    step(level, order);  // validates
    return static_cast<int>(ipow(grid_.q(), level - order + 1)) + 1;
}

double ISlabHierarchy::guess_value(int level, int order, int index) const {
    return -c_ + index * step(level, order);
}

int ISlabHierarchy::nearest_guess(int level, int order, double value) const {
    if (!(std::abs(value) <= c_ * (1 + 1e-12)))
        throw Error(ErrorKind::DerivativeBound, "derivative of order " + std::to_string(order) + " is " +
                                                    format_double(value) + ", outside [-" +
                                                    format_double(c_) + ", " + format_double(c_) + "]");
    double k = (value + c_) / step(level, order);
    double fl = std::floor(k);
    int idx = static_cast<int>(fl) + (k - fl > 0.5 ? 1 : 0);
    return std::clamp(idx, 0, guess_count(level, order) - 1);
}

double ISlabHierarchy::vertical_width(int level) const {
    return 1.0 / static_cast<double>(ipow(grid_.q(), level + 1));
}

std::uint64_t ISlabHierarchy::families_per_cell(int level) const {
    std::uint64_t n = 1;
    for (int j = 1; j <= level; ++j) n *= static_cast<std::uint64_t>(guess_count(level, j));
    return n;
}

double ISlabHierarchy::family_base(Cell cell, int level, const std::vector<int>& guess_index,
                                   double* bound) const {
    if (static_cast<int>(guess_index.size()) != level)
        throw Error(ErrorKind::Contract, "guess tuple length differs from level");
    double b = 0.0;
    const double h = grid_.side();
    double term = 1.0;
    for (int j = 1; j <= level; ++j) {
        term *= h / j;
        b += std::abs(guess_value(level, j, guess_index[j - 1])) * term;
    }
    if (bound) *bound = b;
    return grid_.box(cell).y0 - b;
}

int ISlabHierarchy::anchor_count(int level, const std::vector<int>& guess_index) const {
    double b = 0.0;
    family_base({0, 0}, level, guess_index, &b);
    return std::max(1, static_cast<int>(std::ceil((grid_.side() + 2 * b) / vertical_width(level) - 1e-9)));
}

PolySlab ISlabHierarchy::slab(Cell cell, int level, const std::vector<int>& guess_index, int anchor) const {
    PolySlab s;
    s.q = grid_.q();
    s.owner = cell;
    s.level = level;
    s.guess_index = guess_index;
    for (int j = 1; j <= level; ++j) s.guesses.push_back(guess_value(level, j, guess_index[j - 1]));
    Box b = grid_.box(cell);
    s.x0 = b.x0;
    s.x_lo = b.x0;
    s.x_hi = b.x1;
    s.base = family_base(cell, level, guess_index, nullptr);
    s.vertical_width = vertical_width(level);
    s.anchor_count = anchor_count(level, guess_index);
    if (anchor < 0 || anchor >= s.anchor_count)
        throw Error(ErrorKind::Contract, "anchor " + std::to_string(anchor) + " out of range");
    s.anchor_index = anchor;
    if (level > 1) {
        PolySlab::ParentKey key;
        for (int j = 1; j < level; ++j) key.guess_index.push_back(nearest_guess(level - 1, j, s.guesses[j - 1]));
        key.anchor_index = anchor_of(cell, level - 1, key.guess_index, {s.x0, s.lower(s.x0)});
        s.parent = std::move(key);
    }
    return s;
}

int ISlabHierarchy::anchor_of(Cell cell, int level, const std::vector<int>& guess_index, Vec2 p) const {
    double base = family_base(cell, level, guess_index, nullptr);
    const double h = p.x - grid_.box(cell).x0;
    double shape = 0.0, term = 1.0;
    for (int j = 1; j <= level; ++j) {
        term *= h / j;
        shape += guess_value(level, j, guess_index[j - 1]) * term;
    }
    return clamp_index(std::floor((p.y - shape - base) / vertical_width(level)),
                       anchor_count(level, guess_index));
}

std::vector<PolySlab> ISlabHierarchy::children(const PolySlab& parent) const {
    const int level = parent.level + 1;
    if (level > depth()) return {};
    // Candidate child lattice indices per order.
    std::vector<std::vector<int>> options(level);
    for (int j = 1; j <= level; ++j) {
        for (int k = 0; k < guess_count(level, j); ++k) {
            if (j == level || nearest_guess(parent.level, j, guess_value(level, j, k)) == parent.guess_index[j - 1])
                options[j - 1].push_back(k);
        }
    }
    std::vector<PolySlab> out;
    std::vector<int> tuple(level);
    std::vector<std::size_t> pos(level, 0);
    while (true) {
        for (int j = 0; j < level; ++j) tuple[j] = options[j][pos[j]];
        int count = anchor_count(level, tuple);
        for (int t = 0; t < count; ++t) {
            PolySlab child = slab(parent.owner, level, tuple, t);
            if (child.parent && child.parent->anchor_index == parent.anchor_index) out.push_back(std::move(child));
        }
        int j = 0;
        while (j < level && ++pos[j] == options[j].size()) pos[j++] = 0;
        if (j == level) break;
    }
    return out;
}

std::vector<PolySlab> cover_taylor(const MultiPoly& p, const SubCurve& sigma, const ISlabHierarchy& hierarchy,
                                   int order, const CoverConfig& config) {
    if (order < 1 || order > hierarchy.depth())
        throw Error(ErrorKind::Contract, "cover order " + std::to_string(order) + " outside 1.." +
                                             std::to_string(hierarchy.depth()));
    if (sigma.samples.empty()) throw Error(ErrorKind::Contract, "empty sub-curve");

    // Precondition: derivatives through order delta = order + 1 stay within
    // [-c, c] along the whole sub-curve.
    const double c = hierarchy.bound();
    auto derivatives_at = [&](Vec2 at) {
        std::vector<double> d;
        try {
            d = implicit_derivatives(p, at.x, at.y, order + 1);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Singular) throw;
            throw Error(ErrorKind::DerivativeBound, "vanishing P_y on " + describe(sigma));
        }
        for (int j = 1; j <= order + 1; ++j) {
            if (!(std::abs(d[j - 1]) <= c))
                throw Error(ErrorKind::DerivativeBound, "derivative of order " + std::to_string(j) + " is " +
                                                            format_double(d[j - 1]) + " on " + describe(sigma));
        }
        return d;
    };
    const Vec2 left = sigma.q.x < sigma.p.x ? sigma.q : sigma.p;
    const std::vector<double> d = derivatives_at(left);
    for (Vec2 s : sigma.samples) derivatives_at(s);

    // Taylor re-expansion from the endpoint to the left cell boundary.
    const Box box = hierarchy.grid().box(sigma.owner);
    const double h = box.x0 - left.x;
    std::vector<int> guess(order);
    for (int k = 1; k <= order; ++k) {
        double e = 0.0, term = 1.0;
        for (int j = k; j <= order; ++j) {
            e += d[j - 1] * term;
            term *= h / (j - k + 1);
        }
        guess[k - 1] = hierarchy.nearest_guess(order, k, e);
    }

    int lo = INT32_MAX, hi = -1;
    for (Vec2 s : sigma.samples) {
        int t = hierarchy.anchor_of(sigma.owner, order, guess, s);
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    if (hi - lo + 1 > config.max_slabs)
        throw Error(ErrorKind::CoverFailure, std::to_string(hi - lo + 1) + " slabs needed at order " +
                                                 std::to_string(order) + " for " + describe(sigma));
    std::vector<PolySlab> out;
    for (int t = lo; t <= hi; ++t) out.push_back(hierarchy.slab(sigma.owner, order, guess, t));
    return out;
}

bool slab_contains(const RotatedSlab& slab, Vec2 p) { return slab.contains(p); }
bool slab_contains(const PolySlab& slab, Vec2 p) { return slab.contains(p); }

}  // namespace rangelab
