#include "rangelab/suite.hpp"

#include <cmath>
#include <numbers>

namespace rangelab {

const char* to_string(QueryKind kind) {
    switch (kind) {
        case QueryKind::Disk: return "disk";
        case QueryKind::Ellipse: return "ellipse";
        case QueryKind::Cubic: return "cubic";
        case QueryKind::QuarticSlab: return "quartic_slab";
    }
    return "?";
}

std::vector<Vec2> uniform_points(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Vec2> pts(n);
    for (auto& p : pts) {
        p.x = unit(rng);
        p.y = unit(rng);
    }
    return pts;
}

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

MultiPoly graph_poly(const std::vector<double>& a) {
    MultiPoly p(2, {{{0, 1}, 1.0}});
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0.0) p.add_term({static_cast<int>(i), 0}, -a[i]);
    return p;
}

}  // namespace

QueryRange random_query(QueryKind kind, std::mt19937_64& rng) {
    QueryRange r;
    switch (kind) {
        case QueryKind::Disk: {
            const double cx = uniform(rng, 0, 1), cy = uniform(rng, 0, 1), rad = uniform(rng, 0.05, 0.4);
            r.factors.push_back({MultiPoly(2, {{{2, 0}, 1.0},
                                               {{1, 0}, -2 * cx},
                                               {{0, 2}, 1.0},
                                               {{0, 1}, -2 * cy},
                                               {{0, 0}, cx * cx + cy * cy - rad * rad}}),
                                 Sign::LessEq});
            break;
        }
        case QueryKind::Ellipse: {
            const double cx = uniform(rng, 0, 1), cy = uniform(rng, 0, 1);
            const double a = uniform(rng, 0.05, 0.4), b = uniform(rng, 0.05, 0.4);
            const double th = uniform(rng, 0, std::numbers::pi);
            const double c = std::cos(th), s = std::sin(th);
            // u = c (x - cx) + s (y - cy), v = -s (x - cx) + c (y - cy); u^2/a^2 + v^2/b^2 - 1
            const double A = c * c / (a * a) + s * s / (b * b);
            const double B = 2 * c * s * (1 / (a * a) - 1 / (b * b));
            const double C = s * s / (a * a) + c * c / (b * b);
            MultiPoly x = MultiPoly::variable(2, 0) - MultiPoly::constant(2, cx);
            MultiPoly y = MultiPoly::variable(2, 1) - MultiPoly::constant(2, cy);
            MultiPoly p = A * (x * x) + B * (x * y) + C * (y * y) - MultiPoly::constant(2, 1.0);
            r.factors.push_back({p, Sign::LessEq});
            break;
        }
        case QueryKind::Cubic: {
            std::vector<double> a{uniform(rng, 0.2, 0.8), uniform(rng, -0.5, 0.5), uniform(rng, -0.5, 0.5),
                                  uniform(rng, -0.5, 0.5)};
            const Sign sign = uniform(rng, 0, 1) < 0.5 ? Sign::LessEq : Sign::GreaterEq;
            r.factors.push_back({graph_poly(a), sign});
            break;
        }
        case QueryKind::QuarticSlab: {
            std::vector<double> a{uniform(rng, 0.1, 0.6), uniform(rng, -0.4, 0.4), uniform(rng, -0.4, 0.4),
                                  uniform(rng, -0.25, 0.25), uniform(rng, -0.25, 0.25)};
            MultiPoly p = graph_poly(a);
            if (uniform(rng, 0, 1) < 0.5) p.add_term({1, 2}, uniform(rng, -0.3, 0.3));
            r.slab = SlabForm{p, 0.0, uniform(rng, 0.02, 0.2)};
            break;
        }
    }
    return r;
}

std::vector<QueryRange> query_suite(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<QueryRange> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(random_query(static_cast<QueryKind>(i % 4), rng));
    return out;
}

}  // namespace rangelab
