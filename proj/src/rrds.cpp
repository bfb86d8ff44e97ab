#include "rangelab/rrds.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>
#include <string>

#include "rangelab/error.hpp"

namespace rangelab {

// ---------------------------------------------------------------------------
// Ranges

bool Factor::holds(Vec2 p) const {
    const double v = poly(p.x, p.y);
    return sign == Sign::LessEq ? v <= 0.0 : v >= 0.0;
}

std::vector<Factor> QueryRange::conjuncts() const {
    std::vector<Factor> out = factors;
    if (slab) {
        const MultiPoly& p = slab->poly;
        out.push_back({p - MultiPoly::constant(2, slab->a), Sign::GreaterEq});
        out.push_back({p - MultiPoly::constant(2, slab->b), Sign::LessEq});
    }
    return out;
}

bool QueryRange::contains(Vec2 p) const {
    for (const Factor& f : factors)
        if (!f.holds(p)) return false;
    if (slab) {
        const double v = slab->poly(p.x, p.y);
        if (!(v - slab->a >= 0.0 && v - slab->b <= 0.0)) return false;
    }
    return true;
}

void QueryRange::validate(int max_degree) const {
    auto check = [&](const MultiPoly& p) {
        if (p.dim() != 2) throw Error(ErrorKind::Contract, "query factors must be bivariate");
        if (p.degree() > max_degree)
            throw Error(ErrorKind::Contract, "factor degree " + std::to_string(p.degree()) + " exceeds " +
                                                 std::to_string(max_degree));
    };
    for (const Factor& f : factors) check(f.poly);
    if (slab) {
        check(slab->poly);
        if (!(slab->a < slab->b)) throw Error(ErrorKind::Contract, "slab form needs a < b");
    }
}

QueryRange range_from_factors(const std::vector<std::pair<MultiPoly, Sign>>& factors) {
    QueryRange r;
    for (const auto& [p, s] : factors) r.factors.push_back({p, s});
    return r;
}

const char* to_string(Mode mode) { return mode == Mode::Curvature ? "curvature" : "derivative"; }

Mode mode_from_string(const std::string& name) {
    if (name == "curvature") return Mode::Curvature;
    if (name == "derivative") return Mode::Derivative;
    throw Error(ErrorKind::Input, "unknown mode '" + name + "'");
}

int StructureConfig::beta() const {
    return beta_model > 0 ? beta_model : static_cast<int>(monic_param_count(2, max_degree));
}

double curvature_space_exponent(int beta) { return 3.0 * beta - 4.0; }

double derivative_space_exponent(int beta, int delta) {
    return ((2.0 * beta - delta) * (delta + 1) - 2.0) / 2.0;
}

std::vector<int> brute_force_query(const std::vector<Vec2>& points, const QueryRange& range) {
    const std::vector<Factor> conj = range.conjuncts();
    std::vector<int> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool in = true;
        for (const Factor& f : conj)
            if (!f.holds(points[i])) {
                in = false;
                break;
            }
        if (in) out.push_back(static_cast<int>(i));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Structure

struct RangeStructure::Cache {
    std::mutex mutex;
    // (cell, angle, level) -> point ids per strip offset
    std::map<std::uint64_t, std::vector<std::vector<int>>> rotated;
    // (cell, guess tuple) -> point ids per anchor
    std::map<std::pair<int, std::vector<int>>, std::vector<std::vector<int>>> poly;
};

RangeStructure::RangeStructure(RangeStructure&&) noexcept = default;
RangeStructure& RangeStructure::operator=(RangeStructure&&) noexcept = default;
RangeStructure::~RangeStructure() = default;

RangeStructure RangeStructure::build(std::vector<Vec2> points, const StructureConfig& config) {
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Vec2 p = points[i];
        if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0))
            throw Error(ErrorKind::Input, "point " + std::to_string(i) + " lies outside the unit square");
    }
    RangeStructure s;
    s.config_ = config;
    s.grid_ = Grid(config.q);
    s.catalog_ = RotatedCatalog(s.grid_);
    if (config.mode == Mode::Derivative) {
        if (config.order < 1) throw Error(ErrorKind::Contract, "derivative order must be >= 1");
        s.hierarchy_.emplace(s.grid_, config.order + 1, config.derivative_bound);
    }
    s.points_ = std::move(points);
    s.buckets_.assign(s.grid_.cell_count(), {});
    for (std::size_t i = 0; i < s.points_.size(); ++i)
        s.buckets_[s.grid_.index(s.grid_.cell_of(s.points_[i]))].push_back(static_cast<int>(i));
    s.cache_ = std::make_unique<Cache>();
    return s;
}

const std::vector<int>& RangeStructure::slab_points(const RotatedSlab& slab) const {
    const int cell = grid_.index(slab.owner);
    const std::uint64_t key = (static_cast<std::uint64_t>(cell) << 32) |
                              (static_cast<std::uint64_t>(slab.angle_index) << 8) |
                              static_cast<std::uint64_t>(slab.level);
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->rotated.find(key);
    if (it == cache_->rotated.end()) {
        std::vector<std::vector<int>> lists(catalog_.family_size(slab.angle_index, slab.level));
        for (int id : buckets_[cell])
            lists[catalog_.offset_of(slab.owner, slab.angle_index, slab.level, points_[id])].push_back(id);
        it = cache_->rotated.emplace(key, std::move(lists)).first;
    }
    return it->second[slab.offset_index];
}

const std::vector<int>& RangeStructure::slab_points(const PolySlab& slab) const {
    if (!hierarchy_) throw Error(ErrorKind::Contract, "structure has no i-slab hierarchy");
    const int cell = grid_.index(slab.owner);
    auto key = std::make_pair(cell, slab.guess_index);
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->poly.find(key);
    if (it == cache_->poly.end()) {
        std::vector<std::vector<int>> lists(hierarchy_->anchor_count(slab.level, slab.guess_index));
        for (int id : buckets_[cell])
            lists[hierarchy_->anchor_of(slab.owner, slab.level, slab.guess_index, points_[id])].push_back(id);
        it = cache_->poly.emplace(std::move(key), std::move(lists)).first;
    }
    return it->second[slab.anchor_index];
}

// ---------------------------------------------------------------------------
// Query

namespace {

// Contiguous strips [lo, hi] of one family covering one sub-curve.
struct CellCover {
    bool rotated = true;
    int angle_index = 0, level = 0;  // rotated family
    std::vector<int> guess_index;    // i-slab family
    int lo = 0, hi = 0;
    std::vector<RotatedSlab> rslabs;
    std::vector<PolySlab> pslabs;
};

}  // namespace

QueryResult RangeStructure::query(const QueryRange& range) const {
    range.validate(config_.max_degree);
    const std::vector<Factor> conj = range.conjuncts();
    const int nc = grid_.cell_count();
    const double step = config_.refine.step > 0 ? config_.refine.step : default_step(grid_);
    RefineOptions refine = config_.refine;
    refine.step = step;

    QueryResult result;
    CostStats& st = result.stats;
    std::vector<char> crossed(nc, 0), exact(nc, 0), covered(nc, 0);
    std::vector<std::vector<CellCover>> covers(nc);

    auto inside = [&](Vec2 p) {
        for (const Factor& f : conj)
            if (!f.holds(p)) return false;
        return true;
    };
    // Near the boundary of any non-constant conjunct.
    auto ambiguous = [&](Vec2 p) {
        for (const Factor& f : conj)
            if (f.poly.degree() > 0 && std::abs(f.poly(p.x, p.y)) <= 1e-9) return true;
        return false;
    };

    // 1-2. refine each boundary curve and cover its sub-curves
    for (const Factor& f : conj) {
        if (f.poly.degree() == 0) continue;
        for (Cell c : uncertified_cells(f.poly, grid_)) crossed[grid_.index(c)] = 1;
        std::vector<Vec2> singular;
        const std::vector<SubCurve> pieces = refine_subcurves(f.poly, grid_, refine, &singular);
        for (Vec2 z : singular) {
            for (int idx = 0; idx < nc; ++idx)
                if (grid_.box(grid_.cell_at(idx)).contains(z, 4 * step)) crossed[idx] = exact[idx] = 1;
        }
        for (const SubCurve& sigma : pieces) {
            const int idx = grid_.index(sigma.owner);
            crossed[idx] = covered[idx] = 1;
            ++st.subcurves;
            CellCover cc;
            if (config_.mode == Mode::Curvature) {
                CurvatureCover cover = cover_curvature(sigma, catalog_, config_.cover);
                cc.angle_index = cover.angle_index;
                cc.level = cover.level;
                cc.lo = cover.slabs.front().offset_index;
                cc.hi = cover.slabs.back().offset_index;
                // Guard strips: the curve between samples may bulge past a strip edge.
                const double g = catalog_.angle(cc.angle_index);
                const Vec2 n{-std::sin(g) * step, std::cos(g) * step};
                for (Vec2 s : sigma.samples) {
                    for (double sgn : {-1.0, 1.0}) {
                        const int t = catalog_.offset_of(sigma.owner, cc.angle_index, cc.level,
                                                         {s.x + sgn * n.x, s.y + sgn * n.y});
                        cc.lo = std::min(cc.lo, t);
                        cc.hi = std::max(cc.hi, t);
                    }
                }
                for (int t = cc.lo; t <= cc.hi; ++t)
                    cc.rslabs.push_back(catalog_.slab(sigma.owner, cc.angle_index, cc.level, t));
                result.cover_sizes.push_back(cover.slabs.size());
            } else {
                std::vector<PolySlab> slabs;
                try {
                    slabs = cover_taylor(f.poly, sigma, *hierarchy_, config_.order, config_.cover);
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::DerivativeBound || config_.strict_derivatives) throw;
                    ++st.cover_fallbacks;
                    exact[idx] = 1;
                    continue;
                }
                cc.rotated = false;
                cc.guess_index = slabs.front().guess_index;
                cc.level = slabs.front().level;
                cc.lo = slabs.front().anchor_index;
                cc.hi = slabs.back().anchor_index;
                for (Vec2 s : sigma.samples) {
                    for (double sgn : {-1.0, 1.0}) {
                        const int t = hierarchy_->anchor_of(sigma.owner, cc.level, cc.guess_index,
                                                            {s.x, s.y + sgn * step});
                        cc.lo = std::min(cc.lo, t);
                        cc.hi = std::max(cc.hi, t);
                    }
                }
                for (int t = cc.lo; t <= cc.hi; ++t)
                    cc.pslabs.push_back(hierarchy_->slab(sigma.owner, cc.level, cc.guess_index, t));
                result.cover_sizes.push_back(slabs.size());
            }
            st.max_cover_size = std::max<std::uint64_t>(st.max_cover_size, result.cover_sizes.back());
            result.covers.push_back({sigma.owner, cc.level, result.cover_sizes.back(), cc.rslabs, cc.pslabs});
            covers[idx].push_back(std::move(cc));
        }
    }
    // Crossed cells without a traced piece may hide a component below the
    // tracing resolution.
    for (int idx = 0; idx < nc; ++idx)
        if (crossed[idx] && !covered[idx]) exact[idx] = 1;

    std::vector<char> taken(points_.size(), 0);
    std::vector<int> out;
    auto report = [&](int id) {
        ++st.dedup_checks;
        if (!taken[id]) {
            taken[id] = 1;
            out.push_back(id);
        }
    };

    for (int idx = 0; idx < nc; ++idx) {
        if (!crossed[idx]) continue;
        ++st.crossed_cells;
        const Cell cell = grid_.cell_at(idx);
        const std::vector<int>& bucket = buckets_[idx];

        if (exact[idx]) {
            ++st.exact_cells;
            ++st.regions_enumerated;
            for (int id : bucket) {
                ++st.points_scanned;
                if (inside(points_[id])) report(id);
            }
            result.regions.push_back({Region::Kind::ExactCell, cell.col, cell.row, cell.row, false, bucket.size()});
            continue;
        }

        // 3. slab scans
        for (const CellCover& cc : covers[idx]) {
            auto scan = [&](const std::vector<int>& ids) {
                ++st.slabs_visited;
                for (int id : ids) {
                    ++st.points_scanned;
                    if (inside(points_[id])) report(id);
                }
            };
            for (const RotatedSlab& s : cc.rslabs) scan(slab_points(s));
            for (const PolySlab& s : cc.pslabs) scan(slab_points(s));
        }

        // 4b. type-2 faces: points outside every strip union, grouped by the
        // side of each union they fall on (and, for curved boundaries, by the
        // x-interval on which the boundaries are mutually ordered).
        const Box box = grid_.box(cell);
        std::vector<double> cuts;
        if (config_.mode == Mode::Derivative) {
            // Boundary curves as polynomials in h = x - x0.
            std::vector<std::vector<double>> curves;
            for (const CellCover& cc : covers[idx]) {
                const PolySlab& first = cc.pslabs.front();
                std::vector<double> shape(first.level + 1, 0.0);
                double fact = 1.0;
                for (int j = 1; j <= first.level; ++j) {
                    fact *= j;
                    shape[j] = first.guesses[j - 1] / fact;
                }
                if (cc.lo > 0) {
                    shape[0] = first.base + cc.lo * first.vertical_width;
                    curves.push_back(shape);
                }
                if (cc.hi < first.anchor_count - 1) {
                    shape[0] = first.base + (cc.hi + 1) * first.vertical_width;
                    curves.push_back(shape);
                }
            }
            const double side = box.width();
            for (std::size_t a = 0; a < curves.size(); ++a) {
                for (double level : {box.y0, box.y1}) {
                    std::vector<double> d = curves[a];
                    d[0] -= level;
                    upoly::trim(d);
                    if (d.size() > 1)
                        for (double r : upoly::real_roots(d, 0.0, side)) cuts.push_back(box.x0 + r);
                }
                for (std::size_t b = a + 1; b < curves.size(); ++b) {
                    std::vector<double> d = upoly::sub(curves[a], curves[b]);
                    upoly::trim(d, 1e-15);
                    if (d.size() > 1)
                        for (double r : upoly::real_roots(d, 0.0, side)) cuts.push_back(box.x0 + r);
                }
            }
            std::sort(cuts.begin(), cuts.end());
        }

        std::map<std::vector<int>, std::vector<int>> faces;
        for (int id : bucket) {
            const Vec2 p = points_[id];
            std::vector<int> key;
            key.reserve(covers[idx].size() + 1);
            bool in_strip = false;
            for (const CellCover& cc : covers[idx]) {
                const int t = cc.rotated ? catalog_.offset_of(cell, cc.angle_index, cc.level, p)
                                         : hierarchy_->anchor_of(cell, cc.level, cc.guess_index, p);
                if (t >= cc.lo && t <= cc.hi) {
                    in_strip = true;
                    break;
                }
                key.push_back(t < cc.lo ? 0 : 1);
            }
            if (in_strip) continue;
            key.push_back(static_cast<int>(std::upper_bound(cuts.begin(), cuts.end(), p.x) - cuts.begin()));
            faces[key].push_back(id);
        }
        for (const auto& [key, ids] : faces) {
            ++st.regions_enumerated;
            ++st.type2_faces;
            std::optional<bool> verdict;
            for (int id : ids) {
                ++st.points_scanned;
                if (!ambiguous(points_[id])) {
                    verdict = inside(points_[id]);
                    break;
                }
            }
            if (!verdict) {
                throw Error(ErrorKind::Ambiguous, "every point of a face in cell (" + std::to_string(cell.row) +
                                                      "," + std::to_string(cell.col) + ") lies on the boundary");
            }
            if (*verdict) {
                for (int id : ids) {
                    ++st.points_scanned;
                    report(id);
                }
            }
            result.regions.push_back({Region::Kind::Face, cell.col, cell.row, cell.row, *verdict, ids.size()});
        }
    }

    // 4a. type-1 chunks: maximal runs of uncrossed cells in each column
    const int q = grid_.q();
    for (int col = 0; col < q; ++col) {
        int row = 0;
        while (row < q) {
            if (crossed[grid_.index({row, col})]) {
                ++row;
                continue;
            }
            const int start = row;
            while (row < q && !crossed[grid_.index({row, col})]) ++row;
            const Box b = grid_.box({start, col});
            const Vec2 centre{0.5 * (b.x0 + b.x1), 0.5 * (b.y0 + b.y1)};
            const bool in = inside(centre);
            ++st.regions_enumerated;
            ++st.type1_chunks;
            std::size_t count = 0;
            for (int r = start; r < row; ++r) {
                const auto& bucket = buckets_[grid_.index({r, col})];
                count += bucket.size();
                if (in)
                    for (int id : bucket) {
                        ++st.points_scanned;
                        report(id);
                    }
            }
            result.regions.push_back({Region::Kind::Chunk, col, start, row - 1, in, count});
        }
    }

    std::sort(out.begin(), out.end());
    st.output_size = out.size();
    result.ids = std::move(out);
    return result;
}

// ---------------------------------------------------------------------------
// Space accounting

SpaceReport RangeStructure::space_report(std::uint64_t budget, std::uint64_t seed) const {
    SpaceReport rep;
    rep.beta = config_.beta();
    const double beta = rep.beta;
    const double n = static_cast<double>(points_.size());
    const int q = grid_.q();
    std::uint64_t nonempty = 0;

    auto account = [&](std::vector<int>& offsets, double scale, double tradeoff_div) {
        std::sort(offsets.begin(), offsets.end());
        for (std::size_t a = 0; a < offsets.size();) {
            std::size_t b = a;
            while (b < offsets.size() && offsets[b] == offsets[a]) ++b;
            const double c = static_cast<double>(b - a);
            rep.modeled_space += scale * std::pow(c, beta);
            if (tradeoff_div > 0) rep.tradeoff_space += scale * std::pow(c / tradeoff_div, beta);
            rep.slab_histogram[b - a] += static_cast<std::uint64_t>(std::llround(scale));
            nonempty += static_cast<std::uint64_t>(std::llround(scale));
            a = b;
        }
    };

    std::vector<int> offsets;
    if (config_.mode == Mode::Curvature) {
        rep.slabs = catalog_.total_count();
        std::vector<double> proj;
        for (int idx = 0; idx < grid_.cell_count(); ++idx) {
            const Cell cell = grid_.cell_at(idx);
            const auto& bucket = buckets_[idx];
            if (bucket.empty()) continue;
            for (int j = 1; j <= catalog_.angle_count(); ++j) {
                for (int level = 0; level < catalog_.level_count(); ++level) {
                    offsets.clear();
                    for (int id : bucket) offsets.push_back(catalog_.offset_of(cell, j, level, points_[id]));
                    account(offsets, 1.0, q * catalog_.alpha(level));
                }
            }
        }
        rep.prediction_exponent = curvature_space_exponent(rep.beta);
    } else {
        const ISlabHierarchy& h = *hierarchy_;
        const int level = config_.order;
        const std::uint64_t families = h.families_per_cell(level);
        std::vector<int> radix(level);
        for (int j = 1; j <= level; ++j) radix[j - 1] = h.guess_count(level, j);
        auto decode = [&](std::uint64_t code) {
            std::vector<int> g(level);
            for (int j = 0; j < level; ++j) {
                g[j] = static_cast<int>(code % radix[j]);
                code /= radix[j];
            }
            return g;
        };
        const double work = static_cast<double>(families) * std::max(1.0, n);
        std::vector<std::uint64_t> codes;
        double scale = 1.0;
        if (work <= static_cast<double>(budget)) {
            for (std::uint64_t c = 0; c < families; ++c) codes.push_back(c);
        } else {
            rep.estimated = true;
            const std::uint64_t samples = std::max<std::uint64_t>(1, budget / std::max<std::uint64_t>(1, points_.size()));
            std::mt19937_64 rng(seed);
            std::uniform_int_distribution<std::uint64_t> pick(0, families - 1);
            for (std::uint64_t s = 0; s < samples; ++s) codes.push_back(pick(rng));
            scale = static_cast<double>(families) / static_cast<double>(samples);
        }
        double slabs = 0.0;
        for (std::uint64_t code : codes) {
            const std::vector<int> g = decode(code);
            slabs += scale * h.anchor_count(level, g) * grid_.cell_count();
            for (int idx = 0; idx < grid_.cell_count(); ++idx) {
                const Cell cell = grid_.cell_at(idx);
                offsets.clear();
                for (int id : buckets_[idx]) offsets.push_back(h.anchor_of(cell, level, g, points_[id]));
                account(offsets, scale, 0.0);
            }
        }
        rep.slabs = static_cast<std::uint64_t>(std::llround(slabs));
        rep.prediction_exponent = derivative_space_exponent(rep.beta, h.delta());
    }
    rep.modeled_space += n;
    if (config_.mode == Mode::Curvature) rep.tradeoff_space += n;
    if (rep.slabs >= nonempty) rep.slab_histogram[0] = rep.slabs - nonempty;
    rep.prediction = std::pow(n, beta) / std::pow(static_cast<double>(q), rep.prediction_exponent);
    return rep;
}

}  // namespace rangelab
