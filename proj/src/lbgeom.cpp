#include "rangelab/lbgeom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "rangelab/error.hpp"
#include "rangelab/format.hpp"

namespace rangelab {

const char* to_string(LBMode mode) {
    return mode == LBMode::ScheduleAudit ? "schedule_audit" : "geometry";
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------
// Parameters

namespace {

constexpr double kIndexLimit = 4.0e18;

std::int64_t grid_floor(double ratio) {
    if (!(ratio < kIndexLimit)) return static_cast<std::int64_t>(kIndexLimit);
    return static_cast<std::int64_t>(std::floor(ratio));
}

void fill_counts(LBParams& p) {
    p.beta = monic_param_count(p.dim, p.degree);
    p.beta_plane = monic_param_count(2, p.degree);
    p.beta_plane_pairs = binomial(static_cast<int>(p.beta_plane), 2);
    const double b = static_cast<double>(p.beta);
    const double bb = static_cast<double>(p.beta_plane_pairs);
    p.n_exponent = b;
    p.q_exponent = b + 2 * b * bb + b * (p.dim - 2) * p.degree - 1;
}

}  // namespace

double LBParams::family_size() const { return std::exp2(log2_family_size); }

std::int64_t LBParams::grid_min() const { return grid_floor(coeff_scale / (2 * grid_step)); }

std::int64_t LBParams::grid_max() const { return grid_floor(coeff_scale / grid_step); }

LBParams lb_parameters(double n, double Q, int D, int degree, double c_w) {
    if (!(n >= 4) || !(Q >= 2) || D < 2 || degree < 2 || !(c_w > 0))
        throw Error(ErrorKind::Contract, "lb_parameters needs n >= 4, Q >= 2, D >= 2, degree >= 2, c_w > 0");
    LBParams p;
    p.mode = LBMode::ScheduleAudit;
    p.n = n;
    p.Q = Q;
    p.dim = D;
    p.degree = degree;
    p.c_w = c_w;
    fill_counts(p);

    const double bb = static_cast<double>(p.beta_plane_pairs);
    const double root_log = std::sqrt(std::log2(n));
    p.slab_width = c_w * Q / n;
    p.delta = p.slab_width * std::pow(Q, bb);
    p.eta = Q;
    p.tau = std::exp2(root_log);
    p.coeff_scale = 1.0 / (std::pow(Q, bb) * std::exp2(bb * root_log));
    p.grid_step = p.delta * std::pow(p.tau, bb) * std::pow(p.eta_tau(), (D - 2) * degree);
    p.closeness_exponent = bb + (D - 2) * degree;

    // Logs keep the family size finite where the doubles would not be.
    const double log2_scale = -bb * std::log2(Q) - bb * root_log;
    const double log2_step = std::log2(c_w) + std::log2(Q) - std::log2(n) + bb * std::log2(Q) +
                             bb * root_log + (D - 2) * degree * (std::log2(Q) + root_log);
    p.log2_family_size = static_cast<double>(p.beta) * (log2_scale - log2_step);

    if (p.coeff_scale >= 0.1)
        p.warnings.push_back("coeff_scale " + format_double(p.coeff_scale) + " is not small");
    if (p.slab_width >= 0.1 * p.coeff_scale)
        p.warnings.push_back("slab_width " + format_double(p.slab_width) + " is not below coeff_scale " +
                             format_double(p.coeff_scale));
    if (p.coeff_scale / (2 * p.grid_step) < 1)
        p.warnings.push_back("coefficient grid is empty: coeff_scale / (2 grid_step) = " +
                             format_double(p.coeff_scale / (2 * p.grid_step)));
    return p;
}

LBParams geometry_parameters(int D, int degree, double eta_tau, double coeff_scale, double grid_span,
                             double closeness_exponent) {
    if (D < 2 || degree < 2 || !(eta_tau > 1) || !(coeff_scale > 0 && coeff_scale < 1) ||
        !(grid_span >= 2) || !(closeness_exponent > 0))
        throw Error(ErrorKind::Contract, "geometry_parameters: invalid arguments");
    LBParams p;
    p.mode = LBMode::Geometry;
    p.dim = D;
    p.degree = degree;
    fill_counts(p);
    const double bb = static_cast<double>(p.beta_plane_pairs);
    p.eta = std::sqrt(eta_tau);
    p.tau = eta_tau / p.eta;
    p.coeff_scale = coeff_scale;
    p.grid_step = coeff_scale / grid_span;
    p.closeness_exponent = closeness_exponent;
    p.slab_width = p.grid_step * std::pow(eta_tau, -closeness_exponent);
    p.delta = p.grid_step / (std::pow(p.tau, bb) * std::pow(eta_tau, (D - 2) * degree));
    p.Q = p.eta;
    p.n = p.c_w * p.Q / p.slab_width;
    p.log2_family_size = static_cast<double>(p.beta) * std::log2(grid_span);
    return p;
}

// ---------------------------------------------------------------------------
// Packed polynomials

std::vector<MultiIndex> packed_indices(int D, int degree) {
    if (D < 2 || degree < 1) throw Error(ErrorKind::Contract, "packed_indices needs D >= 2, degree >= 1");
    std::vector<MultiIndex> out;
    MultiIndex idx(D, 0);
    // Odometer over [0, degree]^D, keeping total degree <= degree.
    while (true) {
        if (total_degree(idx) <= degree) {
            bool excluded = idx[1] == degree;
            if (excluded)
                for (int a = 0; a < D; ++a)
                    if (a != 1 && idx[a] != 0) excluded = false;
            if (!excluded) out.push_back(idx);
        }
        int a = D - 1;
        while (a >= 0 && idx[a] == degree) idx[a--] = 0;
        if (a < 0) break;
        ++idx[a];
    }
    std::sort(out.begin(), out.end());
    return out;
}

PackedPoly PackedPoly::base(int D, int degree) {
    PackedPoly p;
    p.dim = D;
    p.degree = degree;
    p.indices = packed_indices(D, degree);
    p.coeffs.assign(p.indices.size(), 0.0);
    return p;
}

MultiPoly PackedPoly::poly() const {
    MultiPoly out(dim);
    MultiIndex x1(dim, 0), x2(dim, 0);
    x1[0] = 1;
    x2[1] = degree;
    out.add_term(x1, 1.0);
    out.add_term(x2, -1.0);
    for (std::size_t i = 0; i < indices.size(); ++i)
        if (coeffs[i] != 0.0) out.add_term(indices[i], coeffs[i]);
    return out;
}

double PackedPoly::coeff(const MultiIndex& index) const {
    const auto it = std::lower_bound(indices.begin(), indices.end(), index);
    if (it == indices.end() || *it != index) throw Error(ErrorKind::Contract, "index is not a packed coefficient");
    return coeffs[static_cast<std::size_t>(it - indices.begin())];
}

void PackedPoly::validate(double coeff_scale, double cap) const {
    if (indices != packed_indices(dim, degree) || coeffs.size() != indices.size())
        throw Error(ErrorKind::Contract, "packed polynomial has the wrong index set");
    const double hi = cap * coeff_scale * (1 + 1e-12);
    for (double c : coeffs)
        if (!(c >= 0.0 && c <= hi))
            throw Error(ErrorKind::Contract, "packed coefficient " + format_double(c) + " outside [0, " +
                                                 format_double(cap * coeff_scale) + "]");
}

PackedPoly PackedPoly::shifted(double r) const {
    PackedPoly out = *this;
    out.coeffs[0] -= r;  // indices are sorted, so the constant term comes first
    if (!grid.empty()) {
        const double steps = r / grid_step;
        if (steps == std::round(steps)) {
            out.grid[0] -= static_cast<std::int64_t>(steps);
            out.coeffs[0] = static_cast<double>(out.grid[0]) * grid_step;
        } else
            out.grid.clear();
    }
    return out;
}

bool distant(const PackedPoly& a, const PackedPoly& b) {
    if (a.indices != b.indices) return false;
    // Every nonzero difference of grid coordinates is at least one step.
    if (!a.grid.empty() && !b.grid.empty() && a.grid_step == b.grid_step) return true;
    const double step = std::max(a.grid_step, b.grid_step);
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
        const double d = std::abs(a.coeffs[i] - b.coeffs[i]);
        if (d != 0.0 && d < step * (1 - 1e-9)) return false;
    }
    return true;
}

std::vector<PackedPoly> packed_family_sample(const LBParams& params, std::size_t count, std::uint64_t seed) {
    if (!(params.grid_step > 0) || params.coeff_scale / (2 * params.grid_step) < 1)
        throw Error(ErrorKind::EmptyGrid, "coeff_scale / (2 grid_step) = " +
                                              format_double(params.coeff_scale / (2 * params.grid_step)) +
                                              " < 1");
    const std::int64_t lo = params.grid_min(), hi = params.grid_max();
    std::mt19937_64 rng(stream_seed(seed, 0));
    std::uniform_int_distribution<std::int64_t> pick(lo, hi);
    std::vector<PackedPoly> out;
    out.reserve(count);
    while (out.size() < count) {
        PackedPoly p = PackedPoly::base(params.dim, params.degree);
        p.grid_step = params.grid_step;
        p.grid.resize(p.indices.size());
        for (std::size_t i = 0; i < p.grid.size(); ++i) {
            p.grid[i] = pick(rng);
            p.coeffs[i] = static_cast<double>(p.grid[i]) * params.grid_step;
        }
        bool fresh = true;
        for (const PackedPoly& q : out) {
            if (q.grid == p.grid) {
                fresh = false;
                break;
            }
            if (!distant(p, q)) throw Error(ErrorKind::Contract, "grid sample failed the distant check");
        }
        if (fresh) out.push_back(std::move(p));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Axis roots

namespace {

/// A polynomial viewed as univariate in X1 with coefficients depending on the base point.
class AxisSlice {
public:
    explicit AxisSlice(const MultiPoly& p) : dim_(p.dim()) {
        for (const auto& [idx, c] : p.terms()) {
            terms_.push_back({idx, c});
            order_ = std::max(order_, idx[0]);
        }
        coeffs_.resize(static_cast<std::size_t>(order_) + 1);
    }

    double root(std::span<const double> base) {
        if (static_cast<int>(base.size()) != dim_ - 1)
            throw Error(ErrorKind::Contract, "base point has the wrong dimension");
        std::fill(coeffs_.begin(), coeffs_.end(), 0.0);
        for (const Term& t : terms_) {
            double v = t.c;
            for (int a = 1; a < dim_; ++a)
                for (int e = 0; e < t.idx[a]; ++e) v *= base[a - 1];
            coeffs_[t.idx[0]] += v;
        }
        double lo = 0.0, hi = 10.0;
        double f_lo = eval(lo), f_hi = eval(hi);
        if (f_lo == 0.0) return lo;
        if (!(f_lo < 0.0 && f_hi > 0.0))
            throw Error(ErrorKind::NonPacked, "no X1-root bracketed by [0, 10]");
        double x = 0.5 * (lo + hi);
        for (int it = 0; it < 200; ++it) {
            double fx, dfx;
            eval(x, fx, dfx);
            if (fx == 0.0) return x;
            (fx < 0.0 ? lo : hi) = x;
            double next = dfx > 0.0 ? x - fx / dfx : lo - 1.0;
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::abs(next - x) <= 2 * std::numeric_limits<double>::epsilon() * std::max(1.0, x) ||
                next == lo || next == hi)
                return next;
            x = next;
        }
        return x;
    }

private:
    struct Term {
        MultiIndex idx;
        double c;
    };

    double eval(double x) const {
        double v = 0.0;
        for (int k = order_; k >= 0; --k) v = v * x + coeffs_[k];
        return v;
    }

    void eval(double x, double& v, double& dv) const {
        v = 0.0;
        dv = 0.0;
        for (int k = order_; k >= 0; --k) {
            dv = dv * x + v;
            v = v * x + coeffs_[k];
        }
    }

    int dim_;
    int order_ = 0;
    std::vector<Term> terms_;
    std::vector<double> coeffs_;
};

constexpr std::size_t kChunk = 4096;

/// Runs `sample(rng, base)` over `samples` uniform base points in [1,2]^{dim-1},
/// chunked into independent streams, and returns the mean and standard error.
template <class F>
McEstimate base_point_mean(int dim, std::size_t samples, std::uint64_t seed, F&& sample) {
    if (samples == 0) throw Error(ErrorKind::Contract, "Monte Carlo needs at least one sample");
    std::vector<double> base(static_cast<std::size_t>(dim - 1));
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t chunk = 0, done = 0; done < samples; ++chunk) {
        std::mt19937_64 rng(stream_seed(seed, chunk));
        std::uniform_real_distribution<double> unit(1.0, 2.0);
        const std::size_t m = std::min(kChunk, samples - done);
        for (std::size_t i = 0; i < m; ++i) {
            for (double& b : base) b = unit(rng);
            const double v = sample(std::span<const double>(base));
            sum += v;
            sum_sq += v * v;
        }
        done += m;
    }
    const double n = static_cast<double>(samples);
    const double mean = sum / n;
    const double var = samples > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1)) : 0.0;
    return {mean, std::sqrt(var / n), samples};
}

}  // namespace

double axis_root(const MultiPoly& p, std::span<const double> base) { return AxisSlice(p).root(base); }

double axis_distance(const MultiPoly& p1, const MultiPoly& p2, std::span<const double> base) {
    return std::abs(axis_root(p1, base) - axis_root(p2, base));
}

double axis_distance(const PackedPoly& p1, const PackedPoly& p2, std::span<const double> base) {
    return axis_distance(p1.poly(), p2.poly(), base);
}

McEstimate close_region_measure(const PackedPoly& p1, const PackedPoly& p2, double slab_width,
                                std::size_t samples, std::uint64_t seed, double factor) {
    if (p1.dim != p2.dim || p1.coeffs == p2.coeffs)
        throw Error(ErrorKind::Contract, "close_region_measure needs two distinct polynomials");
    if (!distant(p1, p2)) throw Error(ErrorKind::Contract, "close_region_measure needs a distant pair");
    AxisSlice a(p1.poly()), b(p2.poly());
    const double threshold = factor * slab_width;
    return base_point_mean(p1.dim, samples, seed, [&](std::span<const double> base) {
        return std::abs(a.root(base) - b.root(base)) <= threshold ? 1.0 : 0.0;
    });
}

McEstimate base_measure(const PackedPoly& p, std::size_t samples, std::uint64_t seed) {
    AxisSlice s(p.poly());
    return base_point_mean(p.dim, samples, seed, [&](std::span<const double> base) {
        const double x = s.root(base);
        return x >= 1.0 && x <= 2.0 ? 1.0 : 0.0;
    });
}

McEstimate slab_measure(const PackedPoly& p, double r, std::size_t samples, std::uint64_t seed) {
    if (!(r > 0)) throw Error(ErrorKind::Contract, "slab_measure needs r > 0");
    AxisSlice lower(p.poly()), upper(p.poly() - MultiPoly::constant(p.dim, r));
    return base_point_mean(p.dim, samples, seed, [&](std::span<const double> base) {
        const double a = std::max(1.0, lower.root(base));
        const double b = std::min(2.0, upper.root(base));
        return std::max(0.0, b - a);
    });
}

std::pair<PackedPoly, PackedPoly> crossing_pair(const LBParams& params, std::uint64_t seed, int steps) {
    if (steps < 1) throw Error(ErrorKind::Contract, "crossing_pair needs steps >= 1");
    PackedPoly first = packed_family_sample(params, 1, seed).front();
    const std::int64_t lo = params.grid_min(), hi = params.grid_max();
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (mid - 3 * steps < lo || mid + 2 * steps > hi)
        throw Error(ErrorKind::EmptyGrid, "coefficient grid too narrow for a crossing pair");

    MultiIndex constant(params.dim, 0), linear(params.dim, 0);
    linear[1] = 1;
    auto slot = [&](const MultiIndex& idx) {
        return static_cast<std::size_t>(std::lower_bound(first.indices.begin(), first.indices.end(), idx) -
                                         first.indices.begin());
    };
    const std::size_t c0 = slot(constant), c1 = slot(linear);
    first.grid[c0] = mid;
    first.grid[c1] = mid;
    PackedPoly second = first;
    second.grid[c0] -= 3 * steps;
    second.grid[c1] += 2 * steps;
    for (PackedPoly* p : {&first, &second})
        for (std::size_t i = 0; i < p->grid.size(); ++i)
            p->coeffs[i] = static_cast<double>(p->grid[i]) * params.grid_step;
    return {first, second};
}

double loglog_slope(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw Error(ErrorKind::Contract, "loglog_slope needs >= 2 pairs");
    double mx = 0, my = 0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0 && ys[i] > 0)) throw Error(ErrorKind::Contract, "loglog_slope needs positive values");
        mx += std::log(xs[i]) / n;
        my += std::log(ys[i]) / n;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = std::log(xs[i]) - mx;
        sxy += dx * (std::log(ys[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

ScalingStudy close_region_scaling(int D, int degree, const std::vector<double>& eta_taus, std::size_t samples,
                                  std::uint64_t seed, double factor) {
    ScalingStudy study;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < eta_taus.size(); ++i) {
        const LBParams params = geometry_parameters(D, degree, eta_taus[i]);
        const auto [p1, p2] = crossing_pair(params, stream_seed(seed, 2 * i));
        const McEstimate est = close_region_measure(p1, p2, params.slab_width, samples, stream_seed(seed, 2 * i + 1),
                                                    factor);
        study.points.push_back({eta_taus[i], est.value, est.std_error});
        study.fitted_constant = std::max(study.fitted_constant, est.value * eta_taus[i]);
        if (i > 0 && est.value > study.points[i - 1].estimate) ++study.inversions;
        xs.push_back(eta_taus[i]);
        ys.push_back(est.value);
    }
    if (xs.size() >= 2 && std::all_of(ys.begin(), ys.end(), [](double y) { return y > 0; }))
        study.slope = loglog_slope(xs, ys);
    else
        study.slope = std::numeric_limits<double>::quiet_NaN();
    return study;
}

// ---------------------------------------------------------------------------
// Derandomization

MeasurableRange box_range(std::vector<double> lo, std::vector<double> hi) {
    if (lo.size() != hi.size()) throw Error(ErrorKind::Contract, "box corners differ in dimension");
    std::string name = "box";
    for (std::size_t a = 0; a < lo.size(); ++a)
        name += (a ? " x [" : " [") + format_double(lo[a]) + ", " + format_double(hi[a]) + "]";
    return {name, [lo = std::move(lo), hi = std::move(hi)](std::span<const double> x) {
                for (std::size_t a = 0; a < lo.size(); ++a)
                    if (x[a] < lo[a] || x[a] > hi[a]) return false;
                return true;
            }};
}

std::vector<MeasurableRange> axis_strips(int dim, int axis, int count, double width) {
    if (dim < 1 || axis < 0 || axis >= dim || count < 1 || !(width > 0) || count * width > 1)
        throw Error(ErrorKind::Contract, "axis_strips: strips do not fit in the unit cube");
    const double pitch = 1.0 / count;
    std::vector<MeasurableRange> out;
    for (int i = 0; i < count; ++i) {
        std::vector<double> lo(dim, 0.0), hi(dim, 1.0);
        lo[axis] = i * pitch;
        hi[axis] = std::nextafter(i * pitch + width, 0.0);
        out.push_back(box_range(std::move(lo), std::move(hi)));
    }
    return out;
}

double intersection_cap(double n, double k) { return 3 * k * std::sqrt(std::log2(n)); }

namespace {

void uniform_fill(std::vector<double>& pts, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (double& v : pts) v = unit(rng);
}

/// Counts per range and per unordered pair (row-major upper triangle in `pair`).
void count_memberships(const std::vector<MeasurableRange>& ranges, int dim, const std::vector<double>& pts,
                       std::vector<std::size_t>& single, std::vector<std::size_t>& pair) {
    const std::size_t r = ranges.size();
    single.assign(r, 0);
    pair.assign(r * r, 0);
    std::vector<std::size_t> hits;
    for (std::size_t i = 0; i * dim < pts.size(); ++i) {
        const std::span<const double> x(pts.data() + i * dim, static_cast<std::size_t>(dim));
        hits.clear();
        for (std::size_t j = 0; j < r; ++j)
            if (ranges[j].contains(x)) hits.push_back(j);
        for (std::size_t a = 0; a < hits.size(); ++a) {
            ++single[hits[a]];
            for (std::size_t b = a + 1; b < hits.size(); ++b) ++pair[hits[a] * r + hits[b]];
        }
    }
}

}  // namespace

DerandResult derand_simulation(const std::vector<MeasurableRange>& ranges, int dim, std::size_t n, std::size_t t,
                               std::size_t trials, std::uint64_t seed, double k) {
    if (dim < 1 || n < 1 || trials < 1) throw Error(ErrorKind::Contract, "derand_simulation: empty run");
    DerandResult res;
    res.trials = trials;
    res.cap = intersection_cap(static_cast<double>(n), k);
    res.min_range_count = std::numeric_limits<std::size_t>::max();
    std::size_t full = 0, sparse = 0, joint = 0;
    std::vector<double> pts(n * static_cast<std::size_t>(dim));
    std::vector<std::size_t> single, pair;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        std::mt19937_64 rng(stream_seed(seed, trial));
        uniform_fill(pts, rng);
        count_memberships(ranges, dim, pts, single, pair);
        const std::size_t lo = single.empty() ? n : *std::min_element(single.begin(), single.end());
        const std::size_t hi = pair.empty() ? 0 : *std::max_element(pair.begin(), pair.end());
        res.min_range_count = std::min(res.min_range_count, lo);
        res.max_pair_count = std::max(res.max_pair_count, hi);
        const bool ok1 = lo >= t;
        const bool ok2 = static_cast<double>(hi) < res.cap;
        full += ok1;
        sparse += ok2;
        joint += ok1 && ok2;
    }
    const double tr = static_cast<double>(trials);
    res.all_ranges_full = full / tr;
    res.all_pairs_sparse = sparse / tr;
    res.joint = joint / tr;
    return res;
}

DerandPrecheck derand_precheck(const std::vector<MeasurableRange>& ranges, int dim, double n, double t, double c,
                               double pair_constant, std::size_t samples, std::uint64_t seed) {
    if (samples == 0) throw Error(ErrorKind::Contract, "derand_precheck needs samples");
    DerandPrecheck out;
    out.required_measure = 4 * c * t / n;
    out.pair_bound = pair_constant / (n * std::exp2(std::sqrt(std::log2(n))));
    std::vector<std::size_t> single_total(ranges.size(), 0), pair_total(ranges.size() * ranges.size(), 0);
    std::vector<std::size_t> single, pair;
    std::vector<double> pts;
    for (std::size_t chunk = 0, done = 0; done < samples; ++chunk) {
        const std::size_t m = std::min(kChunk, samples - done);
        pts.resize(m * static_cast<std::size_t>(dim));
        std::mt19937_64 rng(stream_seed(seed, chunk));
        uniform_fill(pts, rng);
        count_memberships(ranges, dim, pts, single, pair);
        for (std::size_t i = 0; i < single.size(); ++i) single_total[i] += single[i];
        for (std::size_t i = 0; i < pair.size(); ++i) pair_total[i] += pair[i];
        done += m;
    }
    const double s = static_cast<double>(samples);
    out.min_measure = ranges.empty() ? 0.0 : *std::min_element(single_total.begin(), single_total.end()) / s;
    out.max_pair_measure = pair_total.empty() ? 0.0 : *std::max_element(pair_total.begin(), pair_total.end()) / s;
    out.pass = out.min_measure >= out.required_measure && out.max_pair_measure <= out.pair_bound;
    return out;
}

// ---------------------------------------------------------------------------
// Framework

double framework_bound(double m, double Q, double pair_cap, double alpha, double kappa) {
    if (!(m >= 1) || !(Q >= 1) || !(alpha >= 2) || !(pair_cap >= 2))
        throw Error(ErrorKind::Contract, "framework_bound needs m, Q >= 1, alpha >= 2, c >= 2");
    return m * Q / (alpha * std::exp2(kappa * pair_cap));
}

double framework_bound_sparse(double m, double Q, double n, double k, double kappa) {
    return framework_bound(m, Q, intersection_cap(n, k), 2.0, kappa);
}

}  // namespace rangelab
