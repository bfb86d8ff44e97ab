#include "rangelab/curve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <ostream>
#include <unordered_map>

#include "rangelab/error.hpp"
#include "rangelab/format.hpp"

namespace rangelab {

double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

Grid::Grid(int q) : q_(q) {
    if (q < 2) throw Error(ErrorKind::Contract, "grid needs q >= 2");
}

Box Grid::box(Cell c) const {
    const double q = q_;
    return {c.col / q, c.row / q, (c.col + 1) / q, (c.row + 1) / q};
}

Cell Grid::cell_of(Vec2 p) const {
    auto clampi = [&](double v) { return std::clamp(static_cast<int>(std::floor(v * q_)), 0, q_ - 1); };
    return {clampi(p.y), clampi(p.x)};
}

// ---------------------------------------------------------------------------
// Bernstein sign certificates

namespace {

/// Dense coefficients of P for affine substitution onto boxes.
class BernsteinCertifier {
public:
    explicit BernsteinCertifier(const MultiPoly& p) {
        if (p.dim() != 2) throw Error(ErrorKind::Contract, "certified_sign requires dim 2");
        dx_ = p.is_zero() ? 0 : p.degree_in(0);
        dy_ = p.is_zero() ? 0 : p.degree_in(1);
        a_.assign((dx_ + 1) * (dy_ + 1), 0.0);
        for (const auto& [idx, c] : p.terms()) a_[idx[0] * (dy_ + 1) + idx[1]] = c;
        zero_ = p.is_zero();
        const int d = std::max(dx_, dy_);
        binom_.assign((d + 1) * (d + 1), 0.0);
        for (int n = 0; n <= d; ++n)
            for (int k = 0; k <= n; ++k) binom_[n * (d + 1) + k] = static_cast<double>(binomial(n, k));
        bd_ = d + 1;
    }

    int sign(const Box& b, int depth) const {
        const int s = sign_once(b);
        if (s != 0 || depth <= 0) return s;
        const double mx = 0.5 * (b.x0 + b.x1), my = 0.5 * (b.y0 + b.y1);
        const Box parts[4] = {{b.x0, b.y0, mx, my}, {mx, b.y0, b.x1, my}, {b.x0, my, mx, b.y1}, {mx, my, b.x1, b.y1}};
        const int first = sign(parts[0], depth - 1);
        if (first == 0) return 0;
        for (int k = 1; k < 4; ++k)
            if (sign(parts[k], depth - 1) != first) return 0;
        return first;
    }

private:
    double C(int n, int k) const { return binom_[n * bd_ + k]; }

    int sign_once(const Box& b) const {
        if (zero_) return 0;
        const int sx = dx_ + 1, sy = dy_ + 1;
        std::vector<double> t(a_);
        const double w = b.width(), h = b.height();
        // x -> x0 + w u in every row of fixed y-power
        std::vector<double> tmp(sx);
        for (int j = 0; j < sy; ++j) {
            for (int k = 0; k < sx; ++k) {
                double acc = 0.0, pw = 1.0;
                for (int i = k; i < sx; ++i) {
                    acc += C(i, k) * pw * t[i * sy + j];
                    pw *= b.x0;
                }
                tmp[k] = acc * std::pow(w, k);
            }
            for (int k = 0; k < sx; ++k) t[k * sy + j] = tmp[k];
        }
        std::vector<double> tmpy(sy);
        for (int i = 0; i < sx; ++i) {
            for (int k = 0; k < sy; ++k) {
                double acc = 0.0, pw = 1.0;
                for (int j = k; j < sy; ++j) {
                    acc += C(j, k) * pw * t[i * sy + j];
                    pw *= b.y0;
                }
                tmpy[k] = acc * std::pow(h, k);
            }
            for (int k = 0; k < sy; ++k) t[i * sy + k] = tmpy[k];
        }
        // power basis on [0,1]^2 -> tensor Bernstein coefficients
        double lo = INFINITY, hi = -INFINITY, mag = 0.0;
        for (int k = 0; k < sx; ++k)
            for (int l = 0; l < sy; ++l) {
                double acc = 0.0;
                for (int i = 0; i <= k; ++i) {
                    const double fx = C(k, i) / C(dx_, i);
                    for (int j = 0; j <= l; ++j) acc += fx * C(l, j) / C(dy_, j) * t[i * sy + j];
                }
                lo = std::min(lo, acc);
                hi = std::max(hi, acc);
                mag = std::max(mag, std::abs(acc));
            }
        const double margin = 1e-12 * mag;
        if (lo > margin) return 1;
        if (hi < -margin) return -1;
        return 0;
    }

    int dx_ = 0, dy_ = 0, bd_ = 1;
    bool zero_ = true;
    std::vector<double> a_;
    std::vector<double> binom_;
};

// Root of g on [0, 1] given g(0), g(1) of opposite sign (zero counts as
// positive). Illinois false position.
template <class F>
double edge_root(F&& g, double g0, double g1) {
    double a = 0.0, b = 1.0, fa = g0, fb = g1;
    int side = 0;
    for (int it = 0; it < 100; ++it) {
        const double c = (a * fb - b * fa) / (fb - fa);
        if (!(c > a && c < b)) break;
        const double fc = g(c);
        if (fc == 0.0) return c;
        if ((fc >= 0) == (fa >= 0)) {
            a = c;
            fa = fc;
            if (side == -1) fb *= 0.5;
            side = -1;
        } else {
            b = c;
            fb = fc;
            if (side == 1) fa *= 0.5;
            side = 1;
        }
        if (b - a < 1e-16) break;
    }
    return std::abs(fa) < std::abs(fb) ? a : b;
}

Vec2 newton_project(const DenseBivariate& dp, Vec2 p, int iterations = 8) {
    for (int it = 0; it < iterations; ++it) {
        double v, px, py;
        dp.eval_grad(p.x, p.y, v, px, py);
        const double g2 = px * px + py * py;
        if (std::abs(v) <= 1e-15 || g2 == 0.0) break;
        p.x -= v * px / g2;
        p.y -= v * py / g2;
    }
    return p;
}

}  // namespace

int certified_sign(const MultiPoly& p, const Box& box, int depth) {
    return BernsteinCertifier(p).sign(box, depth);
}

std::vector<Cell> uncertified_cells(const MultiPoly& p, const Grid& grid, int depth) {
    const BernsteinCertifier cert(p);
    std::vector<Cell> out;
    for (int r = 0; r < grid.q(); ++r)
        for (int c = 0; c < grid.q(); ++c)
            if (cert.sign(grid.box({r, c}), depth) == 0) out.push_back({r, c});
    return out;
}

// ---------------------------------------------------------------------------
// Tracing

std::vector<Polyline> trace_on_lattice(const MultiPoly& p, const Box& box, int n) {
    if (p.dim() != 2) throw Error(ErrorKind::Contract, "trace requires a bivariate polynomial");
    if (p.is_zero()) throw Error(ErrorKind::Contract, "cannot trace the zero set of the zero polynomial");
    if (n < 1) throw Error(ErrorKind::Contract, "lattice needs at least one leaf");
    const DenseBivariate dp(p);
    const BernsteinCertifier cert(p);

    auto X = [&](int i) { return i == n ? box.x1 : box.x0 + box.width() * (static_cast<double>(i) / n); };
    auto Y = [&](int j) { return j == n ? box.y1 : box.y0 + box.height() * (static_cast<double>(j) / n); };

    std::vector<Vec2> points;
    std::unordered_map<std::uint64_t, int> edge_point;
    std::vector<std::array<int, 2>> segments;
    const std::uint64_t stride = static_cast<std::uint64_t>(n) + 1;

    // Crossing on the lattice edge from vertex (i, j) in direction dir (0 = +x, 1 = +y).
    auto crossing = [&](int i, int j, int dir, double f0, double f1) -> int {
        const std::uint64_t key = ((static_cast<std::uint64_t>(j) * stride + i) << 1) | dir;
        if (auto it = edge_point.find(key); it != edge_point.end()) return it->second;
        const Vec2 a{X(i), Y(j)};
        const Vec2 b = dir == 0 ? Vec2{X(i + 1), Y(j)} : Vec2{X(i), Y(j + 1)};
        auto g = [&](double t) { return dp(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)); };
        const double t = edge_root(g, f0, f1);
        Vec2 pt{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
        if (dir == 0) pt.y = a.y;
        else pt.x = a.x;
        if (std::abs(dp(pt.x, pt.y)) > 1e-9) pt = newton_project(dp, pt);
        const int id = static_cast<int>(points.size());
        points.push_back(pt);
        edge_point.emplace(key, id);
        return id;
    };

    auto leaf = [&](int i, int j) {
        const double f00 = dp(X(i), Y(j)), f10 = dp(X(i + 1), Y(j));
        const double f01 = dp(X(i), Y(j + 1)), f11 = dp(X(i + 1), Y(j + 1));
        const bool s00 = f00 >= 0, s10 = f10 >= 0, s01 = f01 >= 0, s11 = f11 >= 0;
        int bottom = -1, right = -1, top = -1, left = -1;
        if (s00 != s10) bottom = crossing(i, j, 0, f00, f10);
        if (s10 != s11) right = crossing(i + 1, j, 1, f10, f11);
        if (s01 != s11) top = crossing(i, j + 1, 0, f01, f11);
        if (s00 != s01) left = crossing(i, j, 1, f00, f01);
        std::array<int, 4> cr{bottom, right, top, left};
        const int count = static_cast<int>(std::count_if(cr.begin(), cr.end(), [](int v) { return v >= 0; }));
        if (count == 2) {
            int a = -1, b = -1;
            for (int v : cr)
                if (v >= 0) (a < 0 ? a : b) = v;
            segments.push_back({a, b});
        } else if (count == 4) {
            const bool center = dp(0.5 * (X(i) + X(i + 1)), 0.5 * (Y(j) + Y(j + 1))) >= 0;
            if (center == s00) {
                segments.push_back({bottom, right});
                segments.push_back({top, left});
            } else {
                segments.push_back({left, bottom});
                segments.push_back({right, top});
            }
        }
    };

    std::function<void(int, int, int, int)> visit = [&](int i0, int i1, int j0, int j1) {
        const bool small = (i1 - i0) <= 2 && (j1 - j0) <= 2;
        if (!small && cert.sign({X(i0), Y(j0), X(i1), Y(j1)}, 0) != 0) return;
        if (i1 - i0 == 1 && j1 - j0 == 1) {
            leaf(i0, j0);
            return;
        }
        const int im = (i1 - i0 > 1) ? (i0 + i1) / 2 : i1;
        const int jm = (j1 - j0 > 1) ? (j0 + j1) / 2 : j1;
        visit(i0, im, j0, jm);
        if (im < i1) visit(im, i1, j0, jm);
        if (jm < j1) {
            visit(i0, im, jm, j1);
            if (im < i1) visit(im, i1, jm, j1);
        }
    };
    visit(0, n, 0, n);

    // Chain segments through shared crossings.
    std::vector<std::array<int, 2>> adj(points.size(), {-1, -1});
    std::vector<int> degree(points.size(), 0);
    for (int s = 0; s < static_cast<int>(segments.size()); ++s)
        for (int e : segments[s]) {
            if (degree[e] < 2) adj[e][degree[e]] = s;
            ++degree[e];
        }
    std::vector<char> used(segments.size(), 0);
    std::vector<Polyline> lines;
    auto walk = [&](int start) {
        Polyline line{points[start]};
        int cur = start;
        while (true) {
            int next_seg = -1;
            for (int k = 0; k < std::min(degree[cur], 2); ++k)
                if (!used[adj[cur][k]]) {
                    next_seg = adj[cur][k];
                    break;
                }
            if (next_seg < 0) break;
            used[next_seg] = 1;
            const auto& sg = segments[next_seg];
            cur = sg[0] == cur ? sg[1] : sg[0];
            line.push_back(points[cur]);
            if (cur == start) break;
        }
        if (line.size() >= 2) lines.push_back(std::move(line));
    };
    for (int v = 0; v < static_cast<int>(points.size()); ++v)
        if (degree[v] == 1) walk(v);
    for (int s = 0; s < static_cast<int>(segments.size()); ++s)
        if (!used[s]) walk(segments[s][0]);
    return lines;
}

std::vector<Polyline> trace_zero_set(const MultiPoly& p, const Box& box, double step) {
    if (!(step > 0)) throw Error(ErrorKind::Contract, "trace step must be positive");
    const double diag = std::hypot(box.width(), box.height());
    const int n = std::max(1, static_cast<int>(std::ceil(diag / step)));
    return trace_on_lattice(p, box, n);
}

std::vector<Polyline> trace_for_grid(const MultiPoly& p, const Grid& grid, double step) {
    if (step <= 0) step = default_step(grid);
    const int per_cell = std::max(1, static_cast<int>(std::ceil(std::sqrt(2.0) * grid.side() / step)));
    return trace_on_lattice(p, kUnitSquare, per_cell * grid.q());
}

std::vector<Cell> crossed_cells(const MultiPoly& p, const Grid& grid, double step) {
    constexpr double kTol = 1e-9;
    const int q = grid.q();
    std::vector<char> hit(grid.cell_count(), 0);
    auto range = [&](double v, int& lo, int& hi) {
        lo = std::max(0, static_cast<int>(std::floor((v - kTol) * q)));
        hi = std::min(q - 1, static_cast<int>(std::floor((v + kTol) * q)));
    };
    for (const Polyline& line : trace_for_grid(p, grid, step))
        for (const Vec2& s : line) {
            int c0, c1, r0, r1;
            range(s.x, c0, c1);
            range(s.y, r0, r1);
            for (int r = r0; r <= r1; ++r)
                for (int c = c0; c <= c1; ++c) hit[r * q + c] = 1;
        }
    std::vector<Cell> out;
    for (int k = 0; k < grid.cell_count(); ++k)
        if (hit[k]) out.push_back(grid.cell_at(k));
    return out;
}

// ---------------------------------------------------------------------------
// Common zeros through resultants

namespace {

// Candidate points of Z(F) with F = G = 0, from the resultant eliminating x
// (or y when that one vanishes identically).
std::vector<Vec2> resultant_candidates(const MultiPoly& f, const MultiPoly& g, const Box& box) {
    const double mx = 1e-6 * std::max(1.0, box.width()), my = 1e-6 * std::max(1.0, box.height());
    for (int elim : {0, 1}) {
        const MultiPoly r = resultant(f, g, elim);
        if (r.is_zero()) continue;
        const int keep = 1 - elim;
        const double klo = keep == 1 ? box.y0 - my : box.x0 - mx;
        const double khi = keep == 1 ? box.y1 + my : box.x1 + mx;
        const double elo = elim == 0 ? box.x0 - mx : box.y0 - my;
        const double ehi = elim == 0 ? box.x1 + mx : box.y1 + my;
        std::vector<Vec2> out;
        for (double v : upoly::real_roots(r.univariate_coeffs(), klo, khi)) {
            const MultiPoly line = restrict(f, keep, v);
            for (double u : upoly::real_roots(line.univariate_coeffs(), elo, ehi))
                out.push_back(elim == 0 ? Vec2{u, v} : Vec2{v, u});
        }
        return out;
    }
    throw Error(ErrorKind::SharedFactor, "resultants vanish identically; the polynomials share a factor");
}

void dedup(std::vector<Vec2>& pts, double tol) {
    std::vector<Vec2> out;
    for (const Vec2& p : pts) {
        bool seen = false;
        for (const Vec2& o : out)
            if (distance(o, p) <= tol) {
                seen = true;
                break;
            }
        if (!seen) out.push_back(p);
    }
    std::sort(out.begin(), out.end(), [](Vec2 a, Vec2 b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
    pts = std::move(out);
}

}  // namespace

std::vector<Vec2> singular_points(const MultiPoly& p, const Box& box) {
    if (p.dim() != 2 || p.is_zero()) throw Error(ErrorKind::Contract, "singular_points needs a nonzero bivariate polynomial");
    const DenseBivariate dp(p);
    const MultiPoly px = partial_derivative(p, 0), py = partial_derivative(p, 1);

    std::vector<Vec2> cand;
    bool found = false;
    for (const MultiPoly* g : {&px, &py}) {
        try {
            cand = resultant_candidates(p, *g, box);
            found = true;
            break;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::SharedFactor) throw;
        }
    }
    if (!found) throw Error(ErrorKind::SharedFactor, "P shares a factor with both partials");

    std::vector<Vec2> out;
    for (Vec2 c : cand) {
        // Newton on the gradient system.
        for (int it = 0; it < 100; ++it) {
            double v, gx, gy, hxx, hxy, hyy;
            dp.eval_grad(c.x, c.y, v, gx, gy);
            dp.eval_hessian(c.x, c.y, hxx, hxy, hyy);
            const double det = hxx * hyy - hxy * hxy;
            if (det == 0.0 || (gx == 0.0 && gy == 0.0)) break;
            const double dx = (hyy * gx - hxy * gy) / det, dy = (hxx * gy - hxy * gx) / det;
            c.x -= dx;
            c.y -= dy;
            if (std::hypot(dx, dy) < 1e-16) break;
        }
        double v, gx, gy;
        dp.eval_grad(c.x, c.y, v, gx, gy);
        if (std::abs(v) <= 1e-9 && std::abs(gx) <= 1e-9 && std::abs(gy) <= 1e-9 && box.contains(c, 1e-9))
            out.push_back(c);
    }
    dedup(out, 1e-6);
    return out;
}

int tangent_count_with_slope(const MultiPoly& p, const Box& box, double slope) {
    if (p.dim() != 2 || p.is_zero()) throw Error(ErrorKind::Contract, "tangent_count needs a nonzero bivariate polynomial");
    // Partial along the direction (1, slope): the first-variable partial of P
    // rotated so that this direction becomes the x-axis, up to a scale.
    const MultiPoly d = partial_derivative(p, 0) + slope * partial_derivative(p, 1);
    if (d.is_zero()) throw Error(ErrorKind::SharedFactor, "every point of Z(P) has this slope");
    const DenseBivariate dp(p), dd(d);
    std::vector<Vec2> out;
    for (Vec2 c : resultant_candidates(p, d, box)) {
        for (int it = 0; it < 50; ++it) {
            double f, fx, fy, g, gx, gy;
            dp.eval_grad(c.x, c.y, f, fx, fy);
            dd.eval_grad(c.x, c.y, g, gx, gy);
            const double det = fx * gy - fy * gx;
            if (det == 0.0 || (f == 0.0 && g == 0.0)) break;
            const double dx = (gy * f - fy * g) / det, dy = (fx * g - gx * f) / det;
            c.x -= dx;
            c.y -= dy;
            if (std::hypot(dx, dy) < 1e-16) break;
        }
        if (std::abs(dp(c.x, c.y)) <= 1e-9 && std::abs(dd(c.x, c.y)) <= 1e-9 && box.contains(c, 1e-9))
            out.push_back(c);
    }
    dedup(out, 1e-6);
    return static_cast<int>(out.size());
}

// ---------------------------------------------------------------------------
// Curvature

double curvature(const DenseBivariate& dp, Vec2 at) {
    double v, px, py, pxx, pxy, pyy;
    dp.eval_grad(at.x, at.y, v, px, py);
    const double g2 = px * px + py * py;
    if (std::sqrt(g2) <= 1e-12)
        throw Error(ErrorKind::Singular, "vanishing gradient at (" + format_double(at.x) + ", " + format_double(at.y) + ")");
    dp.eval_hessian(at.x, at.y, pxx, pxy, pyy);
    return std::abs(px * px * pyy - 2 * px * py * pxy + py * py * pxx) / (g2 * std::sqrt(g2));
}

double total_abs_curvature(const Polyline& samples, const MultiPoly& p) {
    const DenseBivariate dp(p);
    double total = 0.0;
    double prev = samples.empty() ? 0.0 : curvature(dp, samples[0]);
    for (std::size_t k = 1; k < samples.size(); ++k) {
        const double cur = curvature(dp, samples[k]);
        total += 0.5 * (prev + cur) * distance(samples[k - 1], samples[k]);
        prev = cur;
    }
    return total;
}

void write_curve_csv(std::ostream& out, const Polyline& line, const MultiPoly& p) {
    const DenseBivariate dp(p);
    out << "x,y,cumulative_arclength,cumulative_abs_curvature\n";
    double arc = 0.0, turn = 0.0;
    double prev = line.empty() ? 0.0 : curvature(dp, line[0]);
    for (std::size_t k = 0; k < line.size(); ++k) {
        if (k > 0) {
            const double cur = curvature(dp, line[k]);
            const double ds = distance(line[k - 1], line[k]);
            arc += ds;
            turn += 0.5 * (prev + cur) * ds;
            prev = cur;
        }
        out << format_double(line[k].x) << ',' << format_double(line[k].y) << ',' << format_double(arc) << ','
            << format_double(turn) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Refinement

std::vector<SubCurve> refine_subcurves(const MultiPoly& p, const Grid& grid, const RefineOptions& options,
                                       std::vector<Vec2>* singular_out) {
    const double step = options.step > 0 ? options.step : default_step(grid);
    const double budget = options.curvature_budget;
    const DenseBivariate dp(p);
    const std::vector<Vec2> singular = singular_points(p, kUnitSquare);
    if (singular_out) *singular_out = singular;

    // 1. cut each traced line into runs that stay in one cell
    struct Run {
        Cell cell;
        std::vector<Vec2> pts;
    };
    std::vector<Run> runs;
    for (const Polyline& line : trace_for_grid(p, grid, step)) {
        std::vector<Run> local;
        for (std::size_t k = 0; k + 1 < line.size(); ++k) {
            const Vec2 mid{0.5 * (line[k].x + line[k + 1].x), 0.5 * (line[k].y + line[k + 1].y)};
            const Cell c = grid.cell_of(mid);
            if (local.empty() || local.back().cell != c) local.push_back({c, {line[k]}});
            local.back().pts.push_back(line[k + 1]);
        }
        if (is_closed(line) && local.size() > 1 && local.front().cell == local.back().cell) {
            auto& last = local.back().pts;
            last.insert(last.end(), local.front().pts.begin() + 1, local.front().pts.end());
            local.front() = std::move(local.back());
            local.pop_back();
        }
        for (auto& r : local) runs.push_back(std::move(r));
    }

    // 2. keep away from singular points
    std::vector<Run> clean;
    for (Run& r : runs) {
        std::vector<Vec2> cur;
        auto flush = [&] {
            if (cur.size() >= 2) clean.push_back({r.cell, cur});
            cur.clear();
        };
        for (const Vec2& s : r.pts) {
            double d = INFINITY;
            for (const Vec2& z : singular) d = std::min(d, distance(s, z));
            if (d < 1e-6) {
                flush();
                continue;
            }
            cur.push_back(s);
            if (d < step) {
                flush();
                cur.push_back(s);
            }
        }
        flush();
    }

    // 3. greedy cuts at the curvature budget
    std::vector<SubCurve> out;
    for (Run& r : clean) {
        // Split any segment whose own curvature exceeds half the budget.
        std::vector<Vec2> pts{r.pts.front()};
        std::vector<double> kap{curvature(dp, r.pts.front())};
        for (std::size_t k = 1; k < r.pts.size(); ++k) {
            std::function<void(Vec2, double, Vec2, int)> add = [&](Vec2 a, double ka, Vec2 b, int depth) {
                const double kb = curvature(dp, b);
                if (depth < 30 && 0.5 * (ka + kb) * distance(a, b) > 0.5 * budget) {
                    const Vec2 m = newton_project(dp, {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
                    const double km = curvature(dp, m);
                    add(a, ka, m, depth + 1);
                    add(m, km, b, depth + 1);
                    return;
                }
                pts.push_back(b);
                kap.push_back(kb);
            };
            add(pts.back(), kap.back(), r.pts[k], 0);
        }
        std::size_t start = 0;
        double acc = 0.0;
        auto emit = [&](std::size_t end, double kappa) {
            SubCurve sc;
            sc.owner = r.cell;
            sc.samples.assign(pts.begin() + start, pts.begin() + end + 1);
            sc.p = sc.samples.front();
            sc.q = sc.samples.back();
            sc.kappa = kappa;
            sc.singular_free = true;
            out.push_back(std::move(sc));
        };
        for (std::size_t k = 1; k < pts.size(); ++k) {
            const double inc = 0.5 * (kap[k - 1] + kap[k]) * distance(pts[k - 1], pts[k]);
            if (acc + inc > budget && k - 1 > start) {
                emit(k - 1, acc);
                start = k - 1;
                acc = 0.0;
            }
            acc += inc;
        }
        emit(pts.size() - 1, acc);
    }

    std::stable_sort(out.begin(), out.end(), [&](const SubCurve& a, const SubCurve& b) {
        return grid.index(a.owner) < grid.index(b.owner);
    });
    std::vector<int> per_cell(grid.cell_count(), 0);
    for (const SubCurve& s : out)
        if (++per_cell[grid.index(s.owner)] > options.per_cell_cap)
            throw Error(ErrorKind::ResourceExhausted,
                        "more than " + std::to_string(options.per_cell_cap) + " sub-curves in cell (" +
                            std::to_string(s.owner.row) + ", " + std::to_string(s.owner.col) + ")");
    return out;
}

}  // namespace rangelab
