#include "rangelab/poly.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "rangelab/error.hpp"

namespace rangelab {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Contract: return "contract";
        case ErrorKind::Singular: return "singular";
        case ErrorKind::ResourceExhausted: return "resource_exhausted";
        case ErrorKind::SharedFactor: return "shared_factor";
        case ErrorKind::CoverFailure: return "cover_failure";
        case ErrorKind::DerivativeBound: return "derivative_bound";
        case ErrorKind::Ambiguous: return "ambiguous";
        case ErrorKind::EmptyGrid: return "empty_grid";
        case ErrorKind::NonPacked: return "non_packed";
        case ErrorKind::Input: return "input";
    }
    return "unknown";
}

int total_degree(const MultiIndex& index) { return std::accumulate(index.begin(), index.end(), 0); }

// ---------------------------------------------------------------------------
// MultiPoly

MultiPoly::MultiPoly(int dim) : dim_(dim) {
    if (dim < 1) throw Error(ErrorKind::Contract, "polynomial dimension must be >= 1");
}

MultiPoly::MultiPoly(int dim, std::initializer_list<std::pair<MultiIndex, double>> terms)
    : MultiPoly(dim) {
    for (const auto& [idx, c] : terms) add_term(idx, c);
}

MultiPoly MultiPoly::constant(int dim, double c) {
    MultiPoly p(dim);
    p.add_term(MultiIndex(dim, 0), c);
    return p;
}

MultiPoly MultiPoly::variable(int dim, int axis) {
    MultiPoly p(dim);
    p.check_axis(axis);
    MultiIndex idx(dim, 0);
    idx[axis] = 1;
    p.add_term(idx, 1.0);
    return p;
}

MultiPoly MultiPoly::univariate(const std::vector<double>& coeffs) {
    MultiPoly p(1);
    for (std::size_t k = 0; k < coeffs.size(); ++k) p.add_term({static_cast<int>(k)}, coeffs[k]);
    return p;
}

void MultiPoly::check_axis(int axis) const {
    if (axis < 0 || axis >= dim_)
        throw Error(ErrorKind::Contract,
                    "axis " + std::to_string(axis) + " out of range for dim " + std::to_string(dim_));
}

void MultiPoly::recompute_degree() {
    degree_ = 0;
    for (const auto& [idx, c] : terms_) degree_ = std::max(degree_, total_degree(idx));
}

int MultiPoly::degree_in(int axis) const {
    check_axis(axis);
    int d = 0;
    for (const auto& [idx, c] : terms_) d = std::max(d, idx[axis]);
    return d;
}

double MultiPoly::coeff(const MultiIndex& index) const {
    auto it = terms_.find(index);
    return it == terms_.end() ? 0.0 : it->second;
}

void MultiPoly::add_term(const MultiIndex& index, double c) {
    if (static_cast<int>(index.size()) != dim_)
        throw Error(ErrorKind::Contract, "multi-index length does not match dimension");
    for (int e : index)
        if (e < 0) throw Error(ErrorKind::Contract, "negative exponent");
    if (c == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(index, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0) {
            terms_.erase(it);
            recompute_degree();
            return;
        }
    }
    degree_ = std::max(degree_, total_degree(index));
}

double MultiPoly::evaluate(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_)
        throw Error(ErrorKind::Contract, "evaluation point has wrong dimension");
    double sum = 0.0;
    for (const auto& [idx, c] : terms_) {
        double t = c;
        for (int j = 0; j < dim_; ++j)
            for (int e = 0; e < idx[j]; ++e) t *= x[j];
        sum += t;
    }
    return sum;
}

double MultiPoly::operator()(double x) const {
    const double v[1] = {x};
    return evaluate(v);
}

double MultiPoly::operator()(double x, double y) const {
    const double v[2] = {x, y};
    return evaluate(v);
}

std::vector<double> MultiPoly::univariate_coeffs() const {
    if (dim_ != 1) throw Error(ErrorKind::Contract, "univariate_coeffs requires dim 1");
    std::vector<double> out(degree_ + 1, 0.0);
    for (const auto& [idx, c] : terms_) out[idx[0]] = c;
    return out;
}

std::vector<std::vector<double>> MultiPoly::coefficients_in(int axis) const {
    if (dim_ != 2) throw Error(ErrorKind::Contract, "coefficients_in requires dim 2");
    check_axis(axis);
    const int other = 1 - axis;
    std::vector<std::vector<double>> out(degree_in(axis) + 1);
    for (const auto& [idx, c] : terms_) {
        auto& row = out[idx[axis]];
        if (static_cast<int>(row.size()) <= idx[other]) row.resize(idx[other] + 1, 0.0);
        row[idx[other]] += c;
    }
    return out;
}

MultiPoly MultiPoly::pruned(double tol) const {
    MultiPoly out(dim_);
    for (const auto& [idx, c] : terms_)
        if (std::abs(c) > tol) out.add_term(idx, c);
    return out;
}

double MultiPoly::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [idx, c] : terms_) m = std::max(m, std::abs(c));
    return m;
}

MultiPoly MultiPoly::operator-() const { return *this * -1.0; }

MultiPoly& MultiPoly::operator+=(const MultiPoly& other) {
    if (other.dim_ != dim_) throw Error(ErrorKind::Contract, "dimension mismatch in addition");
    for (const auto& [idx, c] : other.terms_) add_term(idx, c);
    return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& other) {
    if (other.dim_ != dim_) throw Error(ErrorKind::Contract, "dimension mismatch in subtraction");
    for (const auto& [idx, c] : other.terms_) add_term(idx, -c);
    return *this;
}

MultiPoly& MultiPoly::operator*=(double s) {
    if (s == 0.0) {
        terms_.clear();
        degree_ = 0;
        return *this;
    }
    for (auto& [idx, c] : terms_) c *= s;
    return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    if (a.dim_ != b.dim_) throw Error(ErrorKind::Contract, "dimension mismatch in product");
    MultiPoly out(a.dim_);
    MultiIndex idx(a.dim_);
    for (const auto& [ia, ca] : a.terms_)
        for (const auto& [ib, cb] : b.terms_) {
            for (int j = 0; j < a.dim_; ++j) idx[j] = ia[j] + ib[j];
            out.add_term(idx, ca * cb);
        }
    return out;
}

// ---------------------------------------------------------------------------
// DenseBivariate

DenseBivariate::Table DenseBivariate::tabulate(const MultiPoly& p) {
    Table t;
    if (p.dim() != 2) throw Error(ErrorKind::Contract, "DenseBivariate requires dim 2");
    t.dx = p.is_zero() ? 0 : p.degree_in(0);
    t.dy = p.is_zero() ? 0 : p.degree_in(1);
    t.c.assign((t.dx + 1) * (t.dy + 1), 0.0);
    for (const auto& [idx, c] : p.terms()) t.c[idx[0] * (t.dy + 1) + idx[1]] = c;
    return t;
}

double DenseBivariate::Table::eval(double x, double y) const {
    double outer = 0.0;
    for (int i = dx; i >= 0; --i) {
        const double* row = &c[i * (dy + 1)];
        double inner = 0.0;
        for (int j = dy; j >= 0; --j) inner = inner * y + row[j];
        outer = outer * x + inner;
    }
    return outer;
}

DenseBivariate::DenseBivariate(const MultiPoly& p) {
    const MultiPoly px = partial_derivative(p, 0);
    const MultiPoly py = partial_derivative(p, 1);
    v_ = tabulate(p);
    x_ = tabulate(px);
    y_ = tabulate(py);
    xx_ = tabulate(partial_derivative(px, 0));
    xy_ = tabulate(partial_derivative(px, 1));
    yy_ = tabulate(partial_derivative(py, 1));
}

void DenseBivariate::eval_grad(double x, double y, double& v, double& px, double& py) const {
    v = v_.eval(x, y);
    px = x_.eval(x, y);
    py = y_.eval(x, y);
}

void DenseBivariate::eval_hessian(double x, double y, double& pxx, double& pxy,
                                  double& pyy) const {
    pxx = xx_.eval(x, y);
    pxy = xy_.eval(x, y);
    pyy = yy_.eval(x, y);
}

// ---------------------------------------------------------------------------
// Calculus

MultiPoly partial_derivative(const MultiPoly& p, int axis) {
    if (axis < 0 || axis >= p.dim())
        throw Error(ErrorKind::Contract, "partial_derivative axis out of range");
    MultiPoly out(p.dim());
    for (const auto& [key, c] : p.terms()) {
        if (key[axis] == 0) continue;
        MultiIndex idx = key;
        const double f = c * idx[axis];
        --idx[axis];
        out.add_term(idx, f);
    }
    return out;
}

MultiPoly restrict(const MultiPoly& p, int axis, double value) {
    if (axis < 0 || axis >= p.dim()) throw Error(ErrorKind::Contract, "restrict axis out of range");
    if (p.dim() < 2) throw Error(ErrorKind::Contract, "restrict needs at least two variables");
    MultiPoly out(p.dim() - 1);
    for (const auto& [idx, c] : p.terms()) {
        MultiIndex rest;
        rest.reserve(idx.size() - 1);
        for (int j = 0; j < p.dim(); ++j)
            if (j != axis) rest.push_back(idx[j]);
        out.add_term(rest, c * std::pow(value, idx[axis]));
    }
    return out;
}

namespace {

// Truncated power series in t, coefficients 0..order.
using Series = std::vector<double>;

Series series_mul(const Series& a, const Series& b) {
    Series out(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        for (std::size_t j = 0; i + j < a.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

// P(x0 + t, Y(t)) truncated at the length of Y.
Series compose(const DenseBivariate& p, double x0, const Series& y) {
    const std::size_t len = y.size();
    Series xs(len, 0.0);
    xs[0] = x0;
    if (len > 1) xs[1] = 1.0;
    Series outer(len, 0.0);
    for (int i = p.deg_x(); i >= 0; --i) {
        Series inner(len, 0.0);
        for (int j = p.deg_y(); j >= 0; --j) {
            inner = series_mul(inner, y);
            inner[0] += p.coeff(i, j);
        }
        outer = series_mul(outer, xs);
        for (std::size_t k = 0; k < len; ++k) outer[k] += inner[k];
    }
    return outer;
}

}  // namespace

std::vector<double> implicit_derivatives(const MultiPoly& p, double x, double y, int order,
                                         double zero_tol) {
    if (p.dim() != 2) throw Error(ErrorKind::Contract, "implicit_derivatives requires dim 2");
    if (order < 0) throw Error(ErrorKind::Contract, "negative derivative order");
    const DenseBivariate dp(p);
    double v, px, py;
    dp.eval_grad(x, y, v, px, py);
    if (std::abs(v) > zero_tol)
        throw Error(ErrorKind::Contract, "point is not on the curve (|P| = " + std::to_string(v) + ")");
    if (std::abs(py) <= zero_tol)
        throw Error(ErrorKind::Singular, "P_y vanishes: vertical tangent or singular point");

    // Solve for the Taylor coefficients of y(x0 + t) one order at a time; the
    // t^k coefficient of P(x0 + t, y(t)) is P_y * c_k plus lower-order terms.
    Series ys(order + 1, 0.0);
    ys[0] = y;
    std::vector<double> out(order);
    double factorial = 1.0;
    for (int k = 1; k <= order; ++k) {
        ys[k] = 0.0;
        const Series s = compose(dp, x, Series(ys.begin(), ys.begin() + k + 1));
        ys[k] = -s[k] / py;
        factorial *= k;
        out[k - 1] = ys[k] * factorial;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Univariate helpers

namespace upoly {

double eval(const std::vector<double>& p, double x) {
    double r = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * x + *it;
    return r;
}

std::vector<double> derivative(const std::vector<double>& p) {
    if (p.size() <= 1) return {};
    std::vector<double> out(p.size() - 1);
    for (std::size_t k = 1; k < p.size(); ++k) out[k - 1] = p[k] * static_cast<double>(k);
    return out;
}

std::vector<double> add(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return out;
}

std::vector<double> sub(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
    return out;
}

std::vector<double> mul(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

void trim(std::vector<double>& p, double tol) {
    while (!p.empty() && std::abs(p.back()) <= tol) p.pop_back();
}

namespace {

double magnitude(const std::vector<double>& p, double x) {
    double r = 0.0;
    const double ax = std::max(1.0, std::abs(x));
    for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * ax + std::abs(*it);
    return r;
}

double bisect(const std::vector<double>& p, double a, double b, double fa, double root_tol) {
    for (int it = 0; it < 200 && b - a > root_tol * std::max(1.0, std::abs(a)); ++it) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        const double fm = eval(p, m);
        if (fm == 0.0) return m;
        if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

std::vector<double> real_roots(const std::vector<double>& p_in, double lo, double hi,
                               double root_tol) {
    std::vector<double> p = p_in;
    trim(p);
    if (p.size() <= 1 || !(lo <= hi)) return {};

    // Between consecutive critical points p is monotone and has at most one
    // simple root; multiple roots sit at critical points.
    const std::vector<double> crit = real_roots(derivative(p), lo, hi, root_tol);
    std::vector<double> breaks;
    breaks.reserve(crit.size() + 2);
    breaks.push_back(lo);
    for (double c : crit)
        if (c > lo && c < hi) breaks.push_back(c);
    breaks.push_back(hi);

    constexpr double kMultipleRootRel = 1e-8;
    std::vector<double> roots;
    for (std::size_t k = 0; k < breaks.size(); ++k) {
        const double x = breaks[k];
        const bool critical = k > 0 && k + 1 < breaks.size();
        const double v = eval(p, x);
        if (v == 0.0 || (critical && std::abs(v) <= kMultipleRootRel * magnitude(p, x)))
            roots.push_back(x);
    }
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double a = breaks[k], b = breaks[k + 1];
        const double fa = eval(p, a), fb = eval(p, b);
        if (fa == 0.0 || fb == 0.0) continue;
        if ((fa < 0) != (fb < 0)) roots.push_back(bisect(p, a, b, fa, root_tol));
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> out;
    for (double r : roots)
        if (out.empty() || r - out.back() > 1e-9 * std::max(1.0, std::abs(r))) out.push_back(r);
    return out;
}

}  // namespace upoly

// ---------------------------------------------------------------------------
// Sublevel intervals

double max_sublevel_interval(const MultiPoly& p, double w, double lo, double hi, int log2_cells) {
    if (p.dim() != 1) throw Error(ErrorKind::Contract, "max_sublevel_interval needs a univariate polynomial");
    if (!(w > 0)) throw Error(ErrorKind::Contract, "sublevel width must be positive");
    if (!(hi > lo)) throw Error(ErrorKind::Contract, "empty domain");
    if (p.degree() < 1) throw Error(ErrorKind::Contract, "polynomial must be nonconstant");
    if (log2_cells < 1 || log2_cells > 26) throw Error(ErrorKind::Contract, "log2_cells out of range");

    const std::vector<double> c = p.univariate_coeffs();
    const std::vector<double> upper = upoly::sub(c, {w});  // P - w
    const std::vector<double> lower = upoly::add(c, {w});  // P + w
    const std::size_t cells = std::size_t{1} << log2_cells;
    const double h = (hi - lo) / static_cast<double>(cells);

    std::vector<double> breaks{lo, hi};
    double x_prev = lo;
    double f_prev = upoly::eval(c, lo);
    for (std::size_t k = 1; k <= cells; ++k) {
        const double x = k == cells ? hi : lo + h * static_cast<double>(k);
        const double f = upoly::eval(c, x);
        for (const auto* g : {&upper, &lower}) {
            const double shift = g == &upper ? -w : w;
            const double ga = f_prev + shift, gb = f + shift;
            if ((ga < 0) != (gb < 0)) {
                double a = x_prev, b = x, fa = ga;
                for (int it = 0; it < 80 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
                    const double m = 0.5 * (a + b);
                    const double fm = upoly::eval(*g, m);
                    if ((fm < 0) == (fa < 0)) {
                        a = m;
                        fa = fm;
                    } else {
                        b = m;
                    }
                }
                breaks.push_back(0.5 * (a + b));
            }
        }
        x_prev = x;
        f_prev = f;
    }
    std::sort(breaks.begin(), breaks.end());

    double best = 0.0, run = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double a = breaks[k], b = breaks[k + 1];
        if (b <= a) continue;
        if (std::abs(upoly::eval(c, 0.5 * (a + b))) <= w) {
            run += b - a;
            best = std::max(best, run);
        } else {
            run = 0.0;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Resultants

MultiPoly resultant(const MultiPoly& p, const MultiPoly& q, int eliminate) {
    if (p.dim() != 2 || q.dim() != 2) throw Error(ErrorKind::Contract, "resultant requires dim 2");
    if (eliminate != 0 && eliminate != 1) throw Error(ErrorKind::Contract, "eliminate must be 0 or 1");
    if (p.is_zero() || q.is_zero()) return MultiPoly(1);

    std::vector<std::vector<double>> a = p.coefficients_in(eliminate);
    std::vector<std::vector<double>> b = q.coefficients_in(eliminate);
    for (auto& c : a) upoly::trim(c);
    for (auto& c : b) upoly::trim(c);
    const int m = static_cast<int>(a.size()) - 1;
    const int n = static_cast<int>(b.size()) - 1;
    const int size = m + n;
    if (size == 0) return MultiPoly::constant(1, 1.0);
    if (size > 20) throw Error(ErrorKind::ResourceExhausted, "Sylvester matrix too large");

    // Row r < n holds a shifted by r; row n + r holds b shifted by r.
    // Columns index descending powers of the eliminated variable.
    auto entry = [&](int row, int col) -> const std::vector<double>* {
        if (row < n) {
            const int power = m - (col - row);
            return (col >= row && power >= 0 && power <= m) ? &a[power] : nullptr;
        }
        const int r = row - n;
        const int power = n - (col - r);
        return (col >= r && power >= 0 && power <= n) ? &b[power] : nullptr;
    };

    // Laplace expansion memoized on the set of used columns; exact in the
    // ring operations, so integer inputs give exact zero resultants.
    const std::uint32_t full = (std::uint32_t{1} << size) - 1;
    std::vector<std::vector<double>> minor(std::size_t{full} + 1);
    std::vector<char> known(std::size_t{full} + 1, 0);
    minor[0] = {1.0};
    known[0] = 1;
    std::function<const std::vector<double>&(std::uint32_t)> solve =
        [&](std::uint32_t mask) -> const std::vector<double>& {
        if (known[mask]) return minor[mask];
        const int row = std::popcount(mask) - 1;
        std::vector<double> acc;
        int above = 0;  // columns in mask greater than col
        for (int col = size - 1; col >= 0; --col) {
            if (!(mask & (std::uint32_t{1} << col))) continue;
            const std::vector<double>* e = entry(row, col);
            if (e != nullptr && !e->empty()) {
                const std::vector<double>& sub = solve(mask & ~(std::uint32_t{1} << col));
                if (!sub.empty()) {
                    std::vector<double> term = upoly::mul(*e, sub);
                    acc = (above % 2 == 0) ? upoly::add(acc, term) : upoly::sub(acc, term);
                }
            }
            ++above;
        }
        upoly::trim(acc);
        known[mask] = 1;
        minor[mask] = std::move(acc);
        return minor[mask];
    };
    std::vector<double> res = solve(full);

    double na = 0.0, nb = 0.0;
    for (const auto& c : a)
        for (double v : c) na += std::abs(v);
    for (const auto& c : b)
        for (double v : c) nb += std::abs(v);
    const double scale = std::pow(na, n) * std::pow(nb, m);
    upoly::trim(res, 1e-11 * scale);
    for (double& v : res)
        if (std::abs(v) <= 1e-13 * scale) v = 0.0;
    return MultiPoly::univariate(res);
}

// ---------------------------------------------------------------------------
// Determinants

double determinant(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw Error(ErrorKind::Contract, "determinant of a non-square matrix");
    if (m.rows() > 64) throw Error(ErrorKind::Contract, "determinant limited to 64x64");
    if (m.rows() == 0) return 1.0;
    return Eigen::PartialPivLU<Eigen::MatrixXd>(m).determinant();
}

double vandermonde_det(std::span<const double> xs) {
    if (xs.empty()) throw Error(ErrorKind::Contract, "vandermonde_det needs at least one node");
    double prod = 1.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j) prod *= xs[j] - xs[i];
    return prod;
}

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i] < 0) throw Error(ErrorKind::Contract, "partition parts must be >= 0");
        if (i > 0 && parts_[i] > parts_[i - 1])
            throw Error(ErrorKind::Contract, "partition parts must be nonincreasing");
    }
}

namespace {

// Visits every SSYT of shape lambda with entries in 1..n, calling
// visit(weight-product) once per tableau.
template <class Visit>
void enumerate_ssyt(const Partition& lambda, int n, std::uint64_t cap, Visit&& visit) {
    std::vector<std::pair<int, int>> cells;
    for (int r = 0; r < lambda.size(); ++r)
        for (int c = 0; c < lambda[r]; ++c) cells.emplace_back(r, c);
    const int rows = lambda.size();
    std::vector<std::vector<int>> t(rows);
    for (int r = 0; r < rows; ++r) t[r].assign(lambda[r], 0);
    // Column heights bound the largest entry a cell can take.
    auto height = [&](int c) {
        int h = 0;
        while (h < rows && lambda[h] > c) ++h;
        return h;
    };
    std::vector<int> col_height(lambda.size() ? lambda[0] : 0);
    for (std::size_t c = 0; c < col_height.size(); ++c) col_height[c] = height(static_cast<int>(c));

    std::uint64_t visited = 0;
    std::function<void(std::size_t)> fill = [&](std::size_t k) {
        if (k == cells.size()) {
            if (++visited > cap)
                throw Error(ErrorKind::ResourceExhausted, "semistandard tableau enumeration cap exceeded");
            visit(t);
            return;
        }
        const auto [r, c] = cells[k];
        int lo = 1;
        if (c > 0) lo = std::max(lo, t[r][c - 1]);
        if (r > 0) lo = std::max(lo, t[r - 1][c] + 1);
        const int hi = n - (col_height[c] - 1 - r);
        for (int v = lo; v <= hi; ++v) {
            t[r][c] = v;
            fill(k + 1);
        }
    };
    fill(0);
}

}  // namespace

double schur(const Partition& lambda, std::span<const double> xs, std::uint64_t cap) {
    const int n = static_cast<int>(xs.size());
    int nonzero = 0;
    for (int part : lambda.parts()) nonzero += part > 0;
    if (nonzero > n) return 0.0;
    double sum = 0.0;
    enumerate_ssyt(lambda, n, cap, [&](const std::vector<std::vector<int>>& t) {
        double term = 1.0;
        for (const auto& row : t)
            for (int v : row) term *= xs[v - 1];
        sum += term;
    });
    return sum;
}

std::uint64_t ssyt_count(const Partition& lambda, int n, std::uint64_t cap) {
    int nonzero = 0;
    for (int part : lambda.parts()) nonzero += part > 0;
    if (nonzero > n) return 0;
    std::uint64_t count = 0;
    enumerate_ssyt(lambda, n, cap, [&](const std::vector<std::vector<int>>&) { ++count; });
    return count;
}

double gen_vandermonde_det(const Partition& lambda, std::span<const double> xs) {
    const int n = static_cast<int>(xs.size());
    if (lambda.size() > n) throw Error(ErrorKind::Contract, "partition longer than node count");
    std::vector<int> parts = lambda.parts();
    parts.resize(n, 0);
    Eigen::MatrixXd v(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) v(i, j) = std::pow(xs[i], parts[n - 1 - j] + j);
    return determinant(v);
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

std::uint64_t monic_param_count(int D, int delta) {
    if (D < 1 || delta < 1) throw Error(ErrorKind::Contract, "monic_param_count needs D, delta >= 1");
    return binomial(D + delta, D) - 1;
}

}  // namespace rangelab
