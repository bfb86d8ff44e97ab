#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace rangelab {

/// Exponent tuple of one monomial. Its length is the polynomial dimension.
using MultiIndex = std::vector<int>;

int total_degree(const MultiIndex& index);

/**
 * Sparse real polynomial in `dim` variables.
 *
 * Invariants: every stored coefficient is nonzero, every key has length
 * `dim`, and the cached degree is the largest total degree of a stored key
 * (0 for the zero polynomial).
 *
 * Axes are 0-based throughout the library: axis 0 is x (or X1), axis 1 is y.
 */
class MultiPoly {
public:
    using Terms = std::map<MultiIndex, double>;

    explicit MultiPoly(int dim = 1);
    MultiPoly(int dim, std::initializer_list<std::pair<MultiIndex, double>> terms);

    static MultiPoly constant(int dim, double c);
    static MultiPoly variable(int dim, int axis);
    /// Univariate polynomial from ascending coefficients.
    static MultiPoly univariate(const std::vector<double>& coeffs);

    int dim() const noexcept { return dim_; }
    int degree() const noexcept { return degree_; }
    int degree_in(int axis) const;
    bool is_zero() const noexcept { return terms_.empty(); }
    const Terms& terms() const noexcept { return terms_; }
    double coeff(const MultiIndex& index) const;

    /// Adds `c` to the coefficient of `index`, dropping the term if it cancels.
    void add_term(const MultiIndex& index, double c);

    double evaluate(std::span<const double> x) const;
    double operator()(double x) const;
    double operator()(double x, double y) const;

    /// Ascending coefficients of a univariate polynomial.
    std::vector<double> univariate_coeffs() const;

    /// For a bivariate polynomial: coefficients in powers of `axis`, each a
    /// univariate polynomial (ascending) in the other variable.
    std::vector<std::vector<double>> coefficients_in(int axis) const;

    /// Drops terms with |coefficient| <= tol.
    MultiPoly pruned(double tol) const;

    double max_abs_coeff() const;

    MultiPoly operator-() const;
    MultiPoly& operator+=(const MultiPoly& other);
    MultiPoly& operator-=(const MultiPoly& other);
    MultiPoly& operator*=(double s);

    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
    friend MultiPoly operator*(MultiPoly a, double s) { return a *= s; }
    friend MultiPoly operator*(double s, MultiPoly a) { return a *= s; }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
    friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
        return a.dim_ == b.dim_ && a.terms_ == b.terms_;
    }

private:
    void check_axis(int axis) const;
    void recompute_degree();

    int dim_;
    int degree_ = 0;
    Terms terms_;
};

/// Dense tensor-form copy of a bivariate polynomial and its first and second
/// partials, for fast repeated evaluation.
class DenseBivariate {
public:
    DenseBivariate() = default;
    explicit DenseBivariate(const MultiPoly& p);

    double operator()(double x, double y) const { return v_.eval(x, y); }
    void eval_grad(double x, double y, double& v, double& px, double& py) const;
    void eval_hessian(double x, double y, double& pxx, double& pxy, double& pyy) const;

    int deg_x() const noexcept { return v_.dx; }
    int deg_y() const noexcept { return v_.dy; }
    /// Coefficient of x^i y^j.
    double coeff(int i, int j) const { return v_.c[i * (v_.dy + 1) + j]; }

private:
    struct Table {
        int dx = 0;
        int dy = 0;
        std::vector<double> c{0.0};
        double eval(double x, double y) const;
    };
    static Table tabulate(const MultiPoly& p);

    Table v_, x_, y_, xx_, xy_, yy_;
};

MultiPoly partial_derivative(const MultiPoly& p, int axis);

/// Substitutes `value` for `axis`, producing a polynomial in dim-1 variables.
MultiPoly restrict(const MultiPoly& p, int axis, double value);

/// Derivatives d^j y / dx^j, j = 1..order, of the implicit branch y(x) of
/// P(x, y) = 0 through (x, y). Throws Singular when |P_y| <= zero_tol.
std::vector<double> implicit_derivatives(const MultiPoly& p, double x, double y, int order,
                                         double zero_tol = 1e-9);

/// Length of the longest interval inside [lo, hi] on which |P| <= w.
double max_sublevel_interval(const MultiPoly& p, double w, double lo, double hi,
                             int log2_cells = 20);

/// Sylvester resultant of two bivariate polynomials with `eliminate` removed.
/// The result is univariate in the remaining variable.
MultiPoly resultant(const MultiPoly& p, const MultiPoly& q, int eliminate);

/// Partial-pivot LU determinant. Square matrices up to 64x64.
double determinant(const Eigen::MatrixXd& m);

double vandermonde_det(std::span<const double> xs);

/// Weakly decreasing tuple of nonnegative integers.
class Partition {
public:
    explicit Partition(std::vector<int> parts);
    const std::vector<int>& parts() const noexcept { return parts_; }
    int size() const noexcept { return static_cast<int>(parts_.size()); }
    int operator[](int i) const { return parts_[i]; }

private:
    std::vector<int> parts_;
};

inline constexpr std::uint64_t kDefaultTableauCap = 10'000'000;

/// Schur polynomial by explicit semistandard-tableau enumeration.
/// Throws ResourceExhausted once more than `cap` tableaux are visited.
double schur(const Partition& lambda, std::span<const double> xs,
             std::uint64_t cap = kDefaultTableauCap);

/// Number of semistandard tableaux of shape lambda with entries 1..n.
std::uint64_t ssyt_count(const Partition& lambda, int n, std::uint64_t cap = kDefaultTableauCap);

/// det of V*_{ij} = x_i^{lambda_{n-j+1} + j - 1} (1-based indices).
double gen_vandermonde_det(const Partition& lambda, std::span<const double> xs);

std::uint64_t binomial(int n, int k);

/// Free coefficients of a monic degree-delta polynomial in D variables: C(D+delta, D) - 1.
std::uint64_t monic_param_count(int D, int delta);

/// Dense univariate helpers on ascending coefficient vectors.
namespace upoly {

double eval(const std::vector<double>& p, double x);
std::vector<double> derivative(const std::vector<double>& p);
std::vector<double> add(const std::vector<double>& a, const std::vector<double>& b);
std::vector<double> sub(const std::vector<double>& a, const std::vector<double>& b);
std::vector<double> mul(const std::vector<double>& a, const std::vector<double>& b);
/// Removes trailing coefficients with |c| <= tol.
void trim(std::vector<double>& p, double tol = 0.0);

/// Real roots in [lo, hi], multiple roots reported once. Roots of even
/// multiplicity are found through the critical points of p.
std::vector<double> real_roots(const std::vector<double>& p, double lo, double hi,
                               double root_tol = 1e-12);

}  // namespace upoly

}  // namespace rangelab
