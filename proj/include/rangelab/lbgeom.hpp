#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rangelab/poly.hpp"

namespace rangelab {

// Numerical checks for the packed-polynomial lower-bound construction.
// Polynomials live in D variables; axis 0 is X1, the axis along which zero
// sets are graphs over the base cube [1,2]^{D-1} of axes 1..D-1.

enum class LBMode {
    ScheduleAudit, // the asymptotic schedule, checked as arithmetic only
    Geometry       // moderate user-chosen parameters for the geometric checks
};

const char* to_string(LBMode mode);

struct LBParams {
    LBMode mode = LBMode::ScheduleAudit;
    double n = 0;
    double Q = 0;
    int dim = 2;
    int degree = 2;
    double c_w = 1.0;

    std::uint64_t beta = 0;           // free coefficients of a monic D-variate polynomial
    std::uint64_t beta_plane = 0;     // same count for D = 2
    std::uint64_t beta_plane_pairs = 0; // C(beta_plane, 2)

    double slab_width = 0;  // w
    double delta = 0;
    double eta = 0;
    double tau = 0;
    double coeff_scale = 0; // epsilon: packed coefficients lie in [0, coeff_scale]
    double grid_step = 0;   // xi_D: spacing of the coefficient grid
    /// slab_width / grid_step = (eta tau)^-closeness_exponent.
    double closeness_exponent = 0;

    double log2_family_size = 0; // log2 (coeff_scale / grid_step)^beta
    double n_exponent = 0;       // beta
    double q_exponent = 0;       // beta + 2 beta C(beta_plane, 2) + beta (D-2) degree - 1

    std::vector<std::string> warnings;

    double eta_tau() const { return eta * tau; }
    double family_size() const;
    /// Grid indices k with coefficient k * grid_step.
    std::int64_t grid_min() const;
    std::int64_t grid_max() const;
};

/// Upper bound on packed coefficients in units of coeff_scale.
inline constexpr double kPackedCoeffCap = 1.0;
/// Close-region threshold in units of slab_width.
inline constexpr double kCloseRegionFactor = 4.0;
inline constexpr std::size_t kDefaultMcSamples = 200'000;

/// The asymptotic schedule at (n, Q). Requires n >= 4, Q >= 2, D >= 2, degree >= 2.
/// Regimes where coeff_scale is not small, slab_width is not below
/// coeff_scale, or the grid is empty are recorded in `warnings`.
LBParams lb_parameters(double n, double Q, int D, int degree, double c_w = 1.0);

/// Geometry mode: eta = tau = sqrt(eta_tau), grid_step = coeff_scale / grid_span,
/// slab_width = grid_step * eta_tau^-closeness_exponent. delta is chosen so
/// the grid_step identity of the schedule holds.
LBParams geometry_parameters(int D, int degree, double eta_tau, double coeff_scale = 1e-2,
                             double grid_span = 1024, double closeness_exponent = 1.0);

/// Exponent tuples of the free coefficients: every index of total degree
/// <= degree except X2^degree, in lexicographic order.
std::vector<MultiIndex> packed_indices(int D, int degree);

/// X1 - X2^degree + sum_i A_i X^i. The X1 and X2^degree terms are structural
/// and stay at 1 and -1; A_i ranges over packed_indices and may add to X1.
struct PackedPoly {
    int dim = 2;
    int degree = 2;
    std::vector<MultiIndex> indices;
    std::vector<double> coeffs;
    /// Grid coordinates (coeffs[i] == grid[i] * grid_step) or empty.
    std::vector<std::int64_t> grid;
    double grid_step = 0;

    static PackedPoly base(int D, int degree);
    MultiPoly poly() const;
    double coeff(const MultiIndex& index) const;
    /// Throws Contract unless every A_i lies in [0, cap * coeff_scale].
    void validate(double coeff_scale, double cap = kPackedCoeffCap) const;
    /// Moves the constant coefficient by -r. Drops the grid unless r is a whole
    /// number of grid steps.
    PackedPoly shifted(double r) const;
};

/// Nonzero coefficient differences all have magnitude >= grid_step. Compared on
/// grid coordinates when both carry them, otherwise on coefficients.
bool distant(const PackedPoly& a, const PackedPoly& b);

/// `count` members of the coefficient grid, sampled uniformly, pairwise distinct
/// and pairwise distant (checked on emission). Throws EmptyGrid when
/// coeff_scale / (2 grid_step) < 1.
std::vector<PackedPoly> packed_family_sample(const LBParams& params, std::size_t count,
                                             std::uint64_t seed);

/// Unique root in X1 over the base point p (D-1 values), solved by safeguarded
/// Newton on [0, 10]. Throws NonPacked when [0, 10] does not bracket a root.
double axis_root(const MultiPoly& p, std::span<const double> base);

/// |a - b| for the X1-roots of both polynomials over `base`.
double axis_distance(const MultiPoly& p1, const MultiPoly& p2, std::span<const double> base);
double axis_distance(const PackedPoly& p1, const PackedPoly& p2, std::span<const double> base);

struct McEstimate {
    double value = 0;
    double std_error = 0;
    std::size_t samples = 0;
};

/// Fraction of base points in [1,2]^{D-1} where the axis distance is at most
/// factor * slab_width. Requires distinct, distant inputs (Contract otherwise).
McEstimate close_region_measure(const PackedPoly& p1, const PackedPoly& p2, double slab_width,
                                std::size_t samples, std::uint64_t seed,
                                double factor = kCloseRegionFactor);

/// Fraction of base points whose X1-root lies in [1, 2].
McEstimate base_measure(const PackedPoly& p, std::size_t samples, std::uint64_t seed);

/// D-measure of {X in [1,2]^D : 0 <= P(X) <= r}, integrating the clipped
/// X1-interval over sampled base points.
McEstimate slab_measure(const PackedPoly& p, double r, std::size_t samples, std::uint64_t seed);

/// A distant pair whose zero sets cross transversally at X2 = 1.5. The first
/// is a grid sample with its constant and X2 coefficients moved to mid-grid;
/// the second satisfies P2 - P1 = steps * grid_step * (2 X2 - 3).
std::pair<PackedPoly, PackedPoly> crossing_pair(const LBParams& params, std::uint64_t seed,
                                                int steps = 8);

struct ScalingPoint {
    double eta_tau = 0;
    double estimate = 0;
    double std_error = 0;
};

struct ScalingStudy {
    std::vector<ScalingPoint> points;
    double slope = 0;           // least squares on log estimate vs log eta_tau
    double fitted_constant = 0; // max estimate * eta_tau
    int inversions = 0;         // adjacent increases of the estimate
};

/// close_region_measure of crossing pairs over a sweep of eta_tau in geometry mode.
ScalingStudy close_region_scaling(int D, int degree, const std::vector<double>& eta_taus,
                                  std::size_t samples, std::uint64_t seed,
                                  double factor = kCloseRegionFactor);

double loglog_slope(std::span<const double> xs, std::span<const double> ys);

/// A measurable subset of the cube [0,1]^dim.
struct MeasurableRange {
    std::string name;
    std::function<bool(std::span<const double>)> contains;
};

/// Box [lo, hi] in the unit cube.
MeasurableRange box_range(std::vector<double> lo, std::vector<double> hi);

/// `count` strips normal to `axis`, each of the given width, spaced evenly
/// with gaps so that strips of one call are pairwise disjoint.
std::vector<MeasurableRange> axis_strips(int dim, int axis, int count, double width);

/// Pairwise intersection cap 3 k sqrt(log2 n).
double intersection_cap(double n, double k);

struct DerandResult {
    std::size_t trials = 0;
    double all_ranges_full = 0;      // fraction of trials with every range holding >= t points
    double all_pairs_sparse = 0;     // fraction with every pairwise intersection below the cap
    double joint = 0;
    double cap = 0;
    std::size_t min_range_count = 0; // over all trials
    std::size_t max_pair_count = 0;
};

/// Drops n uniform points into [0,1]^dim per trial and tests both conditions.
DerandResult derand_simulation(const std::vector<MeasurableRange>& ranges, int dim, std::size_t n,
                               std::size_t t, std::size_t trials, std::uint64_t seed,
                               double k = 1.0);

struct DerandPrecheck {
    double min_measure = 0;
    double required_measure = 0; // 4 c t / n
    double max_pair_measure = 0;
    double pair_bound = 0;       // pair_constant / (n 2^sqrt(log2 n))
    bool pass = false;
};

/// Monte Carlo check of the measure preconditions for `ranges`.
DerandPrecheck derand_precheck(const std::vector<MeasurableRange>& ranges, int dim, double n,
                               double t, double c, double pair_constant, std::size_t samples,
                               std::uint64_t seed);

/// m Q / (alpha 2^(kappa c)).
double framework_bound(double m, double Q, double pair_cap, double alpha, double kappa = 1.0);

/// framework_bound with alpha = 2 and pair cap 3 k sqrt(log2 n).
double framework_bound_sparse(double m, double Q, double n, double k = 1.0, double kappa = 1.0);

/// Independent stream seed for chunk `index` of a run seeded with `seed`.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace rangelab
