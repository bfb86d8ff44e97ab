#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "rangelab/cover.hpp"
#include "rangelab/curve.hpp"
#include "rangelab/poly.hpp"

namespace rangelab {

enum class Sign { LessEq, GreaterEq };

struct Factor {
    MultiPoly poly;
    Sign sign = Sign::LessEq;
    bool holds(Vec2 p) const;
};

/// a <= P <= b
struct SlabForm {
    MultiPoly poly;
    double a = 0.0;
    double b = 0.0;
};

/// Conjunction of polynomial inequalities over the plane.
struct QueryRange {
    std::vector<Factor> factors;
    std::optional<SlabForm> slab;

    /// Factors plus the slab form split into P - a >= 0 and P - b <= 0.
    std::vector<Factor> conjuncts() const;
    bool contains(Vec2 p) const;
    /// Throws Contract on a non-bivariate factor, a degree above `max_degree`,
    /// or a slab form with a >= b.
    void validate(int max_degree) const;
};

/// Range given by the product of explicitly supplied factors, each with its sign.
QueryRange range_from_factors(const std::vector<std::pair<MultiPoly, Sign>>& factors);

enum class Mode { Curvature, Derivative };

const char* to_string(Mode mode);
Mode mode_from_string(const std::string& name);

struct StructureConfig {
    int q = 16;
    Mode mode = Mode::Curvature;
    int order = 2;                 // derivative mode: i-slab level used for covers
    double derivative_bound = 4.0; // c in the i-slab hierarchy
    int max_degree = 4;
    int beta_model = 0;            // 0 selects monic_param_count(2, max_degree)
    bool strict_derivatives = false;
    CoverConfig cover;
    RefineOptions refine;

    int beta() const;
};

struct CostStats {
    std::uint64_t slabs_visited = 0;
    std::uint64_t points_scanned = 0;
    std::uint64_t regions_enumerated = 0;
    std::uint64_t dedup_checks = 0;
    std::uint64_t output_size = 0;

    std::uint64_t subcurves = 0;
    std::uint64_t crossed_cells = 0;
    std::uint64_t type1_chunks = 0;
    std::uint64_t type2_faces = 0;
    std::uint64_t exact_cells = 0;     // crossed cells answered by a full bucket scan
    std::uint64_t cover_fallbacks = 0; // derivative-mode sub-curves outside the derivative bound
    std::uint64_t max_cover_size = 0;

    std::int64_t overscan() const {
        return static_cast<std::int64_t>(points_scanned) - static_cast<std::int64_t>(output_size);
    }
    friend bool operator==(const CostStats&, const CostStats&) = default;
};

/// A remaining region of one query. Chunks span rows row_lo..row_hi of a
/// column; faces and exact cells lie in the single cell (row_lo, col).
struct Region {
    enum class Kind { Chunk, Face, ExactCell };
    Kind kind = Kind::Chunk;
    int col = 0;
    int row_lo = 0;
    int row_hi = 0;
    bool inside = false;    // chunks and faces: classification of the whole region
    std::size_t points = 0; // bucket points in the region
};

/// Slabs scanned for one covered sub-curve, guard strips included.
struct CoverRecord {
    Cell owner;
    int level = 0;
    std::size_t cover_size = 0;  // slabs before guard strips
    std::vector<RotatedSlab> rotated;
    std::vector<PolySlab> poly;
};

struct QueryResult {
    std::vector<int> ids;  // sorted
    CostStats stats;
    std::vector<std::size_t> cover_sizes;  // slabs per covered sub-curve
    std::vector<Region> regions;
    std::vector<CoverRecord> covers;
};

struct SpaceReport {
    double modeled_space = 0.0;    // sum over slabs of |pts|^beta, plus n
    double tradeoff_space = 0.0;   // curvature mode: sum over slabs of (|pts| / (q alpha))^beta, plus n
    double prediction = 0.0;
    double prediction_exponent = 0.0;  // of q in the prediction
    int beta = 0;
    std::uint64_t slabs = 0;
    bool estimated = false;
    std::map<std::uint64_t, std::uint64_t> slab_histogram;  // occupancy -> slab count
};

/// Grid buckets plus lazily materialized per-slab point lists.
class RangeStructure {
public:
    /// Throws Input naming the first point outside [0,1]^2.
    static RangeStructure build(std::vector<Vec2> points, const StructureConfig& config);

    RangeStructure(RangeStructure&&) noexcept;
    RangeStructure& operator=(RangeStructure&&) noexcept;
    ~RangeStructure();

    const StructureConfig& config() const noexcept { return config_; }
    const Grid& grid() const noexcept { return grid_; }
    const std::vector<Vec2>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    const std::vector<int>& bucket(Cell cell) const { return buckets_[grid_.index(cell)]; }
    const RotatedCatalog& catalog() const noexcept { return catalog_; }
    const ISlabHierarchy* hierarchy() const noexcept { return hierarchy_ ? &*hierarchy_ : nullptr; }

    /// Point ids of a slab, sorted; materialized on first touch.
    const std::vector<int>& slab_points(const RotatedSlab& slab) const;
    const std::vector<int>& slab_points(const PolySlab& slab) const;

    QueryResult query(const QueryRange& range) const;

    /// `budget` caps the number of (family, point) evaluations in derivative
    /// mode; beyond it families are sampled with `seed`.
    SpaceReport space_report(std::uint64_t budget = 50'000'000, std::uint64_t seed = 1) const;

private:
    RangeStructure() = default;
    struct Cache;

    StructureConfig config_;
    Grid grid_{2};
    std::vector<Vec2> points_;
    std::vector<std::vector<int>> buckets_;
    RotatedCatalog catalog_{Grid(2)};
    std::optional<ISlabHierarchy> hierarchy_;
    std::unique_ptr<Cache> cache_;
};

/// Ground truth: every conjunct evaluated at every point; sorted ids.
std::vector<int> brute_force_query(const std::vector<Vec2>& points, const QueryRange& range);

/// q-exponent of the space prediction: 3 beta - 4 (curvature) or
/// ((2 beta - delta)(delta + 1) - 2) / 2 (derivative).
double curvature_space_exponent(int beta);
double derivative_space_exponent(int beta, int delta);

}  // namespace rangelab
