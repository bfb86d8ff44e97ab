#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rangelab/rrds.hpp"

namespace rangelab {

enum class QueryKind { Disk, Ellipse, Cubic, QuarticSlab };

const char* to_string(QueryKind kind);

/// Uniform points in the unit square.
std::vector<Vec2> uniform_points(std::size_t n, std::uint64_t seed);

/// Disk: centre in the square, radius in [0.05, 0.4].
/// Ellipse: rotated, semi-axes in [0.05, 0.4].
/// Cubic: y - sum a_i x^i with either sign, |a_1|, |a_2|, |a_3| <= 0.5.
/// QuarticSlab: 0 <= P <= w for P = y - f(x) with deg f = 4, plus a small
/// x y^2 term on odd draws; w in [0.02, 0.2].
QueryRange random_query(QueryKind kind, std::mt19937_64& rng);

/// `count` queries cycling through the four kinds.
std::vector<QueryRange> query_suite(std::size_t count, std::uint64_t seed);

}  // namespace rangelab
