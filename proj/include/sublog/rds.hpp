#pragma once

#include <cstddef>
#include <vector>

#include "sublog/core.hpp"
#include "sublog/distributions.hpp"
#include "sublog/instrument.hpp"

namespace sublog {

/// Window size below which the recursion hands over to binary search.
inline constexpr std::size_t kRdsBaseWindow = 25;

/// Conditional CDF of the distribution restricted to [a_i, a_j]:
/// (F(q) - F(a_i)) / (F(a_j) - F(a_i)), clamped to [0, 1]. One model
/// evaluation: charges one CDF op. Throws DegenerateInterval when
/// a_i >= a_j or the denominator vanishes (callers fall back to binary
/// search).
double conditional_cdf(const CdfModel& base, double a_i, double a_j, double q, OpContext& ctx);

/// Per-level record of a traced search, for depth and window assertions.
struct RdsLevel {
    std::size_t i = 0, j = 0;    // current 1-based inclusive range
    double ihat = 0.0;           // position estimate
    double radius = 0.0;         // concentration radius
    std::size_t win_lo = 0, win_hi = 0;  // clipped next window
    bool fell_back = false;      // window check failed at this level
};

struct RdsTrace {
    std::size_t depth = 0;           // frames entered, including the base case
    std::vector<RdsLevel> levels;    // one entry per level that formed an estimate
};

/// Recursive distribution search: exact rank of q using the model's
/// exactly evaluable CDF to shrink the candidate window each level.
/// Exact for every (array, query, model), including a model that does
/// not match the data; a wrong model only costs speed because the
/// window check falls back to binary search.
Rank rds_search(const SortedKeyArray& a, double q, const CdfModel& base, OpContext& ctx);

/// Same search with an optional execution trace (trace may be null).
Rank rds_search_traced(const SortedKeyArray& a, double q, const CdfModel& base, OpContext& ctx,
                       RdsTrace* trace);

}  // namespace sublog
