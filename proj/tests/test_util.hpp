#pragma once

#include <vector>

#include "sublog/core.hpp"
#include "sublog/rng.hpp"

namespace sublog::test {

inline SortedKeyArray make_array(std::vector<double> keys, double lo = 0.0, double hi = 1.0) {
    return SortedKeyArray::from_sorted(std::move(keys), lo, hi);
}

/// Random ascending keys in [0, 1], optionally with forced duplicates.
inline SortedKeyArray random_unit_array(std::size_t n, std::uint64_t seed, bool with_ties = false) {
    auto gen = make_engine(seed);
    std::vector<double> keys(n);
    for (auto& k : keys) k = next_unit(gen);
    if (with_ties && n >= 2) {
        for (std::size_t i = 1; i < n; i += 3) keys[i] = keys[i - 1];
    }
    std::sort(keys.begin(), keys.end());
    return make_array(std::move(keys));
}

/// Queries that probe every step of the rank function: below, at, and
/// above each key, plus grid points.
inline std::vector<double> probe_queries(const SortedKeyArray& a, std::size_t grid = 17) {
    std::vector<double> qs;
    for (double k : a.keys()) {
        qs.push_back(k);
        qs.push_back(k - 1e-9);
        qs.push_back(k + 1e-9);
    }
    for (std::size_t g = 0; g <= grid; ++g) {
        qs.push_back(static_cast<double>(g) / static_cast<double>(grid));
    }
    qs.push_back(-0.25);
    qs.push_back(1.25);
    return qs;
}

}  // namespace sublog::test
