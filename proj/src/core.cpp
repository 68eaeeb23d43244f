#include "sublog/core.hpp"

#include <algorithm>
#include <cmath>

namespace sublog {

SortedKeyArray SortedKeyArray::from_sorted(std::vector<double> keys, double domain_lo,
                                           double domain_hi) {
    if (!(domain_lo < domain_hi)) throw DegenerateData("domain_lo must be below domain_hi");
    for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
        if (!(keys[i] <= keys[i + 1])) throw DegenerateData("keys not ascending");
    }
    if (!keys.empty() && (keys.front() < domain_lo || keys.back() > domain_hi)) {
        throw DegenerateData("keys outside declared domain");
    }
    SortedKeyArray a;
    a.keys_ = std::move(keys);
    a.domain_lo_ = domain_lo;
    a.domain_hi_ = domain_hi;
    return a;
}

Rank rank_oracle(const SortedKeyArray& a, double q) {
    std::size_t count = 0;
    for (double k : a.keys()) count += (k <= q) ? 1u : 0u;
    return count;
}

Rank exact_rank(const SortedKeyArray& a, double q) {
    const auto& keys = a.keys();
    return static_cast<Rank>(std::upper_bound(keys.begin(), keys.end(), q) - keys.begin());
}

Rank binary_search_rank(const SortedKeyArray& a, double q, std::size_t lo, std::size_t hi,
                        OpContext& ctx) {
    if (lo < 1 || hi > a.size() || lo > hi) throw WindowViolation("bad search window");
    std::size_t base = lo;
    std::size_t len = hi - lo + 1;
    while (len > 0) {
        std::size_t half = len / 2;
        double mid = counted_read(a, base + half, ctx);
        if (mid <= q) {
            base += half + 1;
            len -= half + 1;
        } else {
            len = half;
        }
    }
    return base - lo;
}

SortedKeyArray normalize(std::vector<double> raw) {
    if (raw.size() < 2) throw DegenerateData("need at least 2 keys to normalize");
    for (double x : raw) {
        if (!std::isfinite(x)) throw DegenerateData("non-finite key");
    }
    std::sort(raw.begin(), raw.end());
    const double r = raw.front();
    const double s = raw.back();
    if (!(s > r)) throw DegenerateData("all keys equal, zero range");
    for (double& x : raw) x = (x - r) / (s - r);
    return SortedKeyArray::from_sorted(std::move(raw), 0.0, 1.0);
}

SortedKeyArray normalize(const std::vector<std::uint64_t>& raw) {
    std::vector<double> v(raw.size());
    // uint64 -> double is monotone, so converting before the affine map
    // keeps rank order even when nearby keys collapse.
    std::transform(raw.begin(), raw.end(), v.begin(),
                   [](std::uint64_t k) { return static_cast<double>(k); });
    return normalize(std::move(v));
}

}  // namespace sublog
