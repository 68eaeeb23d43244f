#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sublog/errors.hpp"
#include "sublog/instrument.hpp"

namespace sublog {

/// Answer to a rank query: the number of keys less than or equal to the
/// query, an integer in [0, n].
using Rank = std::size_t;

/// An immutable ascending array of keys, the object every index answers
/// rank queries over. Keys live inside [domain_lo, domain_hi]; the
/// normalized arrays used throughout the library have domain [0, 1].
///
/// Algorithm contracts are 1-based (at1, counted_read, window bounds);
/// the underlying storage is a plain vector.
class SortedKeyArray {
public:
    SortedKeyArray() = default;

    /// Wraps an already-sorted vector. Throws DegenerateData if the input
    /// is not ascending or leaves the declared domain.
    static SortedKeyArray from_sorted(std::vector<double> keys, double domain_lo = 0.0,
                                      double domain_hi = 1.0);

    std::size_t size() const { return keys_.size(); }
    bool empty() const { return keys_.empty(); }

    /// 1-based bounds-checked access. Throws IndexOutOfRange.
    double at1(std::size_t i) const {
        if (i < 1 || i > keys_.size()) throw IndexOutOfRange("key index out of range");
        return keys_[i - 1];
    }

    double front() const { return keys_.front(); }
    double back() const { return keys_.back(); }
    const std::vector<double>& keys() const { return keys_; }
    double domain_lo() const { return domain_lo_; }
    double domain_hi() const { return domain_hi_; }

private:
    std::vector<double> keys_;
    double domain_lo_ = 0.0;
    double domain_hi_ = 1.0;
};

/// Exact rank by linear scan; the testing oracle for every index in this
/// library. Counts keys <= q (inclusive), q may lie outside the domain.
Rank rank_oracle(const SortedKeyArray& a, double q);

/// Exact rank by std::upper_bound. Used where the linear oracle would be
/// too slow (bulk verification); its agreement with rank_oracle is
/// property-tested in the core suite.
Rank exact_rank(const SortedKeyArray& a, double q);

/// Counted 1-based read; every array element touched on a search path
/// must flow through here. Charges one memory operation.
inline double counted_read(const SortedKeyArray& a, std::size_t i, OpContext& ctx) {
    double v = a.at1(i);
    ctx.charge_key_read(i);
    return v;
}

/// Rank of q relative to position lo-1 within the 1-based inclusive
/// window [lo, hi]: returns the count of keys in the window that are
/// <= q, which equals rank_oracle(a, q) - (lo - 1) whenever the true
/// rank lies in [lo-1, hi]. Every probe is a counted read; the probe
/// count is at most ceil(log2(hi-lo+2)).
///
/// Throws WindowViolation for malformed windows. A query below the
/// window is still well-defined and returns 0.
Rank binary_search_rank(const SortedKeyArray& a, double q, std::size_t lo, std::size_t hi,
                        OpContext& ctx);

/// Sorts and affinely maps raw keys onto [0, 1]: x -> (x - r)/(s - r)
/// with r = min, s = max. Rank order is preserved; the extremes map to
/// exactly 0 and 1. Throws DegenerateData when fewer than two distinct
/// keys exist.
SortedKeyArray normalize(std::vector<double> raw);
SortedKeyArray normalize(const std::vector<std::uint64_t>& raw);

/// Interface for an index that answers rank queries over one key array.
struct RankIndex {
    virtual ~RankIndex() = default;
    virtual Rank query(double q, OpContext& ctx) const = 0;
    /// Number of integers persisted by the index (excludes the data).
    virtual std::size_t size_ints() const = 0;
};

}  // namespace sublog
