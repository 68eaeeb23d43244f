#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sublog/core.hpp"
#include "sublog/instrument.hpp"

namespace sublog {

/// Hard cap on piecewise-model size; construction aborts with
/// PieceBudgetExceeded instead of silently truncating.
inline constexpr std::size_t kMaxPcfPieces = std::size_t{1} << 26;

/// A k-piece piecewise-constant approximation of a rank function over
/// [lo, hi]. Piece z owns the half-open interval
/// [lo + z*alpha, lo + (z+1)*alpha), alpha = (hi-lo)/k; the last piece
/// also takes the right endpoint. Piece values are midpoints of the
/// boundary ranks and are half-integers, stored doubled so the model
/// holds only integers. max_err is the measured worst half-span,
/// rounded up, so the estimate is always within max_err of the truth.
struct PcfModel {
    std::vector<std::uint64_t> half_ranks2;  // 2 * (piece rank estimate), nondecreasing
    double lo = 0.0;
    double hi = 1.0;
    std::uint64_t max_err = 0;

    std::size_t piece_count() const { return half_ranks2.size(); }

    /// Piece responsible for x; clamps to the boundary pieces so values
    /// marginally outside [lo, hi] stay valid.
    std::size_t piece_of(double x) const {
        double alpha = (hi - lo) / static_cast<double>(half_ranks2.size());
        double z = (x - lo) / alpha;
        if (!(z > 0.0)) return 0;
        auto iz = static_cast<std::size_t>(z);
        return iz >= half_ranks2.size() ? half_ranks2.size() - 1 : iz;
    }

    /// Doubled rank estimate for x (uncounted; callers charge the read).
    std::uint64_t estimate2(double x) const { return half_ranks2[piece_of(x)]; }

    /// Stored integers: the pieces plus the error bound.
    std::size_t size_ints() const { return piece_count() + 1; }
};

/// Builds the k-piece model for the rank function of the 1-based
/// inclusive subarray [win_lo, win_hi] of a, measured relative to
/// position win_lo - 1, over the approximation domain [lo, hi].
/// Construction walks the window once (no query-time operations are
/// charged). Throws InvalidDomain when lo >= hi, PieceBudgetExceeded
/// when k exceeds the cap.
PcfModel build_pcf(const SortedKeyArray& a, std::size_t win_lo, std::size_t win_hi,
                   std::size_t k, double lo, double hi);

/// Piece budget for a single flat model over [0, 1]:
/// k = ceil(n^(1+eps/2) * rho^(1+eps/4)).
std::size_t pca_piece_count(std::size_t n, double eps, double rho);

/// Single flat piecewise-constant model over [0, 1] plus windowed error
/// correction. Non-owning view of the key array.
class PcaIndex : public RankIndex {
public:
    PcaIndex(const SortedKeyArray& a, double eps, double rho);
    PcaIndex(PcfModel model, const SortedKeyArray& a);

    /// Exact rank: one counted model read, then a counted binary search
    /// over the measured error window [p - max_err, p + max_err] clipped
    /// to [0, n]. Queries outside [0, 1] answer 0 / n directly.
    Rank query(double q, OpContext& ctx) const override;

    std::size_t size_ints() const override { return model_.size_ints(); }
    const PcfModel& model() const { return model_; }
    double eps() const { return eps_; }
    double rho() const { return rho_; }

private:
    PcfModel model_;
    const SortedKeyArray* array_;
    double eps_ = 0.0;
    double rho_ = 0.0;
};

PcaIndex build_pca(const SortedKeyArray& a, double eps, double rho);

inline Rank query_pca(const PcaIndex& idx, double q, OpContext& ctx) {
    return idx.query(q, ctx);
}

/// Flat model wire format: k, max_err, lo, hi as 8-byte little-endian
/// fields, then k doubled-integer pieces.
void write_pcf(std::ostream& out, const PcfModel& m);
PcfModel read_pcf(std::istream& in);

}  // namespace sublog
