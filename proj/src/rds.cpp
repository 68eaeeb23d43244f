#include "sublog/rds.hpp"

#include <algorithm>
#include <cmath>

namespace sublog {

double conditional_cdf(const CdfModel& base, double a_i, double a_j, double q, OpContext& ctx) {
    if (!(a_i < a_j)) throw DegenerateInterval("conditioning interval is empty");
    const double f_lo = base.cdf(a_i);
    const double f_hi = base.cdf(a_j);
    if (!(f_hi > f_lo)) throw DegenerateInterval("distribution carries no mass on the interval");
    const double v = (base.cdf(q) - f_lo) / (f_hi - f_lo);
    ctx.charge_cdf(q);  // one conditional inference = one model evaluation
    return std::clamp(v, 0.0, 1.0);
}

namespace {

// Search over the 1-based inclusive range [i, j], returning the rank of
// q relative to position i-1. The caller guarantees the true rank lies
// in [i-1, j]. Edge keys a_i, a_j were already read (and charged) by
// the caller, so levels only pay for the two window probes and one
// conditional CDF inference; F(q) is computed once per query.
Rank search_range(const SortedKeyArray& a, double q, const CdfModel& base, OpContext& ctx,
                  RdsTrace* trace) {
    std::size_t i = 1;
    std::size_t j = a.size();
    double a_i = 0.0, a_j = 0.0;
    bool edges_known = false;
    double f_q = 0.0;
    bool f_q_known = false;

    for (;;) {
        if (trace) ++trace->depth;
        const std::size_t interior = j - i - 1;  // k in the window [i, j]
        if (interior < kRdsBaseWindow) {
            return (i - 1) + binary_search_rank(a, q, i, j, ctx);
        }
        if (!edges_known) {
            a_i = counted_read(a, i, ctx);
            a_j = counted_read(a, j, ctx);
            edges_known = true;
        }
        if (a_i > q) return i - 1;
        if (a_i == q) {
            // Duplicates of q may extend past i; the window search
            // resolves them exactly.
            return (i - 1) + binary_search_rank(a, q, i, j, ctx);
        }
        if (a_j <= q) return j;

        // Estimate the position from the conditional CDF, then probe a
        // concentration window around it.
        double f_ai = base.cdf(a_i);
        double f_aj = base.cdf(a_j);
        if (!f_q_known) {
            f_q = base.cdf(q);
            f_q_known = true;
        }
        bool degenerate = !(f_aj > f_ai);
        double ihat = 0.0, radius = 0.0;
        std::size_t win_lo = i, win_hi = j;
        if (!degenerate) {
            ctx.charge_cdf(q);
            const double cond = std::clamp((f_q - f_ai) / (f_aj - f_ai), 0.0, 1.0);
            ihat = static_cast<double>(i + 1) + static_cast<double>(interior) * cond;
            radius = std::sqrt(0.5 * static_cast<double>(interior) *
                               std::log(std::log(static_cast<double>(interior))));
            win_lo = static_cast<std::size_t>(
                std::clamp(std::floor(ihat - radius), static_cast<double>(i),
                           static_cast<double>(j)));
            win_hi = static_cast<std::size_t>(std::clamp(
                std::ceil(ihat + radius), static_cast<double>(i), static_cast<double>(j)));
        }

        if (!degenerate && win_lo < win_hi && win_hi - win_lo - 1 < kRdsBaseWindow) {
            // Final level. The windowed search itself reveals whether
            // the window holds the answer: an interior count means the
            // edge keys bracket q, so the two edge probes are redundant.
            const Rank c = binary_search_rank(a, q, win_lo, win_hi, ctx);
            const std::size_t width = win_hi - win_lo + 1;
            const bool hit = c > 0 && c < width;
            if (trace) {
                trace->levels.push_back({i, j, ihat, radius, win_lo, win_hi, !hit});
            }
            if (hit) return (win_lo - 1) + c;
            return (i - 1) + binary_search_rank(a, q, i, j, ctx);
        }

        bool ok = false;
        double a_lo = 0.0, a_hi = 0.0;
        if (!degenerate && win_lo < win_hi) {
            a_lo = counted_read(a, win_lo, ctx);
            a_hi = counted_read(a, win_hi, ctx);
            // Strict upper comparison: a key equal to q at the window
            // edge may have duplicates beyond it, which would break the
            // relative-rank precondition of the next level.
            ok = a_lo <= q && a_hi > q;
        }
        if (trace) {
            trace->levels.push_back({i, j, ihat, radius, win_lo, win_hi, !ok});
        }
        if (!ok) {
            return (i - 1) + binary_search_rank(a, q, i, j, ctx);
        }
        i = win_lo;
        j = win_hi;
        a_i = a_lo;
        a_j = a_hi;
    }
}

}  // namespace

Rank rds_search_traced(const SortedKeyArray& a, double q, const CdfModel& base, OpContext& ctx,
                       RdsTrace* trace) {
    if (a.empty()) return 0;
    if (a.size() == 1) {
        return counted_read(a, 1, ctx) <= q ? 1 : 0;
    }
    return search_range(a, q, base, ctx, trace);
}

Rank rds_search(const SortedKeyArray& a, double q, const CdfModel& base, OpContext& ctx) {
    return rds_search_traced(a, q, base, ctx, nullptr);
}

}  // namespace sublog
