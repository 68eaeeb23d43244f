#include "sublog/pca.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include "sublog/io.hpp"

namespace sublog {

PcfModel build_pcf(const SortedKeyArray& a, std::size_t win_lo, std::size_t win_hi,
                   std::size_t k, double lo, double hi) {
    if (!(lo < hi)) throw InvalidDomain("approximation domain is empty");
    if (k < 1) throw InvalidDomain("need at least one piece");
    if (k > kMaxPcfPieces) {
        throw PieceBudgetExceeded("piece count " + std::to_string(k) + " exceeds the 2^26 cap");
    }
    if (win_lo < 1 || win_hi > a.size() || win_lo > win_hi) {
        throw WindowViolation("bad model window");
    }

    PcfModel m;
    m.lo = lo;
    m.hi = hi;
    m.half_ranks2.resize(k);

    // One pass over the window. Boundary ranks are taken against the
    // same piece-assignment function queries use, so the measured error
    // bound holds for every representable query, not just exact
    // boundary values.
    const std::size_t count = win_hi - win_lo + 1;
    std::uint64_t below = 0;  // keys in pieces before z
    std::size_t idx = 0;      // keys consumed
    std::uint64_t max_err = 0;
    for (std::size_t z = 0; z < k; ++z) {
        while (idx < count && m.piece_of(a.at1(win_lo + idx)) == z) ++idx;
        const std::uint64_t upto = idx;  // rank at the right boundary of piece z
        m.half_ranks2[z] = below + upto;
        const std::uint64_t span = upto - below;
        max_err = std::max(max_err, (span + 1) / 2);
        below = upto;
    }
    m.max_err = max_err;
    return m;
}

std::size_t pca_piece_count(std::size_t n, double eps, double rho) {
    if (!(eps > 0.0)) throw InvalidDomain("eps must be positive");
    if (!(rho > 0.0)) throw InvalidDomain("rho must be positive");
    const double k = std::ceil(std::pow(static_cast<double>(n), 1.0 + eps / 2.0) *
                               std::pow(rho, 1.0 + eps / 4.0));
    if (!(k >= 1.0)) return 1;
    if (k > static_cast<double>(kMaxPcfPieces)) {
        throw PieceBudgetExceeded("piece count " + std::to_string(k) + " exceeds the 2^26 cap");
    }
    return static_cast<std::size_t>(k);
}

PcaIndex::PcaIndex(const SortedKeyArray& a, double eps, double rho)
    : array_(&a), eps_(eps), rho_(rho) {
    if (a.empty()) throw EmptyInput("cannot index an empty array");
    model_ = build_pcf(a, 1, a.size(), pca_piece_count(a.size(), eps, rho), 0.0, 1.0);
}

PcaIndex::PcaIndex(PcfModel model, const SortedKeyArray& a)
    : model_(std::move(model)), array_(&a) {}

Rank PcaIndex::query(double q, OpContext& ctx) const {
    const std::size_t n = array_->size();
    if (q < model_.lo) return 0;
    if (q > model_.hi) return n;

    const std::uint64_t est2 = model_.estimate2(q);
    ctx.charge_model_read();

    const std::uint64_t err2 = 2 * model_.max_err;
    std::uint64_t rank_lo = est2 > err2 ? (est2 - err2 + 1) / 2 : 0;  // ceil((est - err) / 2)
    std::uint64_t rank_hi = (est2 + err2) / 2;                        // floor
    if (rank_hi > n) rank_hi = n;
    if (rank_lo > rank_hi) rank_lo = rank_hi;
    if (rank_lo == rank_hi) return rank_lo;
    return rank_lo + binary_search_rank(*array_, q, rank_lo + 1, rank_hi, ctx);
}

PcaIndex build_pca(const SortedKeyArray& a, double eps, double rho) {
    return PcaIndex(a, eps, rho);
}

void write_pcf(std::ostream& out, const PcfModel& m) {
    put_u64(out, m.piece_count());
    put_u64(out, m.max_err);
    put_f64(out, m.lo);
    put_f64(out, m.hi);
    for (std::uint64_t p : m.half_ranks2) put_u64(out, p);
    if (!out) throw IoFailure("model write failed");
}

PcfModel read_pcf(std::istream& in) {
    PcfModel m;
    const std::uint64_t k = get_u64(in);
    if (k < 1 || k > kMaxPcfPieces) throw BadHeader("implausible piece count");
    m.max_err = get_u64(in);
    m.lo = get_f64(in);
    m.hi = get_f64(in);
    if (!(m.lo < m.hi)) throw BadHeader("bad model domain");
    m.half_ranks2.resize(k);
    for (auto& p : m.half_ranks2) p = get_u64(in);
    for (std::size_t i = 0; i + 1 < m.half_ranks2.size(); ++i) {
        if (m.half_ranks2[i] > m.half_ranks2[i + 1]) throw BadHeader("pieces not monotone");
    }
    return m;
}

}  // namespace sublog
