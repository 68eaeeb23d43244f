#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "sublog/core.hpp"
#include "sublog/instrument.hpp"

namespace sublog {

enum class CdfKind { Uniform, Power, TruncGaussian, Empirical };

/// Declared density bounds: lower <= f(x) <= upper on the model domain.
struct PdfBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// An evaluable distribution model: exact CDF, inverse CDF for sampling,
/// and declared PDF bounds where the family admits them.
///
/// Families:
///   Uniform            F(x) = x on [0, 1]
///   Power(t)           F(x) = x^t on [0, 1], t > 0
///   TruncGaussian      Gaussian(mu, sigma) truncated to [lo, hi]
///   Empirical          step CDF of a stored key set
class CdfModel {
public:
    static CdfModel uniform();
    static CdfModel power(double t);
    static CdfModel trunc_gaussian(double mu, double sigma, double lo = 0.0, double hi = 1.0);
    static CdfModel empirical(std::vector<double> sorted_keys);

    /// Parses a distribution spec string:
    ///   "uniform" | "power:t=4" | "gauss:mu=0.5,sigma=0.1" | "empirical:<path>"
    /// where <path> names a normalized key file. Throws UsageError.
    static CdfModel parse(const std::string& spec);

    CdfKind kind() const { return kind_; }
    double domain_lo() const { return lo_; }
    double domain_hi() const { return hi_; }

    /// Exact CDF value in [0, 1]; clamps outside the domain (0 below, 1 above).
    double cdf(double x) const;

    /// Quantile for u in [0, 1]. Analytic where available, otherwise
    /// bisection to 1e-12 absolute tolerance.
    double inverse_cdf(double u) const;

    /// Declared PDF bounds. Throws UnboundedPdf when the family declares
    /// none (Empirical).
    PdfBounds pdf_bounds() const;

    /// Canonical spec string, used as the CSV "dist" column.
    std::string name() const;

private:
    CdfModel() = default;

    CdfKind kind_ = CdfKind::Uniform;
    double lo_ = 0.0, hi_ = 1.0;
    double t_ = 1.0;               // Power
    double mu_ = 0.5, sigma_ = 0.1;  // TruncGaussian
    double phi_lo_ = 0.0, phi_span_ = 1.0;  // cached truncation normalizer
    std::vector<double> emp_;      // Empirical support, ascending
};

/// Free-function forms of the model surface.
double cdf_eval(const CdfModel& m, double x);
PdfBounds pdf_bound(const CdfModel& m);

/// upper/lower density ratio; throws UnboundedPdf when lower vanishes,
/// which is what callers requiring a positive lower bound must see.
double pdf_ratio(const CdfModel& m);

/// Counted CDF inference: returns F(x), charging one CDF evaluation and
/// one memory operation.
inline double counted_cdf(const CdfModel& m, double x, OpContext& ctx) {
    double v = m.cdf(x);
    ctx.charge_cdf(x);
    return v;
}

/// n i.i.d. draws via inverse CDF, sorted ascending; deterministic per seed.
SortedKeyArray sample_sorted(const CdfModel& m, std::size_t n, std::uint64_t seed);

/// Builds a unit-domain rank index over one slice of keys in [0, 1].
using UnitIndexBuilder =
    std::function<std::unique_ptr<RankIndex>(const SortedKeyArray& slice)>;

/// Composite index for centered data on an unbounded domain. The key
/// range [-l, l], l = ceil(ln(2 n ln n)), is cut into 2l unit slices,
/// each carrying its own unit-domain sub-index together with the
/// cumulative rank of everything to its left. Data escaping [-l, l]
/// flips the composite into fallback mode where queries run a plain
/// binary search over the whole array.
class SubExpComposite {
public:
    std::size_t size() const { return raw_.size(); }
    long half_width() const { return l_; }
    bool fallback() const { return fallback_; }
    const SortedKeyArray& raw() const { return raw_; }
    std::size_t slice_count() const { return slices_.size(); }
    bool slice_empty(std::size_t i) const { return slices_[i].index == nullptr; }

    friend SubExpComposite build_subexp(const UnitIndexBuilder& builder, SortedKeyArray raw);
    friend Rank query_subexp(const SubExpComposite& c, double q, OpContext& ctx);

private:
    struct Slice {
        SortedKeyArray keys;                // slice keys shifted into [0, 1]
        std::unique_ptr<RankIndex> index;   // null when the slice is empty
        std::size_t rank_below = 0;         // keys strictly left of the slice
    };

    long l_ = 0;
    bool fallback_ = false;
    SortedKeyArray raw_;
    std::vector<Slice> slices_;
};

/// Builds the composite over centered keys (caller subtracts the sample
/// mean). Throws EmptyInput for an empty array.
SubExpComposite build_subexp(const UnitIndexBuilder& builder, SortedKeyArray raw);

/// Exact rank of q in the composite's array. Routing charges one memory
/// operation (the slice-table read); sub-index and fallback costs are
/// counted by the machinery they use.
Rank query_subexp(const SubExpComposite& c, double q, OpContext& ctx);

}  // namespace sublog
