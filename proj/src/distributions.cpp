#include "sublog/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "sublog/io.hpp"
#include "sublog/rng.hpp"

namespace sublog {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }
double std_normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double parse_num(const std::string& spec, const std::string& key, const std::string& val) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(val, &used);
    } catch (const std::exception&) {
        throw UsageError("bad value for '" + key + "' in dist spec '" + spec + "'");
    }
    if (used != val.size()) throw UsageError("trailing junk after '" + key + "' in '" + spec + "'");
    return x;
}

}  // namespace

CdfModel CdfModel::uniform() {
    CdfModel m;
    m.kind_ = CdfKind::Uniform;
    return m;
}

CdfModel CdfModel::power(double t) {
    if (!(t > 0.0)) throw UsageError("power exponent must be positive");
    CdfModel m;
    m.kind_ = CdfKind::Power;
    m.t_ = t;
    return m;
}

CdfModel CdfModel::trunc_gaussian(double mu, double sigma, double lo, double hi) {
    if (!(sigma > 0.0)) throw UsageError("gaussian sigma must be positive");
    if (!(lo < hi)) throw UsageError("gaussian domain must be nonempty");
    CdfModel m;
    m.kind_ = CdfKind::TruncGaussian;
    m.lo_ = lo;
    m.hi_ = hi;
    m.mu_ = mu;
    m.sigma_ = sigma;
    m.phi_lo_ = std_normal_cdf((lo - mu) / sigma);
    m.phi_span_ = std_normal_cdf((hi - mu) / sigma) - m.phi_lo_;
    if (!(m.phi_span_ > 0.0)) throw UsageError("gaussian mass on the domain is zero");
    return m;
}

CdfModel CdfModel::empirical(std::vector<double> sorted_keys) {
    if (sorted_keys.empty()) throw EmptyInput("empirical model needs keys");
    for (std::size_t i = 0; i + 1 < sorted_keys.size(); ++i) {
        if (!(sorted_keys[i] <= sorted_keys[i + 1])) {
            throw DegenerateData("empirical keys not ascending");
        }
    }
    CdfModel m;
    m.kind_ = CdfKind::Empirical;
    m.lo_ = sorted_keys.front();
    m.hi_ = sorted_keys.back();
    if (!(m.lo_ < m.hi_)) throw DegenerateData("empirical keys all equal");
    m.emp_ = std::move(sorted_keys);
    return m;
}

CdfModel CdfModel::parse(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);

    if (head == "uniform") {
        if (!rest.empty()) throw UsageError("uniform takes no parameters: '" + spec + "'");
        return uniform();
    }
    if (head == "empirical") {
        if (rest.empty()) throw UsageError("empirical needs a path: '" + spec + "'");
        return empirical(read_norm_key_file(rest));
    }
    if (head != "power" && head != "gauss") {
        throw UsageError("unknown distribution '" + spec + "'");
    }

    double t = 0.0, mu = 0.5, sigma = 0.0;
    bool have_t = false, have_sigma = false;
    std::size_t pos = 0;
    while (pos < rest.size()) {
        auto comma = rest.find(',', pos);
        if (comma == std::string::npos) comma = rest.size();
        const std::string kv = rest.substr(pos, comma - pos);
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw UsageError("expected key=value in '" + spec + "'");
        const std::string key = kv.substr(0, eq);
        const std::string val = kv.substr(eq + 1);
        if (key == "t") {
            t = parse_num(spec, key, val);
            have_t = true;
        } else if (key == "mu") {
            mu = parse_num(spec, key, val);
        } else if (key == "sigma") {
            sigma = parse_num(spec, key, val);
            have_sigma = true;
        } else {
            throw UsageError("unknown parameter '" + key + "' in '" + spec + "'");
        }
        pos = comma + 1;
    }
    if (head == "power") {
        if (!have_t) throw UsageError("power needs t=..., got '" + spec + "'");
        return power(t);
    }
    if (!have_sigma) throw UsageError("gauss needs sigma=..., got '" + spec + "'");
    return trunc_gaussian(mu, sigma);
}

double CdfModel::cdf(double x) const {
    if (x <= lo_) return 0.0;
    if (x >= hi_) return 1.0;
    switch (kind_) {
        case CdfKind::Uniform:
            return (x - lo_) / (hi_ - lo_);
        case CdfKind::Power:
            return std::pow(x, t_);
        case CdfKind::TruncGaussian:
            return (std_normal_cdf((x - mu_) / sigma_) - phi_lo_) / phi_span_;
        case CdfKind::Empirical: {
            auto it = std::upper_bound(emp_.begin(), emp_.end(), x);
            return static_cast<double>(it - emp_.begin()) / static_cast<double>(emp_.size());
        }
    }
    return 0.0;
}

double CdfModel::inverse_cdf(double u) const {
    u = std::clamp(u, 0.0, 1.0);
    switch (kind_) {
        case CdfKind::Uniform:
            return lo_ + u * (hi_ - lo_);
        case CdfKind::Power:
            return std::pow(u, 1.0 / t_);
        case CdfKind::TruncGaussian: {
            // Bisection on the monotone CDF to 1e-12.
            double lo = lo_, hi = hi_;
            while (hi - lo > 1e-12) {
                double mid = 0.5 * (lo + hi);
                if (cdf(mid) < u) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        case CdfKind::Empirical: {
            auto idx = static_cast<std::size_t>(u * static_cast<double>(emp_.size()));
            if (idx >= emp_.size()) idx = emp_.size() - 1;
            return emp_[idx];
        }
    }
    return lo_;
}

PdfBounds CdfModel::pdf_bounds() const {
    switch (kind_) {
        case CdfKind::Uniform:
            return {1.0 / (hi_ - lo_), 1.0 / (hi_ - lo_)};
        case CdfKind::Power:
            // f(x) = t x^(t-1): increasing for t > 1 (vanishes at 0),
            // decreasing for t < 1 (unbounded at 0).
            if (t_ >= 1.0) return {t_ == 1.0 ? 1.0 : 0.0, t_};
            return {t_, 0.0};  // no finite upper bound; flagged below
        case CdfKind::TruncGaussian: {
            const double za = (lo_ - mu_) / sigma_;
            const double zb = (hi_ - mu_) / sigma_;
            const double scale = 1.0 / (sigma_ * phi_span_);
            // Density peaks at the mean when it lies inside the domain,
            // otherwise at the nearer edge; the minimum sits at the
            // farther edge.
            double upper;
            if (mu_ >= lo_ && mu_ <= hi_) {
                upper = std_normal_pdf(0.0) * scale;
            } else {
                upper = std_normal_pdf(std::min(std::abs(za), std::abs(zb))) * scale;
            }
            const double lower = std_normal_pdf(std::max(std::abs(za), std::abs(zb))) * scale;
            return {lower, upper};
        }
        case CdfKind::Empirical:
            throw UnboundedPdf("empirical model declares no density bounds");
    }
    return {0.0, 0.0};
}

std::string CdfModel::name() const {
    switch (kind_) {
        case CdfKind::Uniform:
            return "uniform";
        case CdfKind::Power:
            return "power:t=" + std::to_string(t_);
        case CdfKind::TruncGaussian:
            return "gauss:mu=" + std::to_string(mu_) + ",sigma=" + std::to_string(sigma_);
        case CdfKind::Empirical:
            return "empirical";
    }
    return "?";
}

double cdf_eval(const CdfModel& m, double x) { return m.cdf(x); }

PdfBounds pdf_bound(const CdfModel& m) {
    PdfBounds b = m.pdf_bounds();
    if (m.kind() == CdfKind::Power && b.upper == 0.0) {
        throw UnboundedPdf("power density with t < 1 has no finite upper bound");
    }
    return b;
}

double pdf_ratio(const CdfModel& m) {
    PdfBounds b = pdf_bound(m);
    if (!(b.lower > 0.0)) throw UnboundedPdf("density lower bound is zero");
    return b.upper / b.lower;
}

SortedKeyArray sample_sorted(const CdfModel& m, std::size_t n, std::uint64_t seed) {
    std::vector<double> keys(n);
    auto gen = make_engine(seed);
    for (auto& k : keys) k = m.inverse_cdf(next_unit(gen));
    std::sort(keys.begin(), keys.end());
    return SortedKeyArray::from_sorted(std::move(keys), m.domain_lo(), m.domain_hi());
}

SubExpComposite build_subexp(const UnitIndexBuilder& builder, SortedKeyArray raw) {
    if (raw.empty()) throw EmptyInput("cannot build composite over empty array");
    const std::size_t n = raw.size();

    SubExpComposite c;
    // l = ceil(ln(2 n ln n)), unit tail constant; degenerate for n <= 2,
    // where any positive width works because fallback covers escapes.
    const double arg = 2.0 * static_cast<double>(n) * std::log(static_cast<double>(n));
    c.l_ = n >= 2 ? static_cast<long>(std::ceil(std::log(arg))) : 1;
    if (c.l_ < 1) c.l_ = 1;

    const double span = static_cast<double>(c.l_);
    c.fallback_ = raw.front() < -span || raw.back() > span;
    if (c.fallback_) {
        double lo = std::min(raw.front(), -span);
        double hi = std::max(raw.back(), span);
        c.raw_ = SortedKeyArray::from_sorted(std::vector<double>(raw.keys()), lo, hi);
        return c;
    }
    c.raw_ = SortedKeyArray::from_sorted(std::vector<double>(raw.keys()), -span, span);

    const std::size_t slices = 2 * static_cast<std::size_t>(c.l_);
    c.slices_.resize(slices);
    const auto& keys = c.raw_.keys();
    std::size_t pos = 0;
    for (std::size_t s = 0; s < slices; ++s) {
        const double left = -span + static_cast<double>(s);
        const bool last = s + 1 == slices;
        c.slices_[s].rank_below = pos;
        std::vector<double> shifted;
        while (pos < n && (keys[pos] < left + 1.0 || (last && keys[pos] <= left + 1.0))) {
            shifted.push_back(keys[pos] - left);
            ++pos;
        }
        if (!shifted.empty()) {
            auto slice = SortedKeyArray::from_sorted(std::move(shifted), 0.0, 1.0);
            c.slices_[s].keys = std::move(slice);
            c.slices_[s].index = builder(c.slices_[s].keys);
        }
    }
    return c;
}

Rank query_subexp(const SubExpComposite& c, double q, OpContext& ctx) {
    const std::size_t n = c.raw_.size();
    if (c.fallback_) {
        return binary_search_rank(c.raw_, q, 1, n, ctx);
    }
    const double span = static_cast<double>(c.l_);
    if (q < -span) return 0;
    if (q >= span) return n;
    auto s = static_cast<std::size_t>(std::floor(q + span));
    if (s >= c.slices_.size()) s = c.slices_.size() - 1;
    const auto& slice = c.slices_[s];
    ctx.charge_model_read();  // slice-table lookup
    if (!slice.index) return slice.rank_below;
    return slice.rank_below + slice.index->query(q - (-span + static_cast<double>(s)), ctx);
}

}  // namespace sublog
