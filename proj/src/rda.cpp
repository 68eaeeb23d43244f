#include "sublog/rda.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "sublog/io.hpp"

namespace sublog {

namespace {

constexpr std::uint64_t kRdaMagic = 0x3130414452425553ULL;  // "SUBRDA01"

std::uint64_t coverage_stride(std::size_t k) {
    const double kd = static_cast<double>(k);
    const double v = 2.0 * std::sqrt(kd) * (1.0 + std::sqrt(0.5 * std::log(std::log(kd)))) + 2.0;
    return static_cast<std::uint64_t>(std::ceil(v));
}

RdaNode build_node(const SortedKeyArray& a, double ratio, std::size_t lo, std::size_t hi) {
    RdaNode node;
    node.lo = lo;
    node.hi = hi;

    const std::size_t k = hi - lo + 1;
    if (k <= kRdaLeafCoverage) {
        node.kind = RdaNode::Kind::LeafSmall;
        return node;
    }
    const double key_lo = a.at1(lo);
    const double key_hi = a.at1(hi);
    if (!(key_lo < key_hi)) {
        node.kind = RdaNode::Kind::LeafDegenerate;
        return node;
    }
    const std::uint64_t stride = coverage_stride(k);
    if (2 * stride + 1 >= k) {
        // The stride formula stalls for coverage just above the leaf
        // constant; a child would be as large as the node.
        node.kind = RdaNode::Kind::LeafNoShrink;
        return node;
    }

    const auto pieces = static_cast<std::size_t>(std::ceil(ratio * std::sqrt(static_cast<double>(k))));
    PcfModel model = build_pcf(a, lo, hi, pieces, key_lo, key_hi);
    if (2 * model.max_err > stride) {  // measured error above k'/2
        node.kind = RdaNode::Kind::LeafDemoted;
        return node;
    }

    node.kind = RdaNode::Kind::Internal;
    node.stride = stride;
    node.model = std::move(model);
    const std::size_t child_count = (k + stride - 1) / stride;
    node.children.reserve(child_count);
    for (std::size_t z = 0; z < child_count; ++z) {
        const std::size_t child_lo = lo + z * stride;
        const std::size_t child_hi = std::min(lo + (z + 2) * stride, hi);
        node.children.push_back(build_node(a, ratio, child_lo, child_hi));
    }
    return node;
}

}  // namespace

RdaIndex rda_build(const SortedKeyArray& a, double ratio) {
    if (a.empty()) throw EmptyInput("cannot index an empty array");
    if (!(ratio >= 1.0)) throw InvalidDomain("density ratio must be at least 1");
    RdaIndex idx;
    idx.ratio = ratio;
    idx.array = &a;
    idx.root = build_node(a, ratio, 1, a.size());
    return idx;
}

Rank rda_query(const RdaIndex& idx, double q, OpContext& ctx) {
    const SortedKeyArray& a = *idx.array;
    // Rank 0 is the one answer no coverage window holds; resolve it here.
    if (counted_read(a, 1, ctx) > q) return 0;

    const RdaNode* node = &idx.root;
    while (!node->is_leaf()) {
        const std::uint64_t est2 = node->model.estimate2(q);
        ctx.charge_model_read();
        const std::uint64_t err2 = 2 * node->max_err();
        // Child index floor((est - err) / k'); the measured-error bound
        // keeps [est - err, est + err] inside that child's coverage.
        std::size_t z = est2 > err2
                            ? static_cast<std::size_t>((est2 - err2) / (2 * node->stride))
                            : 0;
        if (z >= node->children.size()) z = node->children.size() - 1;
        node = &node->children[z];
    }
    return (node->lo - 1) + binary_search_rank(a, q, node->lo, node->hi, ctx);
}

std::size_t rda_size_ints(const RdaIndex& idx) {
    std::size_t total = 0;
    rda_visit(idx.root, [&](const RdaNode& n) {
        total += n.is_leaf() ? 2 : n.model.piece_count() + 3;
    });
    return total;
}

std::size_t rda_height(const RdaNode& node) {
    std::size_t h = 0;
    for (const RdaNode& c : node.children) h = std::max(h, rda_height(c));
    return h + 1;
}

namespace {

void write_node(std::ostream& out, const RdaNode& n) {
    put_u64(out, static_cast<std::uint64_t>(n.kind));
    put_u64(out, n.lo);
    put_u64(out, n.hi);
    if (!n.is_leaf()) {
        put_u64(out, n.stride);
        write_pcf(out, n.model);
        put_u64(out, n.children.size());
        for (const RdaNode& c : n.children) write_node(out, c);
    }
}

RdaNode read_node(std::istream& in, std::size_t n_keys, std::size_t depth) {
    if (depth > 64) throw BadHeader("index tree too deep");
    RdaNode n;
    const std::uint64_t kind = get_u64(in);
    if (kind > static_cast<std::uint64_t>(RdaNode::Kind::LeafNoShrink)) {
        throw BadHeader("unknown node kind");
    }
    n.kind = static_cast<RdaNode::Kind>(kind);
    n.lo = get_u64(in);
    n.hi = get_u64(in);
    if (n.lo < 1 || n.hi > n_keys || n.lo > n.hi) throw BadHeader("bad node coverage");
    if (!n.is_leaf()) {
        n.stride = get_u64(in);
        if (n.stride == 0) throw BadHeader("zero stride");
        n.model = read_pcf(in);
        const std::uint64_t children = get_u64(in);
        if (children == 0 || children > n_keys) throw BadHeader("bad child count");
        n.children.reserve(children);
        for (std::uint64_t i = 0; i < children; ++i) {
            n.children.push_back(read_node(in, n_keys, depth + 1));
        }
    }
    return n;
}

}  // namespace

void write_rda(std::ostream& out, const RdaIndex& idx) {
    put_u64(out, kRdaMagic);
    put_u64(out, 1);  // format version
    put_u64(out, idx.array->size());
    put_f64(out, idx.ratio);
    write_node(out, idx.root);
    if (!out) throw IoFailure("index write failed");
}

RdaIndex read_rda(std::istream& in, const SortedKeyArray& a) {
    if (get_u64(in) != kRdaMagic) throw BadHeader("not a tree index file");
    const std::uint64_t version = get_u64(in);
    if (version != 1) throw BadHeader("unsupported index version " + std::to_string(version));
    const std::uint64_t n = get_u64(in);
    if (n != a.size()) throw BadHeader("index was built over a different array size");
    RdaIndex idx;
    idx.ratio = get_f64(in);
    idx.array = &a;
    idx.root = read_node(in, a.size(), 0);
    if (idx.root.lo != 1 || idx.root.hi != a.size()) throw BadHeader("root coverage mismatch");
    return idx;
}

}  // namespace sublog
