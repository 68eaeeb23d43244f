#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sublog/core.hpp"
#include "sublog/instrument.hpp"
#include "sublog/pca.hpp"

namespace sublog {

/// Coverage size at or below which a node is always a leaf.
inline constexpr std::size_t kRdaLeafCoverage = 61;

/// Node of the recursive model tree. Coverage [lo, hi] is the 1-based
/// inclusive range of array positions the node can still answer for;
/// every query reaching the node has its true rank in [lo-1, hi].
///
/// Internal nodes carry a piecewise-constant model of the node-relative
/// rank function and children spread at stride k' with coverage 2k',
/// child z covering [lo + z*k', min(lo + (z+2)*k', hi)]. A node is
/// demoted to a leaf when the measured model error exceeds k'/2, when
/// its key range is degenerate (duplicates), or when a child would not
/// be smaller than the node itself (the stride formula stalls for
/// coverage just above the leaf constant; recursing would not shrink).
struct RdaNode {
    enum class Kind : std::uint8_t {
        Internal = 0,
        LeafSmall = 1,      // coverage <= kRdaLeafCoverage
        LeafDemoted = 2,    // measured model error above k'/2
        LeafDegenerate = 3, // equal boundary keys
        LeafNoShrink = 4,   // child coverage would equal the node's
    };

    Kind kind = Kind::LeafSmall;
    std::size_t lo = 1, hi = 1;
    std::uint64_t stride = 0;  // k'; internal nodes only
    PcfModel model;            // internal nodes only
    std::vector<RdaNode> children;

    bool is_leaf() const { return kind != Kind::Internal; }
    std::size_t coverage() const { return hi - lo + 1; }
    std::uint64_t max_err() const { return (stride + 1) / 2; }
};

/// Recursive distribution approximator: a tree of piecewise-constant
/// models, each level shrinking coverage by roughly a square root.
/// Non-owning view of the key array.
struct RdaIndex {
    RdaNode root;
    double ratio = 1.0;  // density ratio used to size node models
    const SortedKeyArray* array = nullptr;
};

/// Builds the tree for the whole array. ratio >= 1 scales the per-node
/// piece budget t = ceil(ratio * sqrt(k)). Exactness never depends on
/// ratio matching the data; node errors are measured at build time.
RdaIndex rda_build(const SortedKeyArray& a, double ratio);

/// Exact rank of q: walks internal models (one counted read each) to a
/// leaf, then a counted binary search over the leaf coverage. The
/// wrapper first resolves q < a_1 with one counted read of a_1.
Rank rda_query(const RdaIndex& idx, double q, OpContext& ctx);

/// Stored integers across the tree: per internal node its pieces plus
/// (stride, lo, hi); per leaf its (lo, hi) offsets. Leaf content is
/// never copied out of the shared array.
std::size_t rda_size_ints(const RdaIndex& idx);

std::size_t rda_height(const RdaNode& node);

/// Preorder visit of every node.
template <typename Fn>
void rda_visit(const RdaNode& node, Fn&& fn) {
    fn(node);
    for (const RdaNode& c : node.children) rda_visit(c, fn);
}

/// Versioned wire format: magic + version, then a preorder node stream
/// with 8-byte little-endian fields.
void write_rda(std::ostream& out, const RdaIndex& idx);
RdaIndex read_rda(std::istream& in, const SortedKeyArray& a);

}  // namespace sublog
