#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "indelphy/phylogeny.hpp"

namespace indelphy {

// One bipartition of a leaf set, as a bitmask over the sorted leaf order.
// Canonical form: the bit of the first leaf is 0, so each bipartition has
// exactly one representation.
struct Split {
    std::vector<std::uint64_t> bits;

    bool operator==(const Split& o) const { return bits == o.bits; }
    bool operator<(const Split& o) const { return bits < o.bits; }

    bool test(std::size_t i) const { return (bits[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) { bits[i >> 6] |= std::uint64_t(1) << (i & 63); }
    std::size_t count() const;

    // canonicalized split over n leaves from an arbitrary-side mask
    static Split make(const std::vector<std::uint64_t>& mask, std::size_t n);
};

bool splits_compatible(const Split& x, const Split& y, std::size_t n);

// Unrooted tree shape over named leaves: the sorted leaf set plus the set of
// nontrivial splits (>= 2 leaves on each side). n-3 splits = fully resolved.
class Topology {
public:
    Topology() = default;
    // validates: names sorted-unique after sorting, splits canonical,
    // nontrivial, pairwise compatible
    Topology(std::vector<std::string> leaf_names, std::vector<Split> splits);

    static Topology from_tree(const Phylogeny& tree);

    const std::vector<std::string>& leaves() const { return leaves_; }
    const std::vector<Split>& splits() const { return splits_; }
    std::size_t n_leaves() const { return leaves_.size(); }
    bool fully_resolved() const {
        return n_leaves() >= 3 && splits_.size() == n_leaves() - 3;
    }

    bool operator==(const Topology& o) const {
        return leaves_ == o.leaves_ && splits_ == o.splits_;
    }

private:
    std::vector<std::string> leaves_;  // sorted
    std::vector<Split> splits_;        // sorted, deduplicated
};

// Size of the symmetric difference of the nontrivial split sets. Rejects
// mismatched leaf sets.
std::size_t robinson_foulds(const Topology& a, const Topology& b);

}  // namespace indelphy
