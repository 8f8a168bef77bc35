#include "indelphy/topology.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <unordered_map>

namespace indelphy {

namespace {

std::size_t words_for(std::size_t n) { return (n + 63) / 64; }

// zero out bits above n in the top word
void trim(std::vector<std::uint64_t>& bits, std::size_t n) {
    if (n & 63) bits.back() &= (std::uint64_t(1) << (n & 63)) - 1;
}

}  // namespace

std::size_t Split::count() const {
    std::size_t c = 0;
    for (std::uint64_t w : bits) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

Split Split::make(const std::vector<std::uint64_t>& mask, std::size_t n) {
    if (mask.size() != words_for(n))
        throw std::invalid_argument("Split::make: mask has wrong word count");
    Split s;
    s.bits = mask;
    trim(s.bits, n);
    if (s.bits[0] & 1u) {
        for (auto& w : s.bits) w = ~w;
        trim(s.bits, n);
    }
    return s;
}

bool splits_compatible(const Split& x, const Split& y, std::size_t n) {
    if (x.bits.size() != y.bits.size() || x.bits.size() != words_for(n))
        throw std::invalid_argument("splits_compatible: size mismatch");
    bool e00 = true, e01 = true, e10 = true, e11 = true;
    std::vector<std::uint64_t> full(words_for(n), ~std::uint64_t(0));
    trim(full, n);
    for (std::size_t i = 0; i < x.bits.size(); ++i) {
        std::uint64_t a = x.bits[i], b = y.bits[i], m = full[i];
        e00 &= ((~a & ~b) & m) == 0;
        e01 &= ((~a & b) & m) == 0;
        e10 &= ((a & ~b) & m) == 0;
        e11 &= ((a & b) & m) == 0;
    }
    return e00 || e01 || e10 || e11;
}

Topology::Topology(std::vector<std::string> leaf_names, std::vector<Split> splits)
    : leaves_(std::move(leaf_names)), splits_(std::move(splits)) {
    std::sort(leaves_.begin(), leaves_.end());
    if (std::adjacent_find(leaves_.begin(), leaves_.end()) != leaves_.end())
        throw std::invalid_argument("Topology: duplicate leaf name");
    const std::size_t n = leaves_.size();
    for (const Split& s : splits_) {
        if (s.bits.size() != words_for(n))
            throw std::invalid_argument("Topology: split size does not match leaf set");
        if (s.bits[0] & 1u) throw std::invalid_argument("Topology: split not canonical");
        std::size_t c = s.count();
        if (c < 2 || c > n - 2) throw std::invalid_argument("Topology: trivial split");
    }
    std::sort(splits_.begin(), splits_.end());
    splits_.erase(std::unique(splits_.begin(), splits_.end()), splits_.end());
    for (std::size_t i = 0; i < splits_.size(); ++i)
        for (std::size_t j = i + 1; j < splits_.size(); ++j)
            if (!splits_compatible(splits_[i], splits_[j], n))
                throw std::invalid_argument("Topology: incompatible splits");
}

Topology Topology::from_tree(const Phylogeny& tree) {
    std::vector<std::string> names = tree.leaf_names();
    std::vector<std::string> sorted = names;
    std::sort(sorted.begin(), sorted.end());
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < sorted.size(); ++i) index[sorted[i]] = i;
    const std::size_t n = sorted.size();

    // leaf set below every node, bottom-up
    std::vector<std::vector<std::uint64_t>> below(tree.size(),
                                                  std::vector<std::uint64_t>(words_for(n), 0));
    std::vector<Split> splits;
    // nodes were appended parent-first, so a reverse sweep visits children first
    for (std::size_t v = tree.size(); v-- > 0;) {
        const PhyloNode& node = tree.nodes[static_cast<int>(v)];
        if (tree.is_leaf(static_cast<int>(v))) {
            std::size_t i = index.at(node.name);
            below[v][i >> 6] |= std::uint64_t(1) << (i & 63);
        } else {
            for (int c : node.children)
                if (c >= 0)
                    for (std::size_t w = 0; w < below[v].size(); ++w) below[v][w] |= below[c][w];
        }
        if (node.parent >= 0) {
            Split s = Split::make(below[v], n);
            std::size_t c = s.count();
            if (c >= 2 && c <= n - 2) splits.push_back(s);
        }
    }
    return Topology(std::move(sorted), std::move(splits));
}

std::size_t robinson_foulds(const Topology& a, const Topology& b) {
    if (a.leaves() != b.leaves())
        throw std::invalid_argument("robinson_foulds: topologies have different leaf sets");
    std::size_t common = 0;
    std::size_t i = 0, j = 0;
    const auto& sa = a.splits();
    const auto& sb = b.splits();
    while (i < sa.size() && j < sb.size()) {
        if (sa[i] == sb[j]) {
            ++common;
            ++i;
            ++j;
        } else if (sa[i] < sb[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return sa.size() + sb.size() - 2 * common;
}

}  // namespace indelphy
