#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "indelphy/phylogeny.hpp"
#include "indelphy/topology.hpp"

namespace indelphy {

// Parse failure with the 0-based byte offset where it was detected.
class NewickError : public std::runtime_error {
public:
    NewickError(const std::string& message, std::size_t offset);
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// Rooted tree; branch lengths become edge times, all rates 0. Internal nodes
// may be unary only at the root (stem); polytomies are rejected here, use the
// topology parser for shape-only work.
Phylogeny parse_newick_tree(const std::string& text);

// Unrooted shape over the leaf names; accepts polytomies and ignores lengths.
Topology parse_newick_topology(const std::string& text);

// Canonical text: children ordered by their smallest descendant leaf name.
// emit -> parse -> emit is a fixed point.
std::string emit_newick(const Phylogeny& tree, bool with_lengths = true);

// Serialization rooting is arbitrary; no lengths.
std::string emit_newick(const Topology& topo);

}  // namespace indelphy
