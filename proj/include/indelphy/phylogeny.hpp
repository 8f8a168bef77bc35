#pragma once

#include <array>
#include <string>
#include <vector>

#include "indelphy/edge_params.hpp"

namespace indelphy {

// Rooted binary phylogeny. Each non-root node stores the parameters of the
// edge connecting it to its parent.
struct PhyloNode {
    int parent = -1;
    std::array<int, 2> children{-1, -1};
    EdgeParams edge{};
    std::string name;  // required and unique on leaves
};

struct Phylogeny {
    std::vector<PhyloNode> nodes;
    int root = 0;

    int add_root();
    int add_child(int parent, const EdgeParams& edge, const std::string& name = "");

    bool is_leaf(int v) const {
        return nodes[v].children[0] < 0 && nodes[v].children[1] < 0;
    }
    std::size_t size() const { return nodes.size(); }

    // leaves in left-to-right depth-first order
    std::vector<int> leaves() const;
    std::vector<std::string> leaf_names() const;

    // binary shape, consistent parent/child links, unique nonempty leaf names,
    // valid edge parameters
    void validate() const;

    double root_to_leaf_time(int leaf) const;
    bool is_ultrametric(double tol = 1e-9) const;

    int mrca(int a, int b) const;
    // edges on the path between two nodes, each identified by its child node
    std::vector<int> path_edges(int a, int b) const;
    double path_time(int a, int b) const;
    // one-way time from a contemporary leaf down to the pair's common ancestor
    double time_to_mrca(int a, int b) const;

    int depth_edges(int v) const;
    // largest leaf-to-leaf path length counted in edges
    int graph_diameter() const;
};

// r -> u -> {a, b}: the two-level fork used throughout the validation harness.
Phylogeny make_fork(const EdgeParams& eu, const EdgeParams& ea, const EdgeParams& eb);
// root -> single leaf "a"
Phylogeny make_single_edge(const EdgeParams& e);
// root -> {a, b}
Phylogeny make_cherry(const EdgeParams& ea, const EdgeParams& eb);

}  // namespace indelphy
