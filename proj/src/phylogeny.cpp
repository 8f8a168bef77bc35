#include "indelphy/phylogeny.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace indelphy {

int Phylogeny::add_root() {
    if (!nodes.empty()) throw std::logic_error("add_root: tree already has nodes");
    nodes.emplace_back();
    root = 0;
    return 0;
}

int Phylogeny::add_child(int parent, const EdgeParams& edge, const std::string& name) {
    if (parent < 0 || parent >= static_cast<int>(nodes.size()))
        throw std::invalid_argument("add_child: no such parent");
    auto& p = nodes[parent];
    int slot = p.children[0] < 0 ? 0 : p.children[1] < 0 ? 1 : -1;
    if (slot < 0) throw std::invalid_argument("add_child: parent already has two children");
    int id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    nodes.back().parent = parent;
    nodes.back().edge = edge;
    nodes.back().name = name;
    nodes[parent].children[slot] = id;
    return id;
}

std::vector<int> Phylogeny::leaves() const {
    std::vector<int> out;
    std::vector<int> stack{root};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (is_leaf(v)) {
            out.push_back(v);
            continue;
        }
        // push right first so the left child is visited first
        if (nodes[v].children[1] >= 0) stack.push_back(nodes[v].children[1]);
        if (nodes[v].children[0] >= 0) stack.push_back(nodes[v].children[0]);
    }
    return out;
}

std::vector<std::string> Phylogeny::leaf_names() const {
    std::vector<std::string> out;
    for (int v : leaves()) out.push_back(nodes[v].name);
    return out;
}

void Phylogeny::validate() const {
    if (nodes.empty()) throw std::invalid_argument("phylogeny: empty tree");
    if (root < 0 || root >= static_cast<int>(nodes.size()))
        throw std::invalid_argument("phylogeny: bad root index");
    if (nodes[root].parent != -1) throw std::invalid_argument("phylogeny: root has a parent");
    std::set<std::string> names;
    std::size_t seen = 0;
    std::vector<int> stack{root};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        ++seen;
        const auto& nd = nodes[v];
        int nch = (nd.children[0] >= 0) + (nd.children[1] >= 0);
        // a single child is allowed only as a root stem (r -> u -> {a, b})
        if (nch == 1 && v != root)
            throw std::invalid_argument("phylogeny: internal nodes must have exactly two children");
        if (v != root) nd.edge.validate();
        for (int c : nd.children)
            if (c >= 0) {
                if (c < 0 || c >= static_cast<int>(nodes.size()) || nodes[c].parent != v)
                    throw std::invalid_argument("phylogeny: inconsistent parent link");
                stack.push_back(c);
            }
        if (nch == 0) {
            if (nd.name.empty()) throw std::invalid_argument("phylogeny: leaf without a name");
            if (!names.insert(nd.name).second)
                throw std::invalid_argument("phylogeny: duplicate leaf name " + nd.name);
        }
    }
    if (seen != nodes.size())
        throw std::invalid_argument("phylogeny: disconnected nodes present");
}

double Phylogeny::root_to_leaf_time(int leaf) const {
    double t = 0.0;
    for (int v = leaf; v != root; v = nodes[v].parent) t += nodes[v].edge.t;
    return t;
}

bool Phylogeny::is_ultrametric(double tol) const {
    auto ls = leaves();
    if (ls.empty()) return true;
    double h = root_to_leaf_time(ls[0]);
    return std::all_of(ls.begin(), ls.end(), [&](int v) {
        return std::fabs(root_to_leaf_time(v) - h) <= tol;
    });
}

int Phylogeny::depth_edges(int v) const {
    int d = 0;
    for (; v != root; v = nodes[v].parent) ++d;
    return d;
}

int Phylogeny::mrca(int a, int b) const {
    int da = depth_edges(a), db = depth_edges(b);
    while (da > db) {
        a = nodes[a].parent;
        --da;
    }
    while (db > da) {
        b = nodes[b].parent;
        --db;
    }
    while (a != b) {
        a = nodes[a].parent;
        b = nodes[b].parent;
    }
    return a;
}

std::vector<int> Phylogeny::path_edges(int a, int b) const {
    int m = mrca(a, b);
    std::vector<int> out;
    for (int v = a; v != m; v = nodes[v].parent) out.push_back(v);
    for (int v = b; v != m; v = nodes[v].parent) out.push_back(v);
    return out;
}

double Phylogeny::path_time(int a, int b) const {
    double t = 0.0;
    for (int e : path_edges(a, b)) t += nodes[e].edge.t;
    return t;
}

double Phylogeny::time_to_mrca(int a, int b) const {
    int m = mrca(a, b);
    double t = 0.0;
    for (int v = a; v != m; v = nodes[v].parent) t += nodes[v].edge.t;
    return t;
}

int Phylogeny::graph_diameter() const {
    auto ls = leaves();
    int best = 0;
    for (std::size_t i = 0; i < ls.size(); ++i)
        for (std::size_t j = i + 1; j < ls.size(); ++j)
            best = std::max(best, static_cast<int>(path_edges(ls[i], ls[j]).size()));
    return best;
}

Phylogeny make_fork(const EdgeParams& eu, const EdgeParams& ea, const EdgeParams& eb) {
    Phylogeny p;
    int r = p.add_root();
    int u = p.add_child(r, eu);
    p.add_child(u, ea, "a");
    p.add_child(u, eb, "b");
    // a bare degree-one root models the explicit r -> u stem
    return p;
}

Phylogeny make_single_edge(const EdgeParams& e) {
    Phylogeny p;
    int r = p.add_root();
    p.add_child(r, e, "a");
    return p;
}

Phylogeny make_cherry(const EdgeParams& ea, const EdgeParams& eb) {
    Phylogeny p;
    int r = p.add_root();
    p.add_child(r, ea, "a");
    p.add_child(r, eb, "b");
    return p;
}

}  // namespace indelphy
