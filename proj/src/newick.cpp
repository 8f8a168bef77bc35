#include "indelphy/newick.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <unordered_map>
#include <vector>

namespace indelphy {

namespace {

bool name_char(char c) {
    return c != '(' && c != ')' && c != ',' && c != ':' && c != ';' &&
           !std::isspace(static_cast<unsigned char>(c));
}

struct RawNode {
    std::string name;
    double length = 0.0;
    bool has_length = false;
    std::size_t src_pos = 0;
    std::vector<int> children;
};

struct Parser {
    const std::string& text;
    std::size_t pos = 0;
    std::vector<RawNode> nodes;

    explicit Parser(const std::string& t) : text(t) {}

    void skip_space() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    [[noreturn]] void fail(const std::string& msg) { throw NewickError(msg, pos); }

    int parse_subtree() {
        skip_space();
        int id = static_cast<int>(nodes.size());
        nodes.emplace_back();
        nodes.back().src_pos = pos;
        if (pos < text.size() && text[pos] == '(') {
            ++pos;
            std::vector<int> children;
            children.push_back(parse_subtree());
            skip_space();
            while (pos < text.size() && text[pos] == ',') {
                ++pos;
                children.push_back(parse_subtree());
                skip_space();
            }
            if (pos >= text.size() || text[pos] != ')') fail("unbalanced parenthesis");
            ++pos;
            nodes[id].children = std::move(children);
            nodes[id].name = take_name();  // optional internal label
        } else {
            std::string name = take_name();
            if (name.empty()) fail("empty name");
            nodes[id].name = std::move(name);
        }
        skip_space();
        if (pos < text.size() && text[pos] == ':') {
            ++pos;
            skip_space();
            const char* start = text.c_str() + pos;
            char* end = nullptr;
            double v = std::strtod(start, &end);
            if (end == start) fail("expected branch length after ':'");
            pos += static_cast<std::size_t>(end - start);
            nodes[id].length = v;
            nodes[id].has_length = true;
        }
        return id;
    }

    std::string take_name() {
        std::size_t start = pos;
        while (pos < text.size() && name_char(text[pos])) ++pos;
        return text.substr(start, pos - start);
    }

    int parse_document() {
        int root = parse_subtree();
        skip_space();
        if (pos >= text.size() || text[pos] != ';') fail("expected ';'");
        ++pos;
        skip_space();
        if (pos < text.size()) fail("trailing garbage after ';'");
        return root;
    }
};

void build_phylogeny(const Parser& p, int raw, Phylogeny& out, int parent) {
    const RawNode& node = p.nodes[raw];
    EdgeParams edge;
    edge.t = node.length;
    if (edge.t < 0.0) throw NewickError("negative branch length", node.src_pos);
    int id;
    if (parent < 0) {
        id = out.add_root();
    } else {
        id = out.add_child(parent, edge, node.name);
    }
    out.nodes[id].name = node.name;
    if (node.children.size() > 2)
        throw NewickError("polytomy not representable as a tree", node.src_pos);
    if (node.children.size() == 1 && parent >= 0)
        throw NewickError("unary non-root node", node.src_pos);
    for (int c : node.children) build_phylogeny(p, c, out, id);
}

// minimal leaf name under each raw node, for canonical child ordering
std::string min_leaf(const Phylogeny& tree, int v, std::vector<std::string>& memo) {
    if (!memo[v].empty()) return memo[v];
    if (tree.is_leaf(v)) return memo[v] = tree.nodes[v].name;
    std::string best;
    for (int c : tree.nodes[v].children)
        if (c >= 0) {
            std::string m = min_leaf(tree, c, memo);
            if (best.empty() || m < best) best = m;
        }
    return memo[v] = best;
}

std::string format_length(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void check_name(const std::string& name) {
    for (char c : name)
        if (!name_char(c))
            throw std::invalid_argument("emit_newick: name contains a reserved character: " + name);
}

void emit_node(const Phylogeny& tree, int v, bool with_lengths, std::vector<std::string>& memo,
               std::string& out) {
    const PhyloNode& node = tree.nodes[v];
    if (tree.is_leaf(v)) {
        check_name(node.name);
        out += node.name;
    } else {
        std::vector<int> kids;
        for (int c : node.children)
            if (c >= 0) kids.push_back(c);
        std::sort(kids.begin(), kids.end(), [&](int x, int y) {
            return min_leaf(tree, x, memo) < min_leaf(tree, y, memo);
        });
        out += '(';
        for (std::size_t i = 0; i < kids.size(); ++i) {
            if (i) out += ',';
            emit_node(tree, kids[i], with_lengths, memo, out);
        }
        out += ')';
        check_name(node.name);
        out += node.name;
    }
    if (with_lengths && v != tree.root) {
        out += ':';
        out += format_length(node.edge.t);
    }
}

}  // namespace

NewickError::NewickError(const std::string& message, std::size_t offset)
    : std::runtime_error(message + " at offset " + std::to_string(offset)), offset_(offset) {}

Phylogeny parse_newick_tree(const std::string& text) {
    Parser p(text);
    int raw_root = p.parse_document();
    Phylogeny out;
    build_phylogeny(p, raw_root, out, -1);
    out.validate();
    return out;
}

Topology parse_newick_topology(const std::string& text) {
    Parser p(text);
    int raw_root = p.parse_document();

    std::vector<std::string> names;
    for (const RawNode& n : p.nodes)
        if (n.children.empty()) names.push_back(n.name);
    std::vector<std::string> sorted = names;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("parse_newick_topology: duplicate leaf name");
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < sorted.size(); ++i) index[sorted[i]] = i;
    const std::size_t n = sorted.size();
    const std::size_t words = (n + 63) / 64;

    // post-order cluster masks; raw child ids are always larger than parents
    std::vector<std::vector<std::uint64_t>> below(p.nodes.size(),
                                                  std::vector<std::uint64_t>(words, 0));
    std::vector<Split> splits;
    for (std::size_t v = p.nodes.size(); v-- > 0;) {
        const RawNode& node = p.nodes[v];
        if (node.children.empty()) {
            std::size_t i = index.at(node.name);
            below[v][i >> 6] |= std::uint64_t(1) << (i & 63);
        } else {
            for (int c : node.children)
                for (std::size_t w = 0; w < words; ++w) below[v][w] |= below[c][w];
        }
        if (static_cast<int>(v) != raw_root) {
            Split s = Split::make(below[v], n);
            std::size_t c = s.count();
            if (c >= 2 && c <= n - 2) splits.push_back(s);
        }
    }
    return Topology(std::move(sorted), std::move(splits));
}

std::string emit_newick(const Phylogeny& tree, bool with_lengths) {
    std::vector<std::string> memo(tree.size());
    std::string out;
    emit_node(tree, tree.root, with_lengths, memo, out);
    out += ';';
    return out;
}

std::string emit_newick(const Topology& topo) {
    const auto& leaves = topo.leaves();
    const std::size_t n = leaves.size();
    for (const auto& name : leaves) check_name(name);
    if (n == 0) throw std::invalid_argument("emit_newick: empty topology");
    if (n == 1) return leaves[0] + ";";

    // order clusters by size so each split's parent is the smallest strictly
    // containing cluster; the laminar family forms a tree
    std::vector<Split> splits = topo.splits();
    std::sort(splits.begin(), splits.end(), [](const Split& a, const Split& b) {
        return a.count() < b.count();
    });
    auto contains = [](const Split& big, const Split& small) {
        for (std::size_t w = 0; w < big.bits.size(); ++w)
            if ((small.bits[w] & ~big.bits[w]) != 0) return false;
        return true;
    };

    const int kRoot = -1;
    std::vector<int> cluster_parent(splits.size(), kRoot);
    for (std::size_t i = 0; i < splits.size(); ++i)
        for (std::size_t j = i + 1; j < splits.size(); ++j)
            if (splits[j].count() > splits[i].count() && contains(splits[j], splits[i])) {
                cluster_parent[i] = static_cast<int>(j);
                break;
            }
    // smallest cluster containing each leaf; leaf 0 is outside every stored
    // side by canonicalization
    std::vector<int> leaf_parent(n, kRoot);
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t s = 0; s < splits.size(); ++s)
            if (splits[s].test(i)) {
                leaf_parent[i] = static_cast<int>(s);
                break;
            }

    std::vector<std::vector<int>> cluster_kids(splits.size());   // child clusters
    std::vector<std::vector<std::size_t>> cluster_leaves(splits.size());
    std::vector<int> top_clusters;
    std::vector<std::size_t> top_leaves;
    for (std::size_t i = 0; i < splits.size(); ++i)
        if (cluster_parent[i] == kRoot) top_clusters.push_back(static_cast<int>(i));
        else cluster_kids[cluster_parent[i]].push_back(static_cast<int>(i));
    for (std::size_t i = 0; i < n; ++i)
        if (leaf_parent[i] == kRoot) top_leaves.push_back(i);
        else cluster_leaves[leaf_parent[i]].push_back(i);

    struct Item {
        std::string text;
        std::string min_name;
    };
    auto render = [&](auto&& self, int cluster) -> Item {
        std::vector<Item> parts;
        for (std::size_t i : cluster_leaves[cluster]) parts.push_back({leaves[i], leaves[i]});
        for (int c : cluster_kids[cluster]) parts.push_back(self(self, c));
        std::sort(parts.begin(), parts.end(),
                  [](const Item& a, const Item& b) { return a.min_name < b.min_name; });
        Item out;
        out.min_name = parts.front().min_name;
        out.text = "(";
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) out.text += ',';
            out.text += parts[i].text;
        }
        out.text += ')';
        return out;
    };

    std::vector<Item> parts;
    for (std::size_t i : top_leaves) parts.push_back({leaves[i], leaves[i]});
    for (int c : top_clusters) parts.push_back(render(render, c));
    std::sort(parts.begin(), parts.end(),
              [](const Item& a, const Item& b) { return a.min_name < b.min_name; });
    std::string out = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ',';
        out += parts[i].text;
    }
    out += ");";
    return out;
}

}  // namespace indelphy
