#include "indelphy/tree_gen.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace indelphy {

namespace {

struct ShapeNode {
    int left = -1, right = -1;
    int leaf = -1;       // leaf label when terminal
    int dmin = 0, dmax = 0;  // edge-depths to nearest / farthest descendant leaf
};

std::size_t floor_pow2(std::size_t m) {
    std::size_t p = 1;
    while (p * 2 <= m) p *= 2;
    return p;
}

// Recursive splitting of a shuffled label block. Every subtree keeps its leaf
// depths within one level (m leaves, 2^d <= m <= 2^(d+1), depths d or d+1),
// so max_leaf_depth <= 2 * min_leaf_depth at every node and an ultrametric
// edge-time assignment in (f, g) exists whenever g > 2f. Balanced mode halves
// exactly. The split point is drawn uniformly over the legal range.
int build_shape(std::vector<ShapeNode>& nodes, const std::vector<int>& labels,
                std::size_t lo, std::size_t hi, bool balanced, RngStream& rng) {
    const int id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    const std::size_t m = hi - lo;
    if (m == 1) {
        nodes[id].leaf = labels[lo];
        return id;
    }
    std::size_t cut;
    if (balanced) {
        cut = m / 2;
    } else {
        const std::size_t half = floor_pow2(m) / 2;  // 2^(d-1) for 2^d <= m <= 2^(d+1)
        const std::size_t c_lo = std::max(half, m > 2 * half ? m - 2 * half : half);
        const std::size_t c_hi = std::min(2 * half, m - half);
        cut = c_lo + rng.below(static_cast<std::uint64_t>(c_hi - c_lo + 1));
    }
    const int l = build_shape(nodes, labels, lo, lo + cut, balanced, rng);
    const int r = build_shape(nodes, labels, lo + cut, hi, balanced, rng);
    nodes[id].left = l;
    nodes[id].right = r;
    nodes[id].dmin = 1 + std::min(nodes[l].dmin, nodes[r].dmin);
    nodes[id].dmax = 1 + std::max(nodes[l].dmax, nodes[r].dmax);
    return id;
}

bool feasible(const std::vector<ShapeNode>& nodes, double f, double g) {
    for (const auto& v : nodes)
        if (v.leaf < 0 && !(static_cast<double>(v.dmax) * f < static_cast<double>(v.dmin) * g))
            return false;
    return true;
}

double draw_open(double lo, double hi, RngStream& rng) {
    double u;
    do {
        u = rng.uniform();
    } while (u == 0.0);
    double x = lo + (hi - lo) * u;
    if (x <= lo) x = std::nextafter(lo, hi);
    if (x >= hi) x = std::nextafter(hi, lo);
    return x;
}

std::string leaf_name(int label, std::size_t n) {
    std::size_t width = 1;
    for (std::size_t v = n - 1; v >= 10; v /= 10) ++width;
    std::ostringstream os;
    os << label;
    std::string digits = os.str();
    return "t" + std::string(width - digits.size(), '0') + digits;
}

Phylogeny generate(std::size_t n, const ClockTreeOptions& opt, const RateBounds* bounds,
                   RngStream& rng) {
    if (n < 3) throw std::invalid_argument("generate_clock_tree: need n >= 3");
    if (!(opt.f > 0.0) || !(opt.f < opt.g))
        throw std::invalid_argument("generate_clock_tree: need 0 < f < g");
    if (opt.balanced && (n & (n - 1)) != 0)
        throw std::invalid_argument("generate_clock_tree: balanced mode needs n a power of two");

    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i);

    for (std::size_t i = n - 1; i > 0; --i)
        std::swap(labels[i], labels[rng.below(static_cast<std::uint64_t>(i + 1))]);
    std::vector<ShapeNode> shape;
    build_shape(shape, labels, 0, n, opt.balanced, rng);
    if (!feasible(shape, opt.f, opt.g)) {
        std::ostringstream os;
        os << "generate_clock_tree: no edge-time assignment in (" << opt.f << ", " << opt.g
           << ") for n=" << n << "; general n needs g > 2f, power-of-two n any 0 < f < g";
        throw std::invalid_argument(os.str());
    }

    Phylogeny tree;
    const int root = tree.add_root();

    auto edge_rates = [&](RngStream& r) {
        EdgeParams e;
        e.eta = bounds ? bounds->eta_lo + (bounds->eta_hi - bounds->eta_lo) * r.uniform() : opt.eta;
        e.delta = opt.delta;
        e.lambda = opt.lambda;
        return e;
    };

    // Top-down: node v still has height h to its leaves, h in (dmax*f, dmin*g).
    auto assign = [&](auto&& self, int sv, int tv, double h) -> void {
        for (int child : {shape[sv].left, shape[sv].right}) {
            const auto& c = shape[child];
            EdgeParams e = edge_rates(rng);
            if (c.leaf >= 0) {
                e.t = h;
                tree.add_child(tv, e, leaf_name(c.leaf, n));
            } else {
                const double lo = std::max(opt.f, h - static_cast<double>(c.dmin) * opt.g);
                const double hi = std::min(opt.g, h - static_cast<double>(c.dmax) * opt.f);
                e.t = draw_open(lo, hi, rng);
                const int tc = tree.add_child(tv, e, "");
                self(self, child, tc, h - e.t);
            }
        }
    };

    const double h0 = draw_open(static_cast<double>(shape[0].dmax) * opt.f,
                                static_cast<double>(shape[0].dmin) * opt.g, rng);
    assign(assign, 0, root, h0);
    tree.validate();
    return tree;
}

}  // namespace

Phylogeny generate_clock_tree(std::size_t n, const ClockTreeOptions& opt, RngStream& rng) {
    return generate(n, opt, nullptr, rng);
}

Phylogeny generate_bounded_rates_tree(std::size_t n, const ClockTreeOptions& opt,
                                      const RateBounds& bounds, RngStream& rng) {
    if (!(bounds.eta_lo >= 0.0) || !(bounds.eta_hi >= bounds.eta_lo))
        throw std::invalid_argument("generate_bounded_rates_tree: need 0 <= eta_lo <= eta_hi");
    return generate(n, opt, &bounds, rng);
}

}  // namespace indelphy
