#include "indelphy/tree_builder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace indelphy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Matrix row index for each leaf of the sorted (Topology) leaf order.
std::vector<std::size_t> sorted_to_row(const DistanceMatrix& d) {
    std::vector<std::size_t> order(d.n());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return d.names[a] < d.names[b];
    });
    return order;
}

std::vector<std::size_t> row_to_sorted(const std::vector<std::size_t>& order) {
    std::vector<std::size_t> inv(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) inv[order[k]] = k;
    return inv;
}

}  // namespace

QuartetCheck four_point_violation(const DistanceMatrix& d, std::size_t a, std::size_t b,
                                  std::size_t c, std::size_t e) {
    const double ab = d.at(a, b), cd = d.at(c, e);
    const double ac = d.at(a, c), bd = d.at(b, e);
    const double ad = d.at(a, e), bc = d.at(b, c);
    QuartetCheck out;
    if (!(std::isfinite(ab) && std::isfinite(cd) && std::isfinite(ac) && std::isfinite(bd) &&
          std::isfinite(ad) && std::isfinite(bc))) {
        out.margin = kInf;
        return out;
    }
    const double s[3] = {ab + cd, ac + bd, ad + bc};
    out.resolvable = true;
    out.margin = kInf;
    for (int p = 0; p < 3; ++p) {
        const double other = std::max(s[(p + 1) % 3], s[(p + 2) % 3]);
        const double v = s[p] - other;
        if (v < out.margin) {
            out.margin = v;
            out.pairing = p;
        }
    }
    return out;
}

Topology neighbor_joining(const DistanceMatrix& d) {
    const std::size_t n = d.n();
    if (n < 2) throw std::invalid_argument("neighbor_joining: need at least 2 taxa");

    // Cap +inf so the joining criterion stays ordered.
    double max_finite = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::isfinite(d.at(i, j))) max_finite = std::max(max_finite, d.at(i, j));
    const double cap = 2.0 * max_finite + 1.0;

    std::vector<double> w(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) w[i * n + j] = std::isfinite(d.at(i, j)) ? d.at(i, j) : cap;

    const auto order = sorted_to_row(d);
    const auto rank = row_to_sorted(order);

    std::vector<std::string> sorted_names = d.names;
    std::sort(sorted_names.begin(), sorted_names.end());

    // One cluster per matrix row; bit k of a mask is sorted leaf k.
    const std::size_t words = (n + 63) / 64;
    std::vector<std::vector<std::uint64_t>> mask(n, std::vector<std::uint64_t>(words, 0));
    for (std::size_t i = 0; i < n; ++i) mask[i][rank[i] / 64] |= std::uint64_t{1} << (rank[i] % 64);

    std::vector<std::size_t> active(n);
    std::iota(active.begin(), active.end(), std::size_t{0});

    std::vector<Split> splits;
    auto maybe_record = [&](const std::vector<std::uint64_t>& m) {
        std::size_t c = 0;
        for (auto ww : m) c += static_cast<std::size_t>(__builtin_popcountll(ww));
        if (c >= 2 && c <= n - 2) splits.push_back(Split::make(m, n));
    };

    while (active.size() > 2) {
        const std::size_t r = active.size();
        std::vector<double> rowsum(r, 0.0);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                if (i != j) rowsum[i] += w[active[i] * n + active[j]];

        double best_q = kInf;
        std::size_t bi = 0, bj = 1;
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = i + 1; j < r; ++j) {
                const double q =
                    static_cast<double>(r - 2) * w[active[i] * n + active[j]] - rowsum[i] - rowsum[j];
                if (q < best_q) {
                    best_q = q;
                    bi = i;
                    bj = j;
                }
            }
        }

        const std::size_t a = active[bi], b = active[bj];
        const double dab = w[a * n + b];
        for (std::size_t k = 0; k < r; ++k) {
            if (k == bi || k == bj) continue;
            const std::size_t c = active[k];
            const double v = 0.5 * (w[a * n + c] + w[b * n + c] - dab);
            w[a * n + c] = w[c * n + a] = v;
        }
        for (std::size_t t = 0; t < words; ++t) mask[a][t] |= mask[b][t];
        maybe_record(mask[a]);
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
    }

    return Topology(sorted_names, splits);
}

ReconstructionResult reconstruct_topology(const DistanceMatrix& d, BuildMethod method, double tol) {
    const std::size_t n = d.n();
    if (n < 3) throw std::invalid_argument("reconstruct_topology: need at least 3 taxa");

    Topology nj = neighbor_joining(d);
    ReconstructionResult out{nj, method, false, 0};
    if (method == BuildMethod::NeighborJoining) {
        out.fully_resolved = nj.fully_resolved();
        return out;
    }

    const auto order = sorted_to_row(d);  // sorted leaf k lives at matrix row order[k]
    std::vector<Split> kept;
    for (const Split& s : nj.splits()) {
        std::vector<std::size_t> in, outside;
        for (std::size_t k = 0; k < n; ++k) (s.test(k) ? in : outside).push_back(order[k]);

        bool supported = true;
        bool any = false;
        for (std::size_t p = 0; p < in.size() && supported; ++p) {
            for (std::size_t q = p + 1; q < in.size() && supported; ++q) {
                for (std::size_t u = 0; u < outside.size() && supported; ++u) {
                    for (std::size_t v = u + 1; v < outside.size() && supported; ++v) {
                        const std::size_t a = in[p], b = in[q], c = outside[u], e = outside[v];
                        const double own = d.at(a, b) + d.at(c, e);
                        const double o1 = d.at(a, c) + d.at(b, e);
                        const double o2 = d.at(a, e) + d.at(b, c);
                        if (!(std::isfinite(own) && std::isfinite(o1) && std::isfinite(o2))) {
                            ++out.skipped_quartets;
                            continue;
                        }
                        any = true;
                        if (!(std::min(o1, o2) - own > tol)) supported = false;
                    }
                }
            }
        }
        if (supported && any) kept.push_back(s);
    }

    out.topology = Topology(nj.leaves(), kept);
    out.fully_resolved = out.topology.fully_resolved();
    return out;
}

std::pair<double, double> diameter_bounds(std::size_t n, double f, double g) {
    if (n < 2) throw std::invalid_argument("diameter_bounds: need at least 2 leaves");
    if (!(f > 0.0) || !(g >= f)) throw std::invalid_argument("diameter_bounds: need 0 < f <= g");
    const double lg = std::log2(static_cast<double>(n));
    return {2.0 * (f / g) * lg, 2.0 * (g / f) * lg};
}

}  // namespace indelphy
