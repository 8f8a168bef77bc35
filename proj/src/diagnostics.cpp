#include "indelphy/diagnostics.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "indelphy/analytics.hpp"

namespace indelphy {

namespace {

// 1-based position extent of each ancestral family inside one leaf sequence.
using ExtentMap = std::unordered_map<std::int64_t, std::pair<std::size_t, std::size_t>>;

ExtentMap family_extents(const EvolvedSequence& leaf, const Genealogy& gen,
                         const std::unordered_set<std::int64_t>& u_ids) {
    ExtentMap out;
    out.reserve(leaf.size());
    for (std::size_t q = 0; q < leaf.size(); ++q) {
        std::int64_t id = leaf.ids[q];
        while (id != 0 && !u_ids.count(id)) id = gen.parent_of(id);
        if (id == 0) continue;  // no ancestral family at u (boundary immigrant)
        auto [it, fresh] = out.try_emplace(id, q + 1, q + 1);
        if (!fresh) it->second.second = q + 1;
    }
    return out;
}

// Left-most (lo) or right-most (!lo) descendant of the site at 1-based
// ancestral position p; 0 when p is outside sigma_u or the family died out.
std::size_t endpoint_extent(std::int64_t p, const EvolvedSequence& u, const ExtentMap& ext,
                            bool lo) {
    if (p < 1 || p > static_cast<std::int64_t>(u.size())) return 0;
    auto it = ext.find(u.ids[static_cast<std::size_t>(p - 1)]);
    if (it == ext.end()) return 0;
    return lo ? it->second.first : it->second.second;
}

bool strictly_inside(std::size_t x, double lo, double hi) {
    return x != 0 && lo < static_cast<double>(x) && static_cast<double>(x) < hi;
}

}  // namespace

ForkSim simulate_fork(const EdgeParams& stem, const EdgeParams& child_a, const EdgeParams& child_b,
                      std::size_t k_r, const SubstitutionModel& model, std::uint64_t seed,
                      std::uint64_t replicate, const SimOptions& opt) {
    Phylogeny tree = make_fork(stem, child_a, child_b);
    TreeSim sim = evolve_tree(tree, k_r, model, seed, replicate, opt, KeepSequences::All);
    ForkSim out;
    out.root = std::move(sim.seqs[0]);
    out.u = std::move(sim.seqs[1]);
    out.a = std::move(sim.seqs[2]);
    out.b = std::move(sim.seqs[3]);
    out.genealogy = std::move(sim.genealogy);
    return out;
}

AncestralBlockGeometry ancestral_block_geometry(const BlockPartition& part, const EdgeParams& child,
                                                double c) {
    child.validate();
    if (!(c >= 0.0)) throw std::invalid_argument("ancestral_block_geometry: c must be >= 0");
    AncestralBlockGeometry g;
    g.m_t = std::exp(-(child.delta - child.lambda) * child.t);
    g.d_t = std::exp(-child.delta * child.t);

    const double ell = static_cast<double>(part.ell);
    std::size_t ell_u = static_cast<std::size_t>(std::floor(ell / g.m_t));
    while ((static_cast<double>(ell_u) + 1.0) * g.m_t <= ell) ++ell_u;
    while (ell_u > 0 && static_cast<double>(ell_u) * g.m_t > ell) --ell_u;
    g.ell_u = ell_u;

    g.k_u_prime = (part.blocks - 1) * g.ell_u;
    double slack = static_cast<double>(part.blocks);
    if (g.k_u_prime > 1) {
        double k = static_cast<double>(g.k_u_prime);
        slack += c * std::sqrt(k * std::log(k)) / g.m_t;
    }
    g.delta_u = static_cast<std::size_t>(std::ceil(slack));
    g.interior_defined = 2 * g.delta_u < g.ell_u;
    return g;
}

GoodEventReport good_event_diagnostics(const ForkSim& sim, const BlockPartition& part,
                                       const EdgeParams& child, double c) {
    if (sim.u.ids.size() != sim.u.size() || sim.a.ids.size() != sim.a.size() ||
        sim.b.ids.size() != sim.b.size())
        throw std::invalid_argument("good_event_diagnostics: full ancestry required");

    GoodEventReport rep;
    rep.geom = ancestral_block_geometry(part, child, c);
    rep.k_u = sim.u.size();
    rep.length_ok = rep.k_u >= rep.geom.k_u_prime;

    std::unordered_set<std::int64_t> u_ids(sim.u.ids.begin(), sim.u.ids.end());
    ExtentMap ext_a = family_extents(sim.a, sim.genealogy, u_ids);
    ExtentMap ext_b = family_extents(sim.b, sim.genealogy, u_ids);

    const auto ell = static_cast<double>(part.ell);
    const auto ell_u = static_cast<std::int64_t>(rep.geom.ell_u);
    const auto delta_u = static_cast<std::int64_t>(rep.geom.delta_u);
    const double margin = 2.0 * rep.geom.m_t * static_cast<double>(rep.geom.delta_u);
    const double j_center = static_cast<double>(rep.geom.ell_u) * rep.geom.d_t * rep.geom.d_t;
    const double j_slack = 3.0 * rep.geom.m_t * static_cast<double>(rep.geom.delta_u);

    rep.e1_interior = true;
    rep.e1_exterior = true;
    rep.e2 = true;
    rep.blocks.reserve(part.blocks - 1);
    for (std::size_t i = 1; i < part.blocks; ++i) {
        GoodEventBlockReport blk;
        blk.index = i;
        const auto im1 = static_cast<std::int64_t>(i - 1);
        const auto ii = static_cast<std::int64_t>(i);

        std::int64_t int_lo = im1 * ell_u + delta_u;
        std::int64_t int_hi = ii * ell_u - delta_u;
        std::int64_t ext_lo = im1 * ell_u - delta_u;
        std::int64_t ext_hi = ii * ell_u + delta_u;

        blk.x_int_a = endpoint_extent(int_lo, sim.u, ext_a, true);
        blk.y_int_a = endpoint_extent(int_hi, sim.u, ext_a, false);
        blk.x_int_b = endpoint_extent(int_lo, sim.u, ext_b, true);
        blk.y_int_b = endpoint_extent(int_hi, sim.u, ext_b, false);
        blk.x_ext_a = endpoint_extent(ext_lo, sim.u, ext_a, true);
        blk.y_ext_a = endpoint_extent(ext_hi, sim.u, ext_a, false);
        blk.x_ext_b = endpoint_extent(ext_lo, sim.u, ext_b, true);
        blk.y_ext_b = endpoint_extent(ext_hi, sim.u, ext_b, false);

        const double left = static_cast<double>(i - 1) * ell;
        const double right = static_cast<double>(i) * ell;
        if (rep.geom.interior_defined) {
            blk.interior_ok = strictly_inside(blk.x_int_a, left, left + margin) &&
                              strictly_inside(blk.x_int_b, left, left + margin) &&
                              strictly_inside(blk.y_int_a, right - margin, right) &&
                              strictly_inside(blk.y_int_b, right - margin, right);
        } else {
            blk.interior_ok = true;  // empty interior imposes nothing
        }
        blk.exterior_ok = strictly_inside(blk.x_ext_a, left - margin, left) &&
                          strictly_inside(blk.x_ext_b, left - margin, left) &&
                          strictly_inside(blk.y_ext_a, right, right + margin) &&
                          strictly_inside(blk.y_ext_b, right, right + margin);

        SiteWindow w = part.block_window(i);
        if (w.hi <= sim.a.size() && w.hi <= sim.b.size())
            blk.joint_leaf_block = count_joint_survivors(sim.a, sim.b, sim.u, w, w);

        std::size_t u_lo = (i - 1) * rep.geom.ell_u;
        std::size_t u_hi = i * rep.geom.ell_u;
        blk.ancestral_in_range = u_hi <= sim.u.size();
        std::unordered_set<std::int64_t> window_ids;
        for (std::size_t q = std::min(u_lo, sim.u.size()); q < std::min(u_hi, sim.u.size()); ++q)
            window_ids.insert(sim.u.ids[q]);
        std::size_t joint = 0;
        if (!window_ids.empty()) {
            std::unordered_set<std::int64_t> hit;
            for (std::size_t q = 0; q < sim.a.size(); ++q)
                if (window_ids.count(sim.a.ids[q])) hit.insert(sim.a.ids[q]);
            for (std::size_t q = 0; q < sim.b.size(); ++q)
                if (hit.count(sim.b.ids[q])) ++joint;
        }
        blk.joint_ancestral_block = joint;

        const double j = static_cast<double>(blk.joint_leaf_block);
        blk.joint_ok = j_center - j_slack <= j && j <= j_center + j_slack;

        rep.e1_interior = rep.e1_interior && blk.interior_ok;
        rep.e1_exterior = rep.e1_exterior && blk.exterior_ok;
        rep.e2 = rep.e2 && blk.joint_ok;
        rep.blocks.push_back(blk);
    }
    rep.e1 = rep.e1_interior || rep.e1_exterior;
    rep.e1_both = rep.e1_interior && rep.e1_exterior;
    return rep;
}

}  // namespace indelphy
