#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "indelphy/block_partition.hpp"
#include "indelphy/edge_params.hpp"
#include "indelphy/simulator.hpp"
#include "indelphy/substitution_model.hpp"

namespace indelphy {

// Canonical fork r -> u -> {a, b} with every sequence kept.
struct ForkSim {
    EvolvedSequence root, u, a, b;
    Genealogy genealogy;
};

ForkSim simulate_fork(const EdgeParams& stem, const EdgeParams& child_a, const EdgeParams& child_b,
                      std::size_t k_r, const SubstitutionModel& model, std::uint64_t seed,
                      std::uint64_t replicate, const SimOptions& opt = {});

// Ancestral-block geometry induced at the fork midpoint by a leaf partition
// and the child-edge channel: blocks of u of length ell_u (the largest integer
// with ell_u * M_t <= ell) roughly align with the leaf blocks, and delta_u =
// ceil(L + c * sqrt(k_u' ln k_u') / M_t) is the displacement slack.
struct AncestralBlockGeometry {
    std::size_t ell_u = 0;
    std::size_t k_u_prime = 0;  // (L - 1) * ell_u
    std::size_t delta_u = 0;
    double m_t = 1.0;  // e^{-(delta - lambda) t} per child edge
    double d_t = 1.0;  // e^{-delta t} per child edge
    // interior sub-blocks are nonempty only when 2 delta_u < ell_u; below that
    // scale the interior containment event is vacuous
    bool interior_defined = false;
};

AncestralBlockGeometry ancestral_block_geometry(const BlockPartition& part, const EdgeParams& child,
                                                double c = 3.0);

// Raw per-block measurements. Extents are 1-based leaf positions of the
// left-most / right-most descendant of the respective ancestral endpoint
// site; 0 means undefined (endpoint outside sigma_u or family extinct).
struct GoodEventBlockReport {
    std::size_t index = 0;  // 1-based block index, 1 .. L-1
    std::size_t x_int_a = 0, y_int_a = 0, x_int_b = 0, y_int_b = 0;
    std::size_t x_ext_a = 0, y_ext_a = 0, x_ext_b = 0, y_ext_b = 0;
    // ids shared by the two leaf blocks i (the event statistic), and by the
    // full leaves restricted to ancestral block i of u (exact mean ell_u d_t^2)
    std::size_t joint_leaf_block = 0;
    std::size_t joint_ancestral_block = 0;
    bool ancestral_in_range = false;  // ancestral block i lies inside sigma_u
    bool interior_ok = false;
    bool exterior_ok = false;
    bool joint_ok = false;
};

struct GoodEventReport {
    AncestralBlockGeometry geom;
    std::size_t k_u = 0;
    bool length_ok = false;     // K_u >= k_u'
    bool e1_interior = false;   // descendants of interior blocks confined inside leaf blocks
    bool e1_exterior = false;   // descendants of exterior blocks straddle leaf blocks
    bool e1 = false;            // union of the two containment events
    bool e1_both = false;       // their intersection, reported for visibility
    bool e2 = false;            // leaf-block joint survivors within ell_u d_t^2 +- 3 m_t delta_u
    std::vector<GoodEventBlockReport> blocks;
};

// Evaluates the containment and joint-survival events on one fork replicate.
// Requires full ancestry; the child edges are assumed to share one parameter
// set (the geometry is computed from `child`).
GoodEventReport good_event_diagnostics(const ForkSim& sim, const BlockPartition& part,
                                       const EdgeParams& child, double c = 3.0);

}  // namespace indelphy
