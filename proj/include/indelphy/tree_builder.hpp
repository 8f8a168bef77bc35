#pragma once

#include <cstddef>
#include <utility>

#include "indelphy/distance_matrix.hpp"
#include "indelphy/topology.hpp"

namespace indelphy {

// Four-point check for one quartet of row indices. margin is the minimum over
// the three pairings of (own sum - max of the other two sums); it is <= 0
// whenever all entries are finite, with 0 meaning a tie (star-like quartet).
struct QuartetCheck {
    double margin = 0.0;
    // argmin pairing: 0 = ab|cd, 1 = ac|bd, 2 = ad|bc; ties take the first
    int pairing = -1;
    bool resolvable = false;  // false when any of the six entries is +inf
};

QuartetCheck four_point_violation(const DistanceMatrix& d, std::size_t a, std::size_t b,
                                  std::size_t c, std::size_t e);

enum class BuildMethod {
    Buneman,        // conservative: a split needs unanimous quartet support
    NeighborJoining // always fully resolved
};

struct ReconstructionResult {
    Topology topology;
    BuildMethod method = BuildMethod::Buneman;
    bool fully_resolved = false;
    std::size_t skipped_quartets = 0;  // quartets containing +inf entries
};

// Neighbor joining on the matrix with +inf entries capped to twice the
// largest finite entry plus one. Deterministic pair selection.
Topology neighbor_joining(const DistanceMatrix& d);

// Buneman-style verification: candidate splits (from neighbor joining) are
// kept only when every evaluable spanning quartet supports them with margin
// above tol and at least one quartet is evaluable.
ReconstructionResult reconstruct_topology(const DistanceMatrix& d,
                                          BuildMethod method = BuildMethod::Buneman,
                                          double tol = 1e-9);

// (2(f/g) log2 n, 2(g/f) log2 n): range of the graph diameter (in edges) of
// any ultrametric tree with edge times in (f, g).
std::pair<double, double> diameter_bounds(std::size_t n, double f, double g);

}  // namespace indelphy
