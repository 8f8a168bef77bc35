#pragma once

#include <cstddef>

#include "indelphy/phylogeny.hpp"
#include "indelphy/rng.hpp"

namespace indelphy {

// Random ultrametric tree: binary topology drawn by recursive splitting with
// leaf depths kept within one level of each other, every edge time strictly
// inside (f, g), all leaves at the same total time. Arbitrary n needs g > 2f;
// power-of-two n works for any 0 < f < g.
// Leaf names are t00, t01, ... (zero-padded, so lexicographic = numeric).
struct ClockTreeOptions {
    double f = 0.1;
    double g = 0.3;
    double eta = 0.1;
    double delta = 0.0;
    double lambda = 0.0;
    bool balanced = false;  // perfect topology; n must be a power of two
};

Phylogeny generate_clock_tree(std::size_t n, const ClockTreeOptions& opt, RngStream& rng);

// Same time construction, but each edge gets its own substitution rate drawn
// uniformly from [eta_lo, eta_hi]; deletion and insertion rates stay shared.
struct RateBounds {
    double eta_lo = 0.0;
    double eta_hi = 0.0;
};

Phylogeny generate_bounded_rates_tree(std::size_t n, const ClockTreeOptions& opt,
                                      const RateBounds& bounds, RngStream& rng);

}  // namespace indelphy
