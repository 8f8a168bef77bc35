#pragma once

#include <cstddef>

#include "indelphy/simulator.hpp"

namespace indelphy {

// Prefix partition used by the blockwise estimators: the first L*ell sites are
// cut into L blocks of length ell; estimators use the odd-indexed blocks
// (1-based: 1, 3, ..., L-1) to decouple neighbors.
struct BlockPartition {
    std::size_t k0 = 0;     // prefix length the partition was derived from
    std::size_t ell = 0;    // block length
    std::size_t blocks = 0; // L, even and >= 2
    double zeta = 0.0;      // exponent used, 0 when constructed directly

    // ell = ceil(k0^zeta), L = floor(k0/ell) rounded down to even;
    // requires 1/2 < zeta < 1 and a prefix long enough for two blocks.
    static BlockPartition from_prefix(std::size_t k0, double zeta);
    // Direct construction with the same invariants enforced.
    static BlockPartition from_fields(std::size_t k0, std::size_t ell, std::size_t blocks);

    std::size_t used_prefix() const { return ell * blocks; }
    // 0-based half-open window of 1-based block i
    SiteWindow block_window(std::size_t i) const;
};

}  // namespace indelphy
