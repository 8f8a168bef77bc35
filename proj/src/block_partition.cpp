#include "indelphy/block_partition.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace indelphy {

BlockPartition BlockPartition::from_prefix(std::size_t k0, double zeta) {
    if (!(zeta > 0.5) || !(zeta < 1.0))
        throw std::invalid_argument("block partition: zeta must lie strictly between 1/2 and 1, got " +
                                    std::to_string(zeta));
    if (k0 == 0) throw std::invalid_argument("block partition: k0 must be positive");
    double p = std::pow(static_cast<double>(k0), zeta);
    // snap near-integer powers (e.g. 1e5^0.6) before taking the ceiling
    auto ell = static_cast<std::size_t>(std::ceil(p - 1e-9 * std::fmax(1.0, p)));
    if (ell == 0) ell = 1;
    std::size_t blocks = k0 / ell;
    if (blocks % 2 == 1) --blocks;  // drop the trailing odd block
    if (blocks < 2)
        throw std::invalid_argument("block partition: prefix of " + std::to_string(k0) +
                                    " sites is too short for two blocks of length " +
                                    std::to_string(ell));
    BlockPartition part;
    part.k0 = k0;
    part.ell = ell;
    part.blocks = blocks;
    part.zeta = zeta;
    return part;
}

BlockPartition BlockPartition::from_fields(std::size_t k0, std::size_t ell, std::size_t blocks) {
    if (ell == 0 || blocks < 2 || blocks % 2 != 0)
        throw std::invalid_argument("block partition: need ell >= 1 and an even number of blocks >= 2");
    if (ell * blocks > k0)
        throw std::invalid_argument("block partition: blocks do not fit into the prefix");
    BlockPartition part;
    part.k0 = k0;
    part.ell = ell;
    part.blocks = blocks;
    return part;
}

SiteWindow BlockPartition::block_window(std::size_t i) const {
    if (i < 1 || i > blocks)
        throw std::invalid_argument("block partition: block index out of range");
    return {(i - 1) * ell, i * ell};
}

}  // namespace indelphy
