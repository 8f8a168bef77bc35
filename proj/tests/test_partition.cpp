#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "indelphy/block_partition.hpp"

using namespace indelphy;

TEST_CASE("prefix partitions at reference scales") {
    struct Row {
        std::size_t k0, ell, blocks;
    };
    for (const Row& row : {Row{100, 16, 6}, Row{1000, 64, 14}, Row{10000, 252, 38},
                           Row{100000, 1000, 100}, Row{1000000, 3982, 250}}) {
        BlockPartition p = BlockPartition::from_prefix(row.k0, 0.6);
        CHECK(p.k0 == row.k0);
        CHECK(p.ell == row.ell);
        CHECK(p.blocks == row.blocks);
        CHECK(p.used_prefix() <= row.k0);
    }
}

TEST_CASE("partition invariants across sizes") {
    for (std::size_t k0 = 100; k0 <= 5000; k0 += 37) {
        BlockPartition p = BlockPartition::from_prefix(k0, 0.6);
        CHECK(p.ell >= 1);
        CHECK(p.blocks >= 2);
        CHECK(p.blocks % 2 == 0);
        CHECK(p.used_prefix() <= k0);
        CHECK(p.used_prefix() + 2 * p.ell > k0);
        double raw = std::pow(static_cast<double>(k0), 0.6);
        CHECK(static_cast<double>(p.ell) >= raw - 1e-6);
        CHECK(static_cast<double>(p.ell) <= raw + 1.0 + 1e-6);
    }
}

TEST_CASE("block windows tile the used prefix") {
    BlockPartition p = BlockPartition::from_prefix(1000, 0.6);
    std::size_t expect_lo = 0;
    for (std::size_t i = 1; i <= p.blocks; ++i) {
        SiteWindow w = p.block_window(i);
        CHECK(w.lo == expect_lo);
        CHECK(w.hi == w.lo + p.ell);
        expect_lo = w.hi;
    }
    CHECK(expect_lo == p.used_prefix());
}

TEST_CASE("direct construction enforces the invariants") {
    BlockPartition p = BlockPartition::from_fields(8, 2, 4);
    CHECK(p.ell == 2);
    CHECK(p.blocks == 4);
    CHECK(p.zeta == 0.0);
    CHECK_THROWS_AS(BlockPartition::from_fields(8, 2, 3), std::invalid_argument);
    CHECK_THROWS_AS(BlockPartition::from_fields(8, 2, 0), std::invalid_argument);
    CHECK_THROWS_AS(BlockPartition::from_fields(8, 0, 4), std::invalid_argument);
    CHECK_THROWS_AS(BlockPartition::from_fields(7, 2, 4), std::invalid_argument);
}

TEST_CASE("prefix construction rejects bad exponents and tiny prefixes") {
    CHECK_THROWS_AS(BlockPartition::from_prefix(1000, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(BlockPartition::from_prefix(1000, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(BlockPartition::from_prefix(1000, -0.6), std::invalid_argument);
    CHECK_THROWS_AS(BlockPartition::from_prefix(1, 0.6), std::invalid_argument);
    CHECK_THROWS_AS(BlockPartition::from_prefix(0, 0.6), std::invalid_argument);
}
