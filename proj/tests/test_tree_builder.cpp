#include <cmath>
#include <limits>

#include "doctest.h"
#include "indelphy/analytics.hpp"
#include "indelphy/tree_builder.hpp"
#include "indelphy/tree_gen.hpp"

using namespace indelphy;

namespace {
const double kInf = std::numeric_limits<double>::infinity();

DistanceMatrix balanced_quartet_matrix() {
    DistanceMatrix d(std::vector<std::string>{"a", "b", "c", "d"});
    d.set(0, 1, 0.94);
    d.set(2, 3, 0.94);
    d.set(0, 2, 1.88);
    d.set(0, 3, 1.88);
    d.set(1, 2, 1.88);
    d.set(1, 3, 1.88);
    return d;
}
}  // namespace

TEST_CASE("four-point check on an additive quartet") {
    DistanceMatrix d = balanced_quartet_matrix();
    QuartetCheck q = four_point_violation(d, 0, 1, 2, 3);
    CHECK(q.resolvable);
    CHECK(q.pairing == 0);
    CHECK(q.margin == doctest::Approx(-1.88));

    d.set(0, 1, kInf);
    QuartetCheck qi = four_point_violation(d, 0, 1, 2, 3);
    CHECK_FALSE(qi.resolvable);
}

TEST_CASE("perturbing one entry flips the chosen pairing") {
    DistanceMatrix d = balanced_quartet_matrix();
    d.set(0, 1, d.at(0, 1) + 10.0);
    QuartetCheck q = four_point_violation(d, 0, 1, 2, 3);
    CHECK(q.resolvable);
    CHECK(q.pairing != 0);
}

TEST_CASE("constant shifts leave quartet margins unchanged") {
    DistanceMatrix d = balanced_quartet_matrix();
    QuartetCheck q0 = four_point_violation(d, 0, 1, 2, 3);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) d.set(i, j, d.at(i, j) + 2.5);
    QuartetCheck q1 = four_point_violation(d, 0, 1, 2, 3);
    CHECK(q1.pairing == q0.pairing);
    CHECK(q1.margin == doctest::Approx(q0.margin));
}

TEST_CASE("neighbor joining recovers random clock trees from exact metrics") {
    RngStream rng(404);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 4 + rng.below(8);
        ClockTreeOptions o;
        o.eta = 0.1;
        Phylogeny tree = generate_clock_tree(n, o, rng);
        DistanceMatrix d = true_distance_matrix(tree, MetricKind::ClockBeta, ModelKind::Cfn);
        Topology truth = Topology::from_tree(tree);
        Topology nj = neighbor_joining(d);
        CHECK(robinson_foulds(nj, truth) == 0);
    }
}

TEST_CASE("verified reconstruction equals neighbor joining on exact metrics") {
    RngStream rng(405);
    for (int trial = 0; trial < 10; ++trial) {
        std::size_t n = 4 + rng.below(12);
        ClockTreeOptions o;
        o.eta = 0.1;
        Phylogeny tree = generate_clock_tree(n, o, rng);
        DistanceMatrix d = true_distance_matrix(tree, MetricKind::ClockBeta, ModelKind::Cfn);
        ReconstructionResult bun = reconstruct_topology(d, BuildMethod::Buneman);
        ReconstructionResult nj = reconstruct_topology(d, BuildMethod::NeighborJoining);
        CHECK(bun.fully_resolved);
        CHECK(bun.topology == nj.topology);
        CHECK(robinson_foulds(bun.topology, Topology::from_tree(tree)) == 0);
        CHECK(bun.skipped_quartets == 0);
    }
}

TEST_CASE("star matrices resolve nothing under verification") {
    DistanceMatrix d(std::vector<std::string>{"a", "b", "c", "d", "e"});
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = i + 1; j < 5; ++j) d.set(i, j, 1.0);
    ReconstructionResult bun = reconstruct_topology(d, BuildMethod::Buneman);
    CHECK(bun.topology.splits().empty());
    CHECK_FALSE(bun.fully_resolved);
    ReconstructionResult nj = reconstruct_topology(d, BuildMethod::NeighborJoining);
    CHECK(nj.fully_resolved);
    CHECK(nj.topology.splits().size() == 2);
}

TEST_CASE("undefined entries are capped for joining and skipped for verification") {
    RngStream rng(406);
    ClockTreeOptions o;
    o.eta = 0.1;
    Phylogeny tree = generate_clock_tree(6, o, rng);
    DistanceMatrix d = true_distance_matrix(tree, MetricKind::ClockBeta, ModelKind::Cfn);
    d.set(0, 1, kInf);
    ReconstructionResult bun = reconstruct_topology(d, BuildMethod::Buneman);
    CHECK(bun.skipped_quartets > 0);
    ReconstructionResult nj = reconstruct_topology(d, BuildMethod::NeighborJoining);
    CHECK(nj.fully_resolved);
    CHECK(nj.topology.leaves().size() == 6);
}

TEST_CASE("diameter bounds closed form") {
    auto [lo, hi] = diameter_bounds(16, 0.1, 0.3);
    CHECK(lo == doctest::Approx(8.0 / 3.0));
    CHECK(hi == doctest::Approx(24.0));
    auto [lo2, hi2] = diameter_bounds(4, 0.2, 0.2);
    CHECK(lo2 == doctest::Approx(4.0));
    CHECK(hi2 == doctest::Approx(4.0));
}
