#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "indelphy/topology.hpp"

using namespace indelphy;

namespace {

const EdgeParams kE{1.0, 0.0, 0.0, 0.0};

Phylogeny caterpillar6() {
    Phylogeny t;
    int v = t.add_root();
    for (int i = 5; i >= 2; --i) {
        t.add_child(v, kE, "t" + std::to_string(i));
        int inner = t.add_child(v, kE);
        v = inner;
    }
    t.add_child(v, kE, "t1");
    t.add_child(v, kE, "t0");
    return t;
}

Phylogeny balanced6() {
    Phylogeny t;
    int root = t.add_root();
    int left = t.add_child(root, kE);
    t.add_child(left, kE, "t0");
    t.add_child(left, kE, "t1");
    int right = t.add_child(root, kE);
    int r1 = t.add_child(right, kE);
    t.add_child(r1, kE, "t2");
    t.add_child(r1, kE, "t3");
    int r2 = t.add_child(right, kE);
    t.add_child(r2, kE, "t4");
    t.add_child(r2, kE, "t5");
    return t;
}

Split make_split(std::vector<std::size_t> side, std::size_t n) {
    std::vector<std::uint64_t> mask((n + 63) / 64, 0);
    for (std::size_t i : side) mask[i >> 6] |= std::uint64_t(1) << (i & 63);
    return Split::make(mask, n);
}

}  // namespace

TEST_CASE("splits canonicalize to the side excluding the first leaf") {
    Split a = make_split({0, 1}, 6);
    Split b = make_split({2, 3, 4, 5}, 6);
    CHECK(a == b);
    CHECK_FALSE(a.test(0));
    CHECK(a.count() == 4);
}

TEST_CASE("split compatibility") {
    std::size_t n = 6;
    Split ab = make_split({0, 1}, n);
    Split abc = make_split({0, 1, 2}, n);
    Split bc = make_split({1, 2}, n);
    CHECK(splits_compatible(ab, abc, n));
    CHECK(splits_compatible(ab, ab, n));
    CHECK_FALSE(splits_compatible(ab, bc, n));
}

TEST_CASE("topology construction validates its splits") {
    std::vector<std::string> names = {"a", "b", "c", "d", "e", "f"};
    CHECK_NOTHROW(Topology(names, {make_split({0, 1}, 6), make_split({0, 1, 2}, 6)}));
    CHECK_THROWS_AS(Topology(names, {make_split({0}, 6)}), std::invalid_argument);
    CHECK_THROWS_AS(Topology(names, {make_split({0, 1}, 6), make_split({1, 2}, 6)}),
                    std::invalid_argument);
    std::vector<std::string> dup = {"a", "a", "c", "d", "e", "f"};
    CHECK_THROWS_AS(Topology(dup, {}), std::invalid_argument);
}

TEST_CASE("from_tree extracts the nontrivial splits") {
    Phylogeny bal;
    int root = bal.add_root();
    int u1 = bal.add_child(root, kE);
    int u2 = bal.add_child(root, kE);
    bal.add_child(u1, kE, "a");
    bal.add_child(u1, kE, "b");
    bal.add_child(u2, kE, "c");
    bal.add_child(u2, kE, "d");
    Topology topo = Topology::from_tree(bal);
    CHECK(topo.n_leaves() == 4);
    CHECK(topo.splits().size() == 1);
    CHECK(topo.fully_resolved());

    Topology expect({"a", "b", "c", "d"}, {make_split({2, 3}, 4)});
    CHECK(topo == expect);
    CHECK(robinson_foulds(topo, expect) == 0);
}

TEST_CASE("robinson_foulds on six-leaf shapes") {
    Topology cat = Topology::from_tree(caterpillar6());
    Topology bal = Topology::from_tree(balanced6());
    CHECK(cat.splits().size() == 3);
    CHECK(bal.splits().size() == 3);
    CHECK(robinson_foulds(cat, cat) == 0);
    // shared: t0t1 directly, t4t5 as the complement of t0t1t2t3
    CHECK(robinson_foulds(cat, bal) == 2);

    Topology star({"t0", "t1", "t2", "t3", "t4", "t5"}, {});
    CHECK(robinson_foulds(cat, star) == 3);
    CHECK_FALSE(star.fully_resolved());
}

TEST_CASE("robinson_foulds rejects mismatched leaf sets") {
    Topology a({"a", "b", "c", "d"}, {});
    Topology b({"a", "b", "c", "e"}, {});
    CHECK_THROWS_AS(robinson_foulds(a, b), std::invalid_argument);
}
