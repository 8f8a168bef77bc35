#include <cmath>
#include <string>

#include "doctest.h"
#include "indelphy/newick.hpp"

using namespace indelphy;

TEST_CASE("parse then emit is a fixed point") {
    for (const std::string& text :
         {std::string("(a:1,(b:0.5,c:0.5):0.5);"), std::string("((a:1,b:1):1,(c:1,d:1):1);"),
          std::string("(x:0.25,y:0.75);")}) {
        Phylogeny t1 = parse_newick_tree(text);
        std::string e1 = emit_newick(t1);
        Phylogeny t2 = parse_newick_tree(e1);
        CHECK(emit_newick(t2) == e1);
        CHECK(t1.leaf_names().size() == t2.leaf_names().size());
    }
}

TEST_CASE("emitted child order is name-canonical") {
    std::string a = emit_newick(parse_newick_tree("(b:1,a:1);"));
    std::string b = emit_newick(parse_newick_tree("(a:1,b:1);"));
    CHECK(a == b);

    std::string c = emit_newick(parse_newick_tree("((d:1,c:1):2,(b:1,a:1):2);"));
    std::string d = emit_newick(parse_newick_tree("((a:1,b:1):2,(c:1,d:1):2);"));
    CHECK(c == d);
}

TEST_CASE("parsed trees carry edge times and zero rates") {
    Phylogeny t = parse_newick_tree("(a:1.5,(b:0.5,c:0.25):2);");
    CHECK(t.leaf_names() == std::vector<std::string>{"a", "b", "c"});
    for (std::size_t v = 0; v < t.size(); ++v) {
        if (t.nodes[v].parent < 0) continue;
        CHECK(t.nodes[v].edge.eta == 0.0);
        CHECK(t.nodes[v].edge.delta == 0.0);
        CHECK(t.nodes[v].edge.lambda == 0.0);
    }
    int b = -1;
    for (int leaf : t.leaves())
        if (t.nodes[leaf].name == "b") b = leaf;
    REQUIRE(b >= 0);
    CHECK(t.nodes[b].edge.t == 0.5);
}

TEST_CASE("missing lengths default to zero times") {
    Phylogeny t = parse_newick_tree("(a,(b,c));");
    CHECK(t.leaf_names().size() == 3);
    for (std::size_t v = 0; v < t.size(); ++v)
        CHECK(t.nodes[v].edge.t == 0.0);
}

TEST_CASE("unbalanced parenthesis reports its offset") {
    try {
        parse_newick_tree("(a,(b,c)");
        FAIL("expected a parse error");
    } catch (const NewickError& ex) {
        CHECK(ex.offset() == 8);
    }
}

TEST_CASE("malformed inputs are rejected with positions") {
    CHECK_THROWS_AS(parse_newick_tree(""), NewickError);
    CHECK_THROWS_AS(parse_newick_tree("(a,b));"), NewickError);
    CHECK_THROWS_AS(parse_newick_tree("(a,b); trailing"), NewickError);
    CHECK_THROWS_AS(parse_newick_tree("(a:x,b:1);"), NewickError);
    CHECK_THROWS_AS(parse_newick_tree("(a,b,c,d);"), NewickError);
    CHECK_THROWS_AS(parse_newick_tree("((a:1):1,b:1);"), NewickError);
}

TEST_CASE("root stem is the only unary node allowed") {
    Phylogeny t = parse_newick_tree("(a:2);");
    CHECK(t.leaf_names() == std::vector<std::string>{"a"});
}

TEST_CASE("topology parser accepts polytomies and ignores lengths") {
    Topology star = parse_newick_topology("(a,b,c,d);");
    CHECK(star.n_leaves() == 4);
    CHECK(star.splits().empty());

    Topology quart = parse_newick_topology("((a:1,b:2),(c:3,d:4));");
    CHECK(quart.splits().size() == 1);
    Topology quart2 = parse_newick_topology("((a,b),(c,d));");
    CHECK(quart == quart2);
    CHECK(robinson_foulds(quart, quart2) == 0);
}

TEST_CASE("topology round-trips through its serialization") {
    Topology t = parse_newick_topology("((a,b),((c,d),e),f);");
    Topology back = parse_newick_topology(emit_newick(t));
    CHECK(back == t);
}
