#include <doctest.h>

#include <set>

#include "stw/decomposition.hpp"
#include "test_util.hpp"

using namespace stw;
using namespace testutil;

TEST_CASE("load_td parses the single-bag and two-bag forms") {
    TreeDecomposition td = load_td("s td 1 3 3\nb 1 1 2 3\n");
    REQUIRE(td.node_count == 1);
    CHECK(td.bags[0] == std::vector<int>{0, 1, 2});

    td = load_td("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n");
    REQUIRE(td.node_count == 2);
    CHECK(td.bags[1] == std::vector<int>{1, 2});
    CHECK(td.tree_edges == std::vector<std::pair<int, int>>{{0, 1}});
}

TEST_CASE("load_td rejects malformed input with a line number") {
    CHECK_THROWS_WITH_AS(load_td("s td 2 2 3\nb 5 1\nb 2 2\n1 2\n"),
                         doctest::Contains("line 2"), Error);
    CHECK_THROWS_AS(load_td("b 1 1\n"), Error);                      // bag before header
    CHECK_THROWS_AS(load_td("s td 3 2 3\nb 1 1\nb 2 2\nb 3 3\n1 2\n"), Error);  // not a tree
    CHECK_THROWS_AS(load_td("s td 2 2 3\nb 1 1\nb 2 2\n1 2\n2 1\n"), Error);
}

TEST_CASE("serialize_td round-trips") {
    Graph g = cycle_graph(5);
    TreeDecomposition td = heuristic_td(g);
    TreeDecomposition back = load_td(serialize_td(td));
    CHECK(back.bags == td.bags);
    CHECK(back.tree_edges == td.tree_edges);
}

TEST_CASE("validate_td reports the first violated axiom with a witness") {
    Graph k3 = complete_graph(3);
    TreeDecomposition one;
    one.node_count = 1;
    one.graph_n = 3;
    one.bags = {{0, 1, 2}};
    CHECK_FALSE(validate_td(k3, one).has_value());

    TreeDecomposition two;
    two.node_count = 2;
    two.graph_n = 3;
    two.bags = {{0, 1}, {1, 2}};
    two.tree_edges = {{0, 1}};
    auto bad = validate_td(k3, two);
    REQUIRE(bad.has_value());
    CHECK(bad->kind == TdViolation::EdgeUncovered);
    CHECK(bad->a == 0);
    CHECK(bad->b == 2);

    Graph e(3);
    e.add_edge(0, 2);
    TreeDecomposition disc;
    disc.node_count = 3;
    disc.graph_n = 3;
    disc.bags = {{0}, {1}, {0, 2}};
    disc.tree_edges = {{0, 1}, {1, 2}};
    bad = validate_td(e, disc);
    REQUIRE(bad.has_value());
    CHECK(bad->kind == TdViolation::OccurrencesDisconnected);
    CHECK(bad->a == 0);
}

TEST_CASE("heuristic_td widths on standard graphs") {
    Graph tree(7);
    for (int i = 1; i < 7; ++i) tree.add_edge(i, (i - 1) / 2);
    CHECK(heuristic_td(tree).width() == 1);
    CHECK(heuristic_td(cycle_graph(5)).width() == 2);
    CHECK(heuristic_td(complete_graph(5)).width() == 4);
}

TEST_CASE("nicify of a single two-vertex bag is the expected chain") {
    Graph g(2);
    g.add_edge(0, 1);
    TreeDecomposition td;
    td.node_count = 1;
    td.graph_n = 2;
    td.bags = {{0, 1}};
    NiceTreeDecomposition ntd = nicify(td, g);
    check_nice_td(ntd, g);
    // leaf, introduce 0, introduce 1, forget 0, forget 1 (root)
    REQUIRE(ntd.nodes.size() == 5);
    auto order = ntd.postorder();
    CHECK(ntd.nodes[order[0]].kind == NodeKind::Leaf);
    CHECK(ntd.nodes[order[1]].kind == NodeKind::Introduce);
    CHECK(ntd.nodes[order[1]].vertex == 0);
    CHECK(ntd.nodes[order[2]].kind == NodeKind::Introduce);
    CHECK(ntd.nodes[order[2]].vertex == 1);
    CHECK(ntd.nodes[order[3]].kind == NodeKind::Forget);
    CHECK(ntd.nodes[order[3]].vertex == 0);
    CHECK(ntd.nodes[order[4]].kind == NodeKind::Forget);
    CHECK(ntd.nodes[order[4]].vertex == 1);
    CHECK(order[4] == ntd.root);
}

TEST_CASE("nicify of the empty graph is a bare root leaf") {
    Graph g(0);
    TreeDecomposition td;
    td.node_count = 1;
    td.graph_n = 0;
    td.bags = {{}};
    NiceTreeDecomposition ntd = nicify(td, g);
    check_nice_td(ntd, g);
    CHECK(ntd.nodes.size() == 1);
    CHECK(ntd.nodes[ntd.root].kind == NodeKind::Leaf);
}

TEST_CASE("nicify materializes duplicate adjacent bags through a join") {
    Graph g(2);
    g.add_edge(0, 1);
    TreeDecomposition td;
    td.node_count = 2;
    td.graph_n = 2;
    td.bags = {{0, 1}, {0, 1}};
    td.tree_edges = {{0, 1}};
    NiceTreeDecomposition ntd = nicify(td, g);
    check_nice_td(ntd, g);
    int joins = 0;
    for (const auto& nd : ntd.nodes)
        if (nd.kind == NodeKind::Join) {
            ++joins;
            CHECK(nd.bag == std::vector<int>{0, 1});
            CHECK(ntd.nodes[nd.child1].bag == nd.bag);
            CHECK(ntd.nodes[nd.child2].bag == nd.bag);
        }
    CHECK(joins >= 1);
}

TEST_CASE("nicify preserves width and validity on random graphs") {
    Rng rng(23);
    for (int iter = 0; iter < 200; ++iter) {
        int n = 2 + rng.below(39);
        Graph g = random_graph(n, 0.12, rng);
        TreeDecomposition td = heuristic_td(g);
        CHECK_FALSE(validate_td(g, td).has_value());
        NiceTreeDecomposition ntd = nicify(td, g);
        check_nice_td(ntd, g);
        CHECK(ntd.width() == td.width());
        CHECK(ntd.nodes[ntd.root].bag.empty());
        for (const auto& nd : ntd.nodes)
            if (nd.kind == NodeKind::Leaf) CHECK(nd.bag.empty());
    }
}
