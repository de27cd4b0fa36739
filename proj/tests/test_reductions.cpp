#include <doctest.h>

#include "stw/reductions.hpp"
#include "stw/oracle.hpp"
#include "test_util.hpp"

using namespace stw;
using namespace testutil;

namespace {

LabeledInstance nmc_instance(Graph g, std::initializer_list<int> terminals) {
    LabeledInstance inst(g.vertex_count());
    inst.graph = std::move(g);
    inst.problem = Problem::Nmc;
    for (int t : terminals) inst.terminals.insert(t);
    return inst;
}

}  // namespace

TEST_CASE("nmc reduction: path with two terminal endpoints") {
    LabeledInstance src = nmc_instance(path_graph(3), {0, 2});
    ReducedInstance red = nmc_to_wsfvs(src);
    CHECK(red.instance.n() == 4);
    CHECK(red.instance.s_vertices.count() == 1);
    CHECK(red.instance.s_vertices.contains(3));
    CHECK(red.instance.forced_keep.contains(0));
    CHECK(red.instance.forced_keep.contains(2));
    CHECK(red.instance.forced_keep.contains(3));
    CHECK(red.instance.graph.has_edge(3, 0));
    CHECK(red.instance.graph.has_edge(3, 2));

    ReductionSolveResult res = solve_via_reduction(src);
    CHECK_FALSE(res.infeasible);
    CHECK(res.optimum_weight == 1);
    CHECK(res.deleted_vertices.contains(1));
}

TEST_CASE("nmc reduction: adjacent terminals are infeasible") {
    LabeledInstance src = nmc_instance(path_graph(2), {0, 1});
    ReductionSolveResult res = solve_via_reduction(src);
    CHECK(res.infeasible);
}

TEST_CASE("nmc reduction: edgeless graph with three terminals") {
    LabeledInstance src = nmc_instance(Graph(5), {0, 2, 4});
    ReductionSolveResult res = solve_via_reduction(src);
    CHECK_FALSE(res.infeasible);
    CHECK(res.optimum_weight == 0);
}

TEST_CASE("resfes reduction structure") {
    LabeledInstance src(3);
    src.graph = cycle_graph(3);
    src.problem = Problem::Resfes;
    src.add_s_edge(0, 1);
    ReducedInstance red = resfes_to_wsfvs(src);
    CHECK(red.instance.n() == 6);
    CHECK(red.instance.s_vertices.count() == 1);
    CHECK(red.instance.forced_keep.count() == 4);  // originals plus the S subdivision

    ReductionSolveResult res = solve_via_reduction(src);
    CHECK(res.optimum_weight == 1);
    REQUIRE(res.deleted_edges.size() == 1);
    CHECK_FALSE(src.is_s_edge(res.deleted_edges[0].first, res.deleted_edges[0].second));
}

TEST_CASE("resfes with no marked edges or on a tree costs nothing") {
    LabeledInstance src(4);
    src.graph = cycle_graph(4);
    src.problem = Problem::Resfes;
    CHECK(solve_via_reduction(src).optimum_weight == 0);

    LabeledInstance tree(5);
    tree.graph = path_graph(5);
    tree.problem = Problem::Resfes;
    tree.add_s_edge(1, 2);
    CHECK(solve_via_reduction(tree).optimum_weight == 0);
}

TEST_CASE("mwc reduction on the named small instances") {
    {
        Graph g(4);
        g.add_edge(0, 1);
        g.add_edge(0, 2);
        g.add_edge(0, 3);
        LabeledInstance src(4);
        src.graph = std::move(g);
        src.problem = Problem::Mwc;
        src.terminals = VertexSet::of(4, {1, 2, 3});
        ReductionSolveResult res = solve_via_reduction(src);
        CHECK(res.optimum_weight == 2);
    }
    {
        LabeledInstance src(2);
        src.graph = path_graph(2);
        src.problem = Problem::Mwc;
        src.terminals = full_set(2);
        CHECK(solve_via_reduction(src).optimum_weight == 1);
    }
    {
        Graph g(4);
        g.add_edge(0, 1);
        g.add_edge(2, 3);
        LabeledInstance src(4);
        src.graph = std::move(g);
        src.problem = Problem::Mwc;
        src.terminals = VertexSet::of(4, {0, 2});
        CHECK(solve_via_reduction(src).optimum_weight == 0);
    }
    {
        // triangle of terminals: any two deleted edges leave one terminal pair
        // adjacent, so all three edges must go
        LabeledInstance src(3);
        src.graph = cycle_graph(3);
        src.problem = Problem::Mwc;
        src.terminals = full_set(3);
        src.budget = 2;
        ReductionSolveResult res = solve_via_reduction(src);
        CHECK(res.optimum_weight == brute_solve(src).optimum_weight);
        CHECK(res.optimum_weight == 3);
        CHECK_FALSE(res.feasible_within_budget);
    }
}

TEST_CASE("resfes with budget 0 on a marked cycle is budget-infeasible") {
    LabeledInstance src(3);
    src.graph = cycle_graph(3);
    src.problem = Problem::Resfes;
    src.add_s_edge(0, 1);
    src.budget = 0;
    ReductionSolveResult res = solve_via_reduction(src);
    CHECK_FALSE(res.feasible_within_budget);
}

TEST_CASE("reduction optima match the dedicated brute force") {
    Rng rng(79);
    // node multiway cut
    for (int iter = 0; iter < 60; ++iter) {
        int n = 4 + rng.below(6);
        LabeledInstance src(n);
        src.graph = random_graph(n, 0.35, rng);
        src.problem = Problem::Nmc;
        int t = 2 + rng.below(3);
        while (src.terminals.count() < t) src.terminals.insert(rng.below(n));
        OracleResult ref = brute_solve(src);
        ReductionSolveResult res = solve_via_reduction(src);
        CHECK(res.infeasible == !ref.feasible);
        if (ref.feasible) CHECK(res.optimum_weight == ref.optimum_weight);
    }
    // restricted edge-subset feedback edge set
    for (int iter = 0; iter < 60; ++iter) {
        int n = 4 + rng.below(6);
        LabeledInstance src(n);
        src.graph = random_graph(n, 0.3, rng);
        if (src.graph.edge_count() > 18 || src.graph.edge_count() == 0) continue;
        src.problem = Problem::Resfes;
        auto edges = src.graph.edges();
        int marks = 1 + rng.below(3);
        for (int i = 0; i < marks; ++i) {
            auto e = edges[rng.below(int(edges.size()))];
            src.add_s_edge(e.first, e.second);
        }
        OracleResult ref = brute_solve(src);
        ReductionSolveResult res = solve_via_reduction(src);
        // marked edges can themselves close an undeletable marked cycle
        CHECK(res.infeasible == !ref.feasible);
        if (ref.feasible) CHECK(res.optimum_weight == ref.optimum_weight);
    }
    // multiway cut
    for (int iter = 0; iter < 60; ++iter) {
        int n = 4 + rng.below(5);
        LabeledInstance src(n);
        src.graph = random_graph(n, 0.35, rng);
        if (src.graph.edge_count() > 18) continue;
        src.problem = Problem::Mwc;
        int t = 2 + rng.below(2);
        while (src.terminals.count() < t) src.terminals.insert(rng.below(n));
        OracleResult ref = brute_solve(src);
        ReductionSolveResult res = solve_via_reduction(src);
        REQUIRE(ref.feasible);
        CHECK(res.optimum_weight == ref.optimum_weight);
    }
}

TEST_CASE("pulled-back deletions avoid terminals and marked edges") {
    Rng rng(83);
    for (int iter = 0; iter < 30; ++iter) {
        int n = 5 + rng.below(4);
        LabeledInstance src(n);
        src.graph = random_graph(n, 0.4, rng);
        src.problem = Problem::Nmc;
        src.terminals.insert(rng.below(n));
        src.terminals.insert(rng.below(n));
        ReductionSolveResult res = solve_via_reduction(src);
        if (res.infeasible) continue;
        CHECK_FALSE(res.deleted_vertices.intersects(src.terminals));
    }
    for (int iter = 0; iter < 30; ++iter) {
        int n = 5 + rng.below(4);
        LabeledInstance src(n);
        src.graph = random_graph(n, 0.3, rng);
        if (src.graph.edge_count() == 0) continue;
        src.problem = Problem::Resfes;
        auto edges = src.graph.edges();
        auto e = edges[rng.below(int(edges.size()))];
        src.add_s_edge(e.first, e.second);
        ReductionSolveResult res = solve_via_reduction(src);
        for (auto d : res.deleted_edges) CHECK_FALSE(src.is_s_edge(d.first, d.second));
    }
}

TEST_CASE("decomposition transfer controls the width") {
    Rng rng(89);
    for (int iter = 0; iter < 40; ++iter) {
        int n = 5 + rng.below(10);
        Graph g = random_graph(n, 0.3, rng);
        TreeDecomposition td = heuristic_td(g);

        LabeledInstance nmc(n);
        nmc.graph = g;
        nmc.problem = Problem::Nmc;
        nmc.terminals.insert(rng.below(n));
        nmc.terminals.insert(rng.below(n));
        TreeDecomposition apexed = transfer_td(nmc, td, Problem::Nmc);
        ReducedInstance red = nmc_to_wsfvs(nmc);
        CHECK_FALSE(validate_td(red.instance.graph, apexed).has_value());
        CHECK(apexed.width() == td.width() + 1);

        LabeledInstance resfes(n);
        resfes.graph = g;
        resfes.problem = Problem::Resfes;
        TreeDecomposition subdivided = transfer_td(resfes, td, Problem::Resfes);
        ReducedInstance red2 = resfes_to_wsfvs(resfes);
        CHECK_FALSE(validate_td(red2.instance.graph, subdivided).has_value());
        // width preserved exactly once there is room for the {u, v_e, v} bags
        if (td.width() >= 2) CHECK(subdivided.width() == td.width());
        else CHECK(subdivided.width() <= 2);
    }
}
