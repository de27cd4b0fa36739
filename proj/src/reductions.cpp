#include "stw/reductions.hpp"

#include <algorithm>

namespace stw {

namespace {

LabeledInstance with_apex(const LabeledInstance& src, int* apex_out) {
    const int n = src.n();
    LabeledInstance out(n + 1);
    for (auto [u, v] : src.graph.edges()) out.graph.add_edge(u, v);
    for (int v = 0; v < n; ++v) out.weight[v] = src.weight[v];
    out.weight[n] = 0;
    src.terminals.for_each([&](int t) { out.graph.add_edge(n, t); });
    *apex_out = n;
    return out;
}

}  // namespace

ReducedInstance nmc_to_wsfvs(const LabeledInstance& src) {
    if (src.problem != Problem::Nmc) throw Error("nmc_to_wsfvs: problem kind mismatch");
    int apex = -1;
    ReducedInstance out;
    out.instance = with_apex(src, &apex);
    out.instance.problem = Problem::Sfvs;
    out.instance.budget = src.budget;
    out.instance.s_vertices.insert(apex);
    out.instance.forced_keep.insert(apex);
    src.terminals.for_each([&](int t) { out.instance.forced_keep.insert(t); });
    src.forced_keep.for_each([&](int v) { out.instance.forced_keep.insert(v); });
    out.trace.map.resize(out.instance.n());
    for (int v = 0; v < src.n(); ++v)
        out.trace.map[v] = {ReductionTrace::Origin::Original, v, {-1, -1}};
    out.trace.map[apex] = {ReductionTrace::Origin::Apex, -1, {-1, -1}};
    return out;
}

namespace {

/// Subdivides every edge of base; S' is the subdivision vertices of marked edges,
/// everything original plus S' is undeletable. source_edge entries refer to base.
ReducedInstance subdivide_all(const LabeledInstance& base,
                              const std::vector<std::pair<int, int>>& marked) {
    const int n = base.n();
    auto edges = base.graph.edges();
    ReducedInstance out;
    out.instance = LabeledInstance(n + int(edges.size()));
    out.instance.problem = Problem::Sfvs;
    out.instance.budget = base.budget;
    out.trace.map.resize(out.instance.n());
    for (int v = 0; v < n; ++v) {
        out.instance.weight[v] = base.weight[v];
        out.instance.forced_keep.insert(v);
        out.trace.map[v] = {ReductionTrace::Origin::Original, v, {-1, -1}};
    }
    for (int i = 0; i < int(edges.size()); ++i) {
        int ve = n + i;
        auto [u, v] = edges[i];
        out.instance.graph.add_edge(u, ve);
        out.instance.graph.add_edge(ve, v);
        out.instance.weight[ve] = 1;  // unit edge weights
        out.trace.map[ve] = {ReductionTrace::Origin::Subdivision, -1, edges[i]};
        if (std::binary_search(marked.begin(), marked.end(), edges[i])) {
            out.instance.s_vertices.insert(ve);
            out.instance.forced_keep.insert(ve);
        }
    }
    return out;
}

}  // namespace

ReducedInstance resfes_to_wsfvs(const LabeledInstance& src) {
    if (src.problem != Problem::Resfes) throw Error("resfes_to_wsfvs: problem kind mismatch");
    return subdivide_all(src, src.s_edges);
}

ReducedInstance mwc_to_wsfvs(const LabeledInstance& src) {
    if (src.problem != Problem::Mwc) throw Error("mwc_to_wsfvs: problem kind mismatch");
    int apex = -1;
    LabeledInstance mid = with_apex(src, &apex);
    std::vector<std::pair<int, int>> apex_edges;
    src.terminals.for_each([&](int t) {
        apex_edges.emplace_back(std::min(apex, t), std::max(apex, t));
    });
    std::sort(apex_edges.begin(), apex_edges.end());
    mid.budget = src.budget;
    ReducedInstance out = subdivide_all(mid, apex_edges);
    // subdivision vertices of original edges pull back to source edges; those of
    // apex edges are undeletable and never appear in a deletion set
    for (auto& e : out.trace.map) {
        if (e.origin == ReductionTrace::Origin::Subdivision &&
            (e.source_edge.first == apex || e.source_edge.second == apex))
            e = {ReductionTrace::Origin::Apex, -1, {-1, -1}};
        else if (e.origin == ReductionTrace::Origin::Original && e.source_vertex == apex)
            e = {ReductionTrace::Origin::Apex, -1, {-1, -1}};
    }
    return out;
}

TreeDecomposition transfer_td(const LabeledInstance& src, const TreeDecomposition& td,
                              Problem problem) {
    if (auto bad = validate_td(src.graph, td))
        throw Error("source decomposition invalid: " + bad->to_string());

    auto add_apex_everywhere = [](TreeDecomposition t, int apex) {
        for (auto& bag : t.bags) bag.push_back(apex);  // apex id is largest
        t.graph_n += 1;
        return t;
    };
    // Each subdivision vertex gets a fresh bag {u, v_e, v} hung off a bag covering
    // its edge; the width stays unchanged whenever the source width is at least 2.
    auto subdivide = [](const TreeDecomposition& t, const Graph& base, int first_sub) {
        TreeDecomposition out = t;
        auto edges = base.edges();
        out.graph_n = base.vertex_count() + int(edges.size());
        for (int i = 0; i < int(edges.size()); ++i) {
            auto [u, v] = edges[i];
            int host = -1;
            for (int b = 0; b < out.node_count && host < 0; ++b) {
                const auto& bag = t.bags[b];
                if (std::binary_search(bag.begin(), bag.end(), u) &&
                    std::binary_search(bag.begin(), bag.end(), v))
                    host = b;
            }
            if (host < 0) throw Error("transfer_td: edge not covered");
            std::vector<int> nb{u, v, first_sub + i};
            std::sort(nb.begin(), nb.end());
            out.bags.push_back(nb);
            out.tree_edges.emplace_back(host, out.node_count);
            out.node_count += 1;
        }
        return out;
    };

    switch (problem) {
        case Problem::Nmc:
            return add_apex_everywhere(td, src.n());
        case Problem::Resfes:
            return subdivide(td, src.graph, src.n());
        case Problem::Mwc: {
            int apex = src.n();
            TreeDecomposition t1 = add_apex_everywhere(td, apex);
            Graph mid(src.n() + 1);
            for (auto [u, v] : src.graph.edges()) mid.add_edge(u, v);
            src.terminals.for_each([&](int t) { mid.add_edge(apex, t); });
            return subdivide(t1, mid, src.n() + 1);
        }
        default:
            throw Error("transfer_td: unsupported problem");
    }
}

ReductionSolveResult solve_via_reduction(const LabeledInstance& src,
                                         const TreeDecomposition* source_td,
                                         const SolveOptions& opts) {
    if (src.problem != Problem::Nmc && src.problem != Problem::Resfes &&
        src.problem != Problem::Mwc)
        throw Error("solve_via_reduction: unsupported problem " + problem_name(src.problem));

    ReducedInstance red;
    switch (src.problem) {
        case Problem::Nmc: red = nmc_to_wsfvs(src); break;
        case Problem::Resfes: red = resfes_to_wsfvs(src); break;
        default: red = mwc_to_wsfvs(src); break;
    }

    TreeDecomposition base_td = source_td ? *source_td : heuristic_td(src.graph);
    TreeDecomposition red_td = transfer_td(src, base_td, src.problem);
    if (auto bad = validate_td(red.instance.graph, red_td))
        throw Error("transferred decomposition invalid: " + bad->to_string());
    NiceTreeDecomposition ntd = nicify(red_td, red.instance.graph);

    SolveResult inner = solve_sfvs(red.instance, ntd, opts);

    ReductionSolveResult out;
    out.width_used = red_td.width();
    out.stats = inner.stats;
    if (inner.infeasible) {
        out.infeasible = true;
        out.feasible_within_budget = false;
        return out;
    }
    out.deleted_vertices = VertexSet(src.n());
    Weight w = 0;
    inner.deletion_set.for_each([&](int v) {
        const auto& e = red.trace.map[v];
        switch (e.origin) {
            case ReductionTrace::Origin::Original:
                out.deleted_vertices.insert(e.source_vertex);
                w += src.weight[e.source_vertex];
                break;
            case ReductionTrace::Origin::Subdivision:
                out.deleted_edges.push_back(e.source_edge);
                w += 1;
                break;
            case ReductionTrace::Origin::Apex:
                throw Error("internal: undeletable reduction vertex was deleted");
        }
    });
    std::sort(out.deleted_edges.begin(), out.deleted_edges.end());
    out.optimum_weight = w;
    out.feasible_within_budget = !src.budget.has_value() || w <= *src.budget;
    return out;
}

}  // namespace stw
