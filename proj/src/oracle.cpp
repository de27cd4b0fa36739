#include "stw/oracle.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <sstream>

#include "stw/blocks.hpp"

namespace stw {

namespace {

/// Deterministic bounded sampling on top of the (portable) mt19937_64 stream.
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(uint64_t seed) : eng(seed) {}
    uint64_t next() { return eng(); }
    int below(int bound) { return bound <= 1 ? 0 : int(next() % uint64_t(bound)); }
    bool coin() { return next() & 1; }
};

bool terminals_separated(const Graph& g, const VertexSet& kept, const VertexSet& terminals) {
    const int n = g.vertex_count();
    std::vector<int> comp(n, -1);
    int cid = 0;
    for (int r = 0; r < n; ++r) {
        if (!kept.contains(r) || comp[r] >= 0) continue;
        std::deque<int> q{r};
        comp[r] = cid;
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            for (int y : g.neighbors(x))
                if (kept.contains(y) && comp[y] < 0) {
                    comp[y] = cid;
                    q.push_back(y);
                }
        }
        ++cid;
    }
    std::vector<char> seen(cid, 0);
    bool ok = true;
    terminals.for_each([&](int t) {
        if (!kept.contains(t)) return;  // terminals are undeletable; defensive
        if (seen[comp[t]]) ok = false;
        seen[comp[t]] = 1;
    });
    return ok;
}

bool connected_avoiding_edge(const Graph& g, const std::vector<char>& edge_deleted,
                             const std::vector<std::pair<int, int>>& edges, int skip_edge,
                             int src, int dst) {
    // adjacency restricted to surviving edges, with one extra edge removed
    const int n = g.vertex_count();
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < int(edges.size()); ++i) {
        if (edge_deleted[i] || i == skip_edge) continue;
        adj[edges[i].first].push_back(edges[i].second);
        adj[edges[i].second].push_back(edges[i].first);
    }
    std::deque<int> q{src};
    std::vector<char> vis(n, 0);
    vis[src] = 1;
    while (!q.empty()) {
        int x = q.front();
        q.pop_front();
        if (x == dst) return true;
        for (int y : adj[x])
            if (!vis[y]) {
                vis[y] = 1;
                q.push_back(y);
            }
    }
    return false;
}

}  // namespace

bool vertex_solution_ok(const LabeledInstance& inst, const VertexSet& kept) {
    switch (inst.problem) {
        case Problem::Sfvs:
            return !has_s_traversing_cycle(inst.graph, kept, inst.s_vertices);
        case Problem::Soct:
            return is_s_bipartite(inst.graph, kept, inst.s_vertices);
        case Problem::Ect:
            return !has_even_cycle(inst.graph, kept);
        case Problem::Nmc:
            return terminals_separated(inst.graph, kept, inst.terminals);
        default:
            throw Error("vertex_solution_ok: not a vertex-deletion problem");
    }
}

bool edge_solution_ok(const LabeledInstance& inst,
                      const std::vector<std::pair<int, int>>& deleted) {
    auto edges = inst.graph.edges();
    std::vector<char> del(edges.size(), 0);
    for (auto e : deleted) {
        if (e.first > e.second) std::swap(e.first, e.second);
        auto it = std::lower_bound(edges.begin(), edges.end(), e);
        if (it == edges.end() || *it != e) throw Error("deleted edge not in graph");
        del[it - edges.begin()] = 1;
    }
    if (inst.problem == Problem::Mwc) {
        Graph h(inst.n());
        for (size_t i = 0; i < edges.size(); ++i)
            if (!del[i]) h.add_edge(edges[i].first, edges[i].second);
        VertexSet all(inst.n());
        for (int v = 0; v < inst.n(); ++v) all.insert(v);
        return terminals_separated(h, all, inst.terminals);
    }
    if (inst.problem == Problem::Resfes) {
        // no surviving cycle may contain an s-edge: an edge lies on a cycle iff its
        // endpoints stay connected without it
        for (size_t i = 0; i < edges.size(); ++i) {
            if (del[i]) continue;
            if (!inst.is_s_edge(edges[i].first, edges[i].second)) continue;
            if (connected_avoiding_edge(inst.graph, del, edges, int(i), edges[i].first,
                                        edges[i].second))
                return false;
        }
        return true;
    }
    throw Error("edge_solution_ok: not an edge-deletion problem");
}

namespace {

OracleResult brute_vertices(const LabeledInstance& inst) {
    std::vector<int> deletable;
    for (int v = 0; v < inst.n(); ++v) {
        if (inst.forced_keep.contains(v)) continue;
        if (inst.problem == Problem::Nmc && inst.terminals.contains(v)) continue;
        deletable.push_back(v);
    }
    const int d = int(deletable.size());
    OracleResult best;

    VertexSet kept(inst.n());
    for (int c = 0; c <= d; ++c) {
        std::vector<int> idx(c);
        for (int i = 0; i < c; ++i) idx[i] = i;
        bool more = c <= d;
        while (more) {
            Weight w = 0;
            for (int i : idx) w += inst.weight[deletable[i]];
            if (!best.feasible || w <= best.optimum_weight) {
                kept.clear();
                for (int v = 0; v < inst.n(); ++v) kept.insert(v);
                for (int i : idx) kept.erase(deletable[i]);
                if (vertex_solution_ok(inst, kept)) {
                    if (!best.feasible || w < best.optimum_weight) {
                        best.feasible = true;
                        best.optimum_weight = w;
                        best.deletion_vertices = VertexSet(inst.n());
                        for (int i : idx) best.deletion_vertices.insert(deletable[i]);
                        best.optimal_count = 1;
                    } else {
                        ++best.optimal_count;
                    }
                }
            }
            // next combination in lexicographic order
            int i = c - 1;
            while (i >= 0 && idx[i] == d - c + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < c; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return best;
}

OracleResult brute_edges(const LabeledInstance& inst) {
    auto edges = inst.graph.edges();
    std::vector<int> deletable;
    for (int i = 0; i < int(edges.size()); ++i)
        if (!(inst.problem == Problem::Resfes &&
              inst.is_s_edge(edges[i].first, edges[i].second)))
            deletable.push_back(i);
    const int d = int(deletable.size());
    OracleResult best;

    for (int c = 0; c <= d; ++c) {
        if (best.feasible && c > best.optimum_weight) break;  // unit edge weights
        std::vector<int> idx(c);
        for (int i = 0; i < c; ++i) idx[i] = i;
        bool more = c <= d;
        while (more) {
            std::vector<std::pair<int, int>> del;
            del.reserve(c);
            for (int i : idx) del.push_back(edges[deletable[i]]);
            if (edge_solution_ok(inst, del)) {
                if (!best.feasible || c < best.optimum_weight) {
                    best.feasible = true;
                    best.optimum_weight = c;
                    best.deletion_edges = del;
                    best.optimal_count = 1;
                } else if (c == best.optimum_weight) {
                    ++best.optimal_count;
                }
            }
            int i = c - 1;
            while (i >= 0 && idx[i] == d - c + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < c; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return best;
}

}  // namespace

OracleResult brute_solve(const LabeledInstance& inst, const OracleLimits& limits) {
    switch (inst.problem) {
        case Problem::Sfvs:
        case Problem::Soct:
        case Problem::Ect:
        case Problem::Nmc:
            if (inst.n() > limits.max_vertices)
                throw Error("brute_solve: " + std::to_string(inst.n()) +
                            " vertices exceeds the enumeration guard");
            return brute_vertices(inst);
        case Problem::Mwc:
        case Problem::Resfes:
            if (inst.graph.edge_count() > limits.max_edges)
                throw Error("brute_solve: " + std::to_string(inst.graph.edge_count()) +
                            " edges exceeds the enumeration guard");
            return brute_edges(inst);
    }
    throw Error("brute_solve: unknown problem");
}

namespace {

/// Smallest S-traversing cycle through some vertex of S, as a vertex list; empty if
/// the kept graph has none.
std::vector<int> sfvs_obstruction(const LabeledInstance& inst, const VertexSet& kept) {
    BlockAnalyzer ba;
    ba.run(inst.graph, kept);
    std::vector<int> best;
    for (int b = 0; b < ba.block_count(); ++b) {
        const auto& bv = ba.block_vertices(b);
        if (bv.size() < 3 || !ba.block_meets(b, inst.s_vertices)) continue;
        VertexSet in_block(inst.n());
        for (int v : bv) in_block.insert(v);
        for (int s : bv) {
            if (!inst.s_vertices.contains(s)) continue;
            // shortest cycle through s inside the block: BFS in block - s between
            // two distinct neighbors of s
            std::vector<int> nbrs;
            for (int w : inst.graph.neighbors(s))
                if (in_block.contains(w)) nbrs.push_back(w);
            for (int u : nbrs) {
                std::vector<int> par(inst.n(), -2);
                std::deque<int> q{u};
                par[u] = -1;
                while (!q.empty()) {
                    int x = q.front();
                    q.pop_front();
                    for (int y : inst.graph.neighbors(x)) {
                        if (!in_block.contains(y) || y == s || par[y] != -2) continue;
                        par[y] = x;
                        q.push_back(y);
                    }
                }
                for (int v : nbrs) {
                    if (v == u || par[v] == -2) continue;
                    std::vector<int> cyc{s};
                    for (int x = v; x != -1; x = par[x]) cyc.push_back(x);
                    if (best.empty() || cyc.size() < best.size()) best = cyc;
                }
            }
            if (!best.empty() && best.size() == 3) return best;
        }
    }
    return best;
}

/// Shortest surviving path between two distinct terminals; empty if none.
std::vector<int> nmc_obstruction(const LabeledInstance& inst, const VertexSet& kept) {
    std::vector<int> best;
    std::vector<int> terms = inst.terminals.to_vector();
    for (int t : terms) {
        std::vector<int> par(inst.n(), -2);
        std::deque<int> q{t};
        par[t] = -1;
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            for (int y : inst.graph.neighbors(x)) {
                if (!kept.contains(y) || par[y] != -2) continue;
                par[y] = x;
                if (inst.terminals.contains(y) && y != t) {
                    std::vector<int> path;
                    for (int z = y; z != -1; z = par[z]) path.push_back(z);
                    if (best.empty() || path.size() < best.size()) best = path;
                    continue;  // do not search through another terminal
                }
                q.push_back(y);
            }
        }
    }
    return best;
}

bool budget_search(const LabeledInstance& inst, VertexSet& kept, int cap) {
    std::vector<int> obstruction;
    if (inst.problem == Problem::Sfvs) obstruction = sfvs_obstruction(inst, kept);
    else obstruction = nmc_obstruction(inst, kept);
    if (obstruction.empty()) return true;
    if (cap == 0) return false;
    for (int v : obstruction) {
        if (inst.forced_keep.contains(v)) continue;
        if (inst.problem == Problem::Nmc && inst.terminals.contains(v)) continue;
        kept.erase(v);
        if (budget_search(inst, kept, cap - 1)) {
            kept.insert(v);
            return true;
        }
        kept.insert(v);
    }
    return false;
}

}  // namespace

bool decide_within_budget(const LabeledInstance& inst, int cap) {
    if (inst.problem != Problem::Sfvs && inst.problem != Problem::Nmc)
        throw Error("decide_within_budget supports sfvs and nmc only");
    VertexSet kept(inst.n());
    for (int v = 0; v < inst.n(); ++v) kept.insert(v);
    return budget_search(inst, kept, cap);
}

CompletionReport completion_consistency(const LabeledInstance& inst, const VertexSet& x,
                                        const VertexSet& y, const CompletionContext& ctx,
                                        int trials, uint64_t seed, DpMode mode,
                                        bool require_equal_signatures) {
    VertexSet jx = x & ctx.bag, jy = y & ctx.bag;
    if (jx != jy) throw Error("completion_consistency: boundary sets differ");
    if (!x.is_subset_of(ctx.gt_vertices) || !y.is_subset_of(ctx.gt_vertices) ||
        !ctx.bag.is_subset_of(ctx.gt_vertices))
        throw Error("completion_consistency: sets outside the processed subgraph");
    if (require_equal_signatures) {
        if (!(signature(inst, x, ctx.bag, mode) == signature(inst, y, ctx.bag, mode)))
            throw Error("completion_consistency: signatures differ");
    }

    const int n = inst.n();
    std::vector<int> boundary = jx.to_vector();
    Rng rng(seed);
    for (int trial = 0; trial < trials; ++trial) {
        int wcount = rng.below(ctx.bag.count() + 4);
        int total = n + wcount;
        Graph h(total);
        for (auto [u, v] : inst.graph.edges()) h.add_edge(u, v);
        VertexSet s2(total);
        inst.s_vertices.for_each([&](int v) { s2.insert(v); });
        for (int i = 0; i < wcount; ++i) {
            int w = n + i;
            if (rng.coin()) s2.insert(w);
            for (int j = 0; j < i; ++j)
                if (rng.coin()) h.add_edge(w, n + j);
            for (int b : boundary)
                if (rng.coin()) h.add_edge(w, b);
        }
        VertexSet xw(total), yw(total);
        x.for_each([&](int v) { xw.insert(v); });
        y.for_each([&](int v) { yw.insert(v); });
        for (int i = 0; i < wcount; ++i) {
            xw.insert(n + i);
            yw.insert(n + i);
        }
        bool okx, oky;
        if (mode == DpMode::Soct) {
            okx = is_s_bipartite(h, xw, s2);
            oky = is_s_bipartite(h, yw, s2);
        } else {
            okx = !has_s_traversing_cycle(h, xw, s2);
            oky = !has_s_traversing_cycle(h, yw, s2);
        }
        if (okx != oky) {
            std::ostringstream os;
            os << "trial " << trial << ": completion with " << wcount
               << " fresh vertices distinguishes the pair (X "
               << (okx ? "valid" : "invalid") << ", Y " << (oky ? "valid" : "invalid")
               << ")";
            return CompletionReport{false, trial, os.str()};
        }
    }
    return CompletionReport{true, -1, ""};
}

}  // namespace stw
