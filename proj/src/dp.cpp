#include "stw/dp.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <deque>
#include <functional>
#include <memory>
#include <thread>

namespace stw {

DpMode mode_for(Problem p) {
    if (p == Problem::Soct) return DpMode::Soct;
    if (p == Problem::Sfvs) return DpMode::Sfvs;
    throw Error("no direct table mode for problem " + problem_name(p));
}

bool valid_partial(const LabeledInstance& inst, const VertexSet& x, DpMode mode) {
    if (mode == DpMode::Soct) return is_s_bipartite(inst.graph, x, inst.s_vertices);
    return !has_s_traversing_cycle(inst.graph, x, inst.s_vertices);
}

namespace {

bool analyzer_valid(const BlockAnalyzer& ba, const VertexSet& s, DpMode mode) {
    for (int b = 0; b < ba.block_count(); ++b) {
        if (mode == DpMode::Soct) {
            if (!ba.block_bipartite(b) && ba.block_meets(b, s)) return false;
        } else {
            if (ba.block_vertices(b).size() >= 3 && ba.block_meets(b, s)) return false;
        }
    }
    return true;
}

AuxForest build_aux(const BlockAnalyzer& ba, const VertexSet& s, const VertexSet& bag) {
    const int nb = ba.block_count();
    const int nodes = nb + int(ba.cut_vertices().size());

    std::vector<char> active(nodes, 0);
    for (size_t i = 0; i < ba.cut_vertices().size(); ++i)
        if (bag.contains(ba.cut_vertices()[i])) active[nb + int(i)] = 1;
    std::vector<std::vector<int>> bag_of_block(nb);
    for (int b = 0; b < nb; ++b) {
        for (int v : ba.block_vertices(b))
            if (bag.contains(v)) bag_of_block[b].push_back(v);
        const auto& bi = bag_of_block[b];
        if (bi.size() >= 2 || (bi.size() == 1 && !ba.is_cut(bi[0]))) active[b] = 1;
    }

    const auto& adj = ba.inc_adjacency();
    std::vector<int> deg(nodes);
    for (int i = 0; i < nodes; ++i) deg[i] = int(adj[i].size());
    std::vector<char> removed(nodes, 0);

    // prune inactive leaves and isolated nodes, recursively
    std::deque<int> q;
    for (int i = 0; i < nodes; ++i)
        if (!active[i] && deg[i] <= 1) q.push_back(i);
    while (!q.empty()) {
        int x = q.front();
        q.pop_front();
        if (removed[x] || active[x] || deg[x] > 1) continue;
        removed[x] = 1;
        for (int y : adj[x]) {
            if (removed[y]) continue;
            if (--deg[y] <= 1 && !active[y]) q.push_back(y);
        }
    }

    // survivors; contraction terminals are active nodes and junctions
    auto is_terminal = [&](int i) { return active[i] || deg[i] != 2; };
    std::vector<int> newid(nodes, -1);
    AuxForest out;
    for (int i = 0; i < nodes; ++i) {
        if (removed[i]) continue;
        if (!is_terminal(i)) continue;  // contracted away below
        AuxForest::Node nd;
        nd.is_block = i < nb;
        nd.active = active[i] != 0;
        if (nd.active) {
            if (nd.is_block) {
                nd.bag_vertices = bag_of_block[i];
                nd.s_flag = ba.block_meets(i, s);
                nd.bipartite_flag = ba.block_bipartite(i);
            } else {
                nd.cut_vertex = ba.node_cut_vertex(i);
            }
        }
        newid[i] = int(out.nodes.size());
        out.nodes.push_back(std::move(nd));
    }

    // walk chains between terminals; inactive degree-2 internals fold into the edge
    for (int u = 0; u < nodes; ++u) {
        if (removed[u] || newid[u] < 0) continue;
        for (int w0 : adj[u]) {
            if (removed[w0]) continue;
            bool m_bip = true;
            bool m_s = false;
            auto absorb = [&](int node) {
                if (node < nb) {
                    if (!ba.block_bipartite(node)) m_bip = false;
                    if (ba.block_meets(node, s)) m_s = true;
                }
            };
            absorb(u);
            int prev = u, cur = w0;
            while (newid[cur] < 0) {
                absorb(cur);
                int nxt = -1;
                for (int y : adj[cur])
                    if (!removed[y] && y != prev) {
                        nxt = y;
                        break;
                    }
                prev = cur;
                cur = nxt;
            }
            if (u >= cur) continue;  // emit each chain once
            absorb(cur);
            out.edges.push_back({newid[u], newid[cur], m_bip, m_s});
        }
    }
    return out;
}

std::string canonical_forest_code(const AuxForest& f, DpMode mode) {
    const int n = int(f.nodes.size());
    std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, edge index)
    for (int e = 0; e < int(f.edges.size()); ++e) {
        adj[f.edges[e].u].emplace_back(f.edges[e].v, e);
        adj[f.edges[e].v].emplace_back(f.edges[e].u, e);
    }

    auto node_label = [&](int i) {
        const auto& nd = f.nodes[i];
        std::string s;
        if (!nd.active) return std::string(nd.is_block ? "b" : "c");
        if (!nd.is_block) return "C" + std::to_string(nd.cut_vertex);
        s = "B";
        for (int v : nd.bag_vertices) s += std::to_string(v) + ",";
        if (nd.s_flag) s += "s";
        if (mode == DpMode::Soct) s += nd.bipartite_flag ? "1" : "0";
        return s;
    };
    auto edge_label = [&](int e) {
        std::string s = "[";
        if (f.edges[e].m_meets_s) s += "s";
        if (mode == DpMode::Soct) s += f.edges[e].m_bipartite ? "1" : "0";
        s += "]";
        return s;
    };

    std::function<std::string(int, int)> rooted = [&](int v, int parent) {
        std::vector<std::string> kids;
        for (auto [w, e] : adj[v])
            if (w != parent) kids.push_back(edge_label(e) + rooted(w, v));
        std::sort(kids.begin(), kids.end());
        std::string s = "(" + node_label(v);
        for (auto& k : kids) s += k;
        s += ")";
        return s;
    };

    std::vector<char> seen(n, 0);
    std::vector<std::string> tree_codes;
    for (int r = 0; r < n; ++r) {
        if (seen[r]) continue;
        // gather the component
        std::vector<int> comp;
        std::deque<int> q{r};
        seen[r] = 1;
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            comp.push_back(x);
            for (auto [y, e] : adj[x])
                if (!seen[y]) {
                    seen[y] = 1;
                    q.push_back(y);
                }
        }
        // centers by leaf peeling
        std::vector<int> deg(n, 0), order;
        std::deque<int> peel;
        for (int v : comp) deg[v] = int(adj[v].size());
        int remaining = int(comp.size());
        std::vector<int> centers;
        if (remaining == 1) {
            centers = {comp[0]};
        } else {
            std::vector<char> gone(n, 0);
            std::deque<int> lq;
            for (int v : comp)
                if (deg[v] <= 1) lq.push_back(v);
            while (remaining > 2) {
                std::deque<int> next;
                for (int v : lq) {
                    gone[v] = 1;
                    --remaining;
                    for (auto [w, e] : adj[v])
                        if (!gone[w] && --deg[w] == 1) next.push_back(w);
                }
                lq = std::move(next);
            }
            for (int v : comp)
                if (!gone[v]) centers.push_back(v);
        }
        std::string best;
        for (int c : centers) {
            std::string code = rooted(c, -1);
            if (best.empty() || code < best) best = code;
        }
        tree_codes.push_back(best);
    }
    std::sort(tree_codes.begin(), tree_codes.end());
    std::string out;
    for (auto& t : tree_codes) out += t + "|";
    return out;
}

std::string signature_key(const BlockAnalyzer& ba, const LabeledInstance& inst,
                          const VertexSet& x, const VertexSet& bag, DpMode mode) {
    std::vector<int> boundary;
    bag.for_each([&](int v) {
        if (x.contains(v)) boundary.push_back(v);
    });

    AuxForest aux = build_aux(ba, inst.s_vertices, bag);
    std::string key = "I:";
    for (int v : boundary) key += std::to_string(v) + ",";
    key += ";F:";
    key += canonical_forest_code(aux, mode);
    if (mode == DpMode::Soct) {
        key += ";P:";
        for (size_t i = 0; i < boundary.size(); ++i)
            for (size_t j = i + 1; j < boundary.size(); ++j)
                key += parity_char(ba.parity(boundary[i], boundary[j]));
    }
    return key;
}

// Peeling-based leaf-count safeguard against pathological bag sizes: the per-node
// table enumerates all boundary subsets.
constexpr int kMaxBagForTables = 25;

uint64_t forced_mask_of(const std::vector<int>& bag, const LabeledInstance& inst) {
    uint64_t m = 0;
    for (size_t i = 0; i < bag.size(); ++i)
        if (inst.forced_keep.contains(bag[i])) m |= uint64_t(1) << i;
    return m;
}

}  // namespace

AuxForest aux_forest(const LabeledInstance& inst, const VertexSet& x,
                     const VertexSet& bag) {
    BlockAnalyzer ba;
    ba.run(inst.graph, x);
    if (!analyzer_valid(ba, inst.s_vertices, DpMode::Soct))
        throw Error("aux_forest: induced subgraph has an odd cycle through S");
    return build_aux(ba, inst.s_vertices, bag);
}

Signature signature(const LabeledInstance& inst, const VertexSet& x,
                    const VertexSet& bag, DpMode mode) {
    BlockAnalyzer ba;
    ba.run(inst.graph, x);
    if (!analyzer_valid(ba, inst.s_vertices, mode))
        throw Error("signature: set is not a valid partial solution for this mode");
    return Signature{signature_key(ba, inst, x, bag, mode)};
}

void ReducedSet::offer(Signature sig, PartialSolution sol) {
    auto it = by_class.find(sig);
    if (it == by_class.end()) {
        by_class.emplace(std::move(sig), std::move(sol));
        return;
    }
    PartialSolution& cur = it->second;
    if (sol.weight > cur.weight ||
        (sol.weight == cur.weight && sol.vertices.lex_less(cur.vertices))) {
        cur = std::move(sol);
    }
}

ReducedSet reduce_set(const LabeledInstance& inst,
                      const std::vector<VertexSet>& candidates, const VertexSet& bag,
                      DpMode mode) {
    ReducedSet out;
    BlockAnalyzer ba;
    for (const auto& x : candidates) {
        ba.run(inst.graph, x);
        if (!analyzer_valid(ba, inst.s_vertices, mode)) continue;
        Weight w = 0;
        x.for_each([&](int v) { w += inst.weight[v]; });
        out.offer(Signature{signature_key(ba, inst, x, bag, mode)},
                  PartialSolution{x, w});
    }
    return out;
}

namespace {

struct NodeContext {
    const std::vector<int>& bag;
    VertexSet bag_mask;
    uint64_t forced;
};

// Streaming reduce used by the node handlers; reusable across table entries.
class Reducer {
public:
    Reducer(const LabeledInstance& inst, const VertexSet& bag_mask, DpMode mode,
            EquivalencePairSink* sink)
        : inst_(inst), bag_(bag_mask), mode_(mode), sink_(sink) {}

    void offer(const VertexSet& x, Weight w) {
        ++offered_;
        ba_.run(inst_.graph, x);
        if (!analyzer_valid(ba_, inst_.s_vertices, mode_)) return;
        Signature sig{signature_key(ba_, inst_, x, bag_, mode_)};
        auto it = set_.by_class.find(sig);
        if (it == set_.by_class.end()) {
            set_.by_class.emplace(std::move(sig), PartialSolution{x, w});
            return;
        }
        PartialSolution& cur = it->second;
        if (w > cur.weight || (w == cur.weight && x.lex_less(cur.vertices))) {
            if (sink_) sink_->pair(x, cur.vertices, bag_);
            cur = PartialSolution{x, w};
        } else {
            if (sink_) sink_->pair(cur.vertices, x, bag_);
        }
    }

    /// Carries an already-reduced class over unchanged (signatures do not move when
    /// the introduced vertex stays outside the boundary).
    void adopt(const Signature& sig, const PartialSolution& sol) {
        set_.by_class.emplace(sig, sol);
    }

    ReducedSet take() {
        ReducedSet out = std::move(set_);
        set_ = ReducedSet{};
        return out;
    }
    long long reset_offered() {
        long long o = offered_;
        offered_ = 0;
        return o;
    }

private:
    const LabeledInstance& inst_;
    const VertexSet& bag_;
    DpMode mode_;
    EquivalencePairSink* sink_;
    BlockAnalyzer ba_;
    ReducedSet set_;
    long long offered_ = 0;
};

const ReducedSet* lookup(const DpTable& t, uint64_t mask, uint64_t child_forced) {
    auto it = t.find(mask);
    if (it != t.end()) return &it->second;
    if ((mask & child_forced) == child_forced)
        throw Error("internal: missing dp table entry");
    return nullptr;
}

}  // namespace

DpTable dp_step(const LabeledInstance& inst, const NiceTreeDecomposition& ntd,
                int node, const DpTable* child1, const DpTable* child2, DpMode mode,
                const SolveOptions& opts, SolveStats* stats) {
    const auto& nd = ntd.nodes[node];
    const auto& bag = nd.bag;
    if (int(bag.size()) > kMaxBagForTables)
        throw Error("bag of size " + std::to_string(bag.size()) +
                    " too large for subset tables");
    VertexSet bag_mask(inst.n());
    for (int v : bag) bag_mask.insert(v);
    const uint64_t forced = forced_mask_of(bag, inst);
    const uint64_t full = (bag.size() == 64) ? ~uint64_t(0)
                                             : ((uint64_t(1) << bag.size()) - 1);

    std::vector<uint64_t> masks;
    for (uint64_t mask = 0; mask <= full; ++mask)
        if ((mask & forced) == forced) masks.push_back(mask);
    if (nd.kind == NodeKind::Leaf) masks = {0};

    // Per-mask computation; entries are independent given the children's tables.
    auto compute = [&](uint64_t mask, Reducer& red) {
        switch (nd.kind) {
            case NodeKind::Leaf: {
                red.offer(VertexSet(inst.n()), 0);
                break;
            }
            case NodeKind::Introduce: {
                const int v = nd.vertex;
                const auto& cbag = ntd.nodes[nd.child1].bag;
                const uint64_t cforced = forced_mask_of(cbag, inst);
                const int p =
                    int(std::lower_bound(bag.begin(), bag.end(), v) - bag.begin());
                const uint64_t lowbits = (uint64_t(1) << p) - 1;
                uint64_t cmask = (mask & lowbits) | ((mask >> (p + 1)) << p);
                const ReducedSet* src = lookup(*child1, cmask, cforced);
                if (!src) break;
                if (!(mask & (uint64_t(1) << p))) {
                    // the new vertex stays outside: the child classes carry over
                    for (const auto& [sig, sol] : src->by_class)
                        red.adopt(sig, sol);
                } else {
                    for (const auto& [sig, sol] : src->by_class) {
                        VertexSet x = sol.vertices;
                        x.insert(v);
                        red.offer(x, sol.weight + inst.weight[v]);
                    }
                }
                break;
            }
            case NodeKind::Forget: {
                const int v = nd.vertex;
                const auto& cbag = ntd.nodes[nd.child1].bag;
                const uint64_t cforced = forced_mask_of(cbag, inst);
                const int p =
                    int(std::lower_bound(cbag.begin(), cbag.end(), v) - cbag.begin());
                const uint64_t lowbits = (uint64_t(1) << p) - 1;
                uint64_t without = (mask & lowbits) | ((mask & ~lowbits) << 1);
                for (uint64_t cmask : {without, without | (uint64_t(1) << p)}) {
                    if (const ReducedSet* src = lookup(*child1, cmask, cforced))
                        for (const auto& [sig, sol] : src->by_class)
                            red.offer(sol.vertices, sol.weight);
                }
                break;
            }
            case NodeKind::Join: {
                const ReducedSet* a = lookup(*child1, mask, forced);
                const ReducedSet* b = lookup(*child2, mask, forced);
                if (!a || !b) break;
                for (const auto& [s1, x1] : a->by_class)
                    for (const auto& [s2, x2] : b->by_class) {
                        VertexSet x = x1.vertices;
                        x |= x2.vertices;
                        Weight w = 0;
                        x.for_each([&](int u) { w += inst.weight[u]; });
                        red.offer(x, w);
                    }
                break;
            }
        }
    };

    std::vector<ReducedSet> results(masks.size());
    std::vector<long long> offered(masks.size(), 0);
    const int threads = std::max(1, opts.threads);
    if (threads == 1 || masks.size() < 2) {
        Reducer red(inst, bag_mask, mode, opts.pair_sink);
        for (size_t i = 0; i < masks.size(); ++i) {
            compute(masks[i], red);
            results[i] = red.take();
            offered[i] = red.reset_offered();
        }
    } else {
        std::vector<std::thread> pool;
        std::atomic<size_t> cursor{0};
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                Reducer red(inst, bag_mask, mode, opts.pair_sink);
                while (true) {
                    size_t i = cursor.fetch_add(1);
                    if (i >= masks.size()) break;
                    compute(masks[i], red);
                    results[i] = red.take();
                    offered[i] = red.reset_offered();
                }
            });
        for (auto& th : pool) th.join();
    }

    DpTable table;
    long long bag_classes = 0;
    for (size_t i = 0; i < masks.size(); ++i) {
        if (stats) {
            stats->candidates_reduced += offered[i];
            stats->max_classes_per_entry =
                std::max(stats->max_classes_per_entry, (long long)results[i].size());
            bag_classes += (long long)results[i].size();
        }
        table.emplace(masks[i], std::move(results[i]));
    }
    if (stats) stats->max_classes_per_bag = std::max(stats->max_classes_per_bag, bag_classes);
    return table;
}

namespace {

SolveResult solve_mode(const LabeledInstance& inst, const NiceTreeDecomposition& ntd,
                       DpMode mode, const SolveOptions& opts_in) {
    auto t0 = std::chrono::steady_clock::now();
    check_nice_td(ntd, inst.graph);
    if (!ntd.nodes[ntd.root].bag.empty()) throw Error("root bag must be empty");
    SolveOptions opts = opts_in;
    if (opts.pair_sink) opts.threads = 1;  // the sink is not synchronized

    std::vector<int> order = ntd.postorder();
    std::vector<std::unique_ptr<DpTable>> tables(ntd.nodes.size());
    SolveResult res;
    res.kept = VertexSet(inst.n());
    res.deletion_set = VertexSet(inst.n());

    for (int node : order) {
        const auto& nd = ntd.nodes[node];
        const DpTable* c1 = nd.child1 >= 0 ? tables[nd.child1].get() : nullptr;
        const DpTable* c2 = nd.child2 >= 0 ? tables[nd.child2].get() : nullptr;
        tables[node] = std::make_unique<DpTable>(
            dp_step(inst, ntd, node, c1, c2, mode, opts, &res.stats));
        if (nd.child1 >= 0) tables[nd.child1].reset();
        if (nd.child2 >= 0) tables[nd.child2].reset();
        res.stats.dp_nodes++;
    }

    const DpTable& root = *tables[ntd.root];
    auto it = root.find(0);
    const PartialSolution* best = nullptr;
    if (it != root.end()) {
        for (const auto& [sig, sol] : it->second.by_class) {
            if (!best || sol.weight > best->weight ||
                (sol.weight == best->weight && sol.vertices.lex_less(best->vertices)))
                best = &sol;
        }
    }
    if (!best) {
        res.infeasible = true;
        res.feasible_within_budget = false;
    } else {
        res.max_weight = best->weight;
        res.kept = best->vertices;
        res.deletion_set = VertexSet(inst.n());
        for (int v = 0; v < inst.n(); ++v)
            if (!res.kept.contains(v)) res.deletion_set.insert(v);
        res.deletion_weight = inst.total_weight() - res.max_weight;
        res.feasible_within_budget =
            !inst.budget.has_value() || res.deletion_weight <= *inst.budget;
    }
    res.stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace

SolveResult solve_soct(const LabeledInstance& inst, const NiceTreeDecomposition& ntd,
                       const SolveOptions& opts) {
    return solve_mode(inst, ntd, DpMode::Soct, opts);
}

SolveResult solve_sfvs(const LabeledInstance& inst, const NiceTreeDecomposition& ntd,
                       const SolveOptions& opts) {
    return solve_mode(inst, ntd, DpMode::Sfvs, opts);
}

}  // namespace stw
