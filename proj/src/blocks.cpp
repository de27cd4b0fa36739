#include "stw/blocks.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace stw {

char parity_char(Parity p) {
    switch (p) {
        case Parity::Disconnected: return 'd';
        case Parity::Even: return 'e';
        case Parity::Odd: return 'o';
        case Parity::Both: return 'b';
    }
    return '?';
}

void BlockAnalyzer::ensure_capacity(int n) {
    if (int(vis_.size()) >= n) return;
    vis_.resize(n, 0);
    disc_.resize(n, 0);
    low_.resize(n, 0);
    comp_.resize(n, -1);
    cut_mark_.resize(n, 0);
    color_.resize(n, 0);
    color_stamp_.resize(n, 0);
    cut_node_.resize(n, -1);
    home_block_.resize(n, -1);
}

void BlockAnalyzer::run(const Graph& g, const VertexSet& subset) {
    const int n = g.vertex_count();
    ensure_capacity(n);
    ++epoch_;
    block_verts_.clear();
    block_edges_.clear();
    block_bip_.clear();
    cuts_.clear();

    std::vector<int> verts = subset.to_vector();

    // Iterative Hopcroft-Tarjan over the induced subgraph. The edge stack carries
    // the edges of the block being assembled.
    std::vector<std::pair<int, int>> estack;
    struct Frame {
        int v;
        int parent;
        size_t next;
        int children;
    };
    std::vector<Frame> stack;
    int timer = 0;
    int comp_id = 0;

    auto emit_block = [&](int u, int child) {
        std::vector<std::pair<int, int>> edges;
        while (!estack.empty()) {
            auto e = estack.back();
            estack.pop_back();
            edges.push_back(e);
            if (e.first == u && e.second == child) break;
        }
        std::vector<int> vs;
        vs.reserve(edges.size() + 1);
        for (auto [a, b] : edges) {
            vs.push_back(a);
            vs.push_back(b);
        }
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        block_verts_.push_back(std::move(vs));
        block_edges_.push_back(std::move(edges));
    };

    for (int root : verts) {
        if (vis_[root] == epoch_) continue;
        stack.push_back({root, -1, 0, 0});
        vis_[root] = epoch_;
        disc_[root] = low_[root] = timer++;
        comp_[root] = comp_id;
        bool root_isolated = true;

        while (!stack.empty()) {
            Frame& f = stack.back();
            const auto& adj = g.neighbors(f.v);
            bool descended = false;
            while (f.next < adj.size()) {
                int w = adj[f.next++];
                if (!subset.contains(w)) continue;
                root_isolated = false;
                if (vis_[w] != epoch_) {
                    estack.emplace_back(f.v, w);
                    vis_[w] = epoch_;
                    disc_[w] = low_[w] = timer++;
                    comp_[w] = comp_id;
                    ++f.children;
                    stack.push_back({w, f.v, 0, 0});
                    descended = true;
                    break;
                } else if (w != f.parent && disc_[w] < disc_[f.v]) {
                    estack.emplace_back(f.v, w);
                    low_[f.v] = std::min(low_[f.v], disc_[w]);
                }
            }
            if (descended) continue;
            int v = f.v;
            int parent = f.parent;
            stack.pop_back();
            if (parent >= 0) {
                Frame& pf = stack.back();
                low_[parent] = std::min(low_[parent], low_[v]);
                if (low_[v] >= disc_[parent]) {
                    emit_block(parent, v);
                    bool parent_is_root = pf.parent < 0;
                    if ((!parent_is_root || pf.children >= 2) && cut_mark_[parent] != epoch_) {
                        cut_mark_[parent] = epoch_;
                        cuts_.push_back(parent);
                    }
                }
            } else if (root_isolated) {
                block_verts_.push_back({v});
                block_edges_.push_back({});
            }
        }
        ++comp_id;
    }

    std::sort(cuts_.begin(), cuts_.end());

    // Deterministic block order: sorted vertex lists compared lexicographically.
    std::vector<int> order(block_verts_.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = int(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return block_verts_[a] < block_verts_[b]; });
    {
        std::vector<std::vector<int>> bv(order.size());
        std::vector<std::vector<std::pair<int, int>>> be(order.size());
        for (size_t i = 0; i < order.size(); ++i) {
            bv[i] = std::move(block_verts_[order[i]]);
            be[i] = std::move(block_edges_[order[i]]);
        }
        block_verts_ = std::move(bv);
        block_edges_ = std::move(be);
    }

    for (int v : verts) home_block_[v] = -1;
    for (int b = 0; b < block_count(); ++b)
        for (int v : block_verts_[b])
            if (cut_mark_[v] != epoch_) home_block_[v] = b;

    // Per-block bipartiteness: 2-color each block using only its own edges. The
    // color array is reused; a block's vertices are stamped before its BFS.
    block_bip_.assign(block_verts_.size(), 1);
    std::unordered_map<uint64_t, int> edge_block;  // cut-cut edges only
    {
        std::deque<int> q;
        for (int b = 0; b < block_count(); ++b) {
            const auto& edges = block_edges_[b];
            if (edges.empty()) continue;
            for (auto [x, y] : edges)
                if (cut_mark_[x] == epoch_ && cut_mark_[y] == epoch_) {
                    uint64_t key = (uint64_t(std::min(x, y)) << 32) | uint64_t(std::max(x, y));
                    edge_block[key] = b;
                }
            if (block_verts_[b].size() < 3) continue;
            // local adjacency through the edge list, BFS from the smallest vertex
            std::unordered_map<int, std::vector<int>> badj;
            badj.reserve(edges.size() * 2);
            for (auto [x, y] : edges) {
                badj[x].push_back(y);
                badj[y].push_back(x);
            }
            int s = block_verts_[b][0];
            color_[s] = 0;
            color_stamp_[s] = -b - 1000000000;  // colored marker for this block
            q.clear();
            q.push_back(s);
            bool bip = true;
            while (!q.empty()) {
                int x = q.front();
                q.pop_front();
                for (int y : badj[x]) {
                    if (color_stamp_[y] == -b - 1000000000) {
                        if (color_[y] == color_[x]) bip = false;
                    } else {
                        color_[y] = color_[x] ^ 1;
                        color_stamp_[y] = -b - 1000000000;
                        q.push_back(y);
                    }
                }
            }
            block_bip_[b] = bip ? 1 : 0;
        }
    }

    // Global 2-coloring of the union of the bipartite blocks. Consistent because
    // every cycle of that union lies inside one (bipartite) block.
    for (int v : verts) color_stamp_[v] = 0;
    {
        std::deque<int> q;
        for (int v : verts) {
            if (color_stamp_[v] == epoch_) continue;
            color_stamp_[v] = epoch_;
            color_[v] = 0;
            q.clear();
            q.push_back(v);
            while (!q.empty()) {
                int x = q.front();
                q.pop_front();
                for (int y : g.neighbors(x)) {
                    if (!subset.contains(y) || color_stamp_[y] == epoch_) continue;
                    int eb;
                    if (cut_mark_[x] != epoch_) eb = home_block_[x];
                    else if (cut_mark_[y] != epoch_) eb = home_block_[y];
                    else {
                        uint64_t key =
                            (uint64_t(std::min(x, y)) << 32) | uint64_t(std::max(x, y));
                        eb = edge_block.at(key);
                    }
                    if (!block_bip_[eb]) continue;
                    color_stamp_[y] = epoch_;
                    color_[y] = color_[x] ^ 1;
                    q.push_back(y);
                }
            }
        }
    }

    build_inc_forest();
}

int BlockAnalyzer::node_of_vertex(int v) const {
    if (cut_mark_[v] == epoch_) return cut_node_[v];
    return home_block_[v];
}

void BlockAnalyzer::build_inc_forest() {
    const int nb = block_count();
    int nodes = nb + int(cuts_.size());
    inc_adj_.assign(nodes, {});
    node_cut_vertex_.assign(nodes, -1);
    for (size_t i = 0; i < cuts_.size(); ++i) {
        cut_node_[cuts_[i]] = nb + int(i);
        node_cut_vertex_[nb + int(i)] = cuts_[i];
    }
    for (int b = 0; b < nb; ++b) {
        for (int v : block_verts_[b]) {
            if (cut_mark_[v] == epoch_) {
                inc_adj_[b].push_back(cut_node_[v]);
                inc_adj_[cut_node_[v]].push_back(b);
            }
        }
    }

    inc_parent_.assign(nodes, -2);
    inc_depth_.assign(nodes, 0);
    inc_nonbip_prefix_.assign(nodes, 0);
    inc_comp_.assign(nodes, -1);
    int cid = 0;
    std::deque<int> q;
    for (int r = 0; r < nodes; ++r) {
        if (inc_parent_[r] != -2) continue;
        inc_parent_[r] = -1;
        inc_depth_[r] = 0;
        inc_comp_[r] = cid;
        inc_nonbip_prefix_[r] = (r < nb && !block_bip_[r]) ? 1 : 0;
        q.push_back(r);
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            for (int y : inc_adj_[x]) {
                if (inc_parent_[y] != -2) continue;
                inc_parent_[y] = x;
                inc_depth_[y] = inc_depth_[x] + 1;
                inc_comp_[y] = cid;
                inc_nonbip_prefix_[y] =
                    inc_nonbip_prefix_[x] + ((y < nb && !block_bip_[y]) ? 1 : 0);
                q.push_back(y);
            }
        }
        ++cid;
    }
}

Parity BlockAnalyzer::parity(int u, int v) const {
    if (vis_[u] != epoch_ || vis_[v] != epoch_) return Parity::Disconnected;
    if (comp_[u] != comp_[v]) return Parity::Disconnected;
    int a = node_of_vertex(u), b = node_of_vertex(v);
    int x = a, y = b;
    while (inc_depth_[x] > inc_depth_[y]) x = inc_parent_[x];
    while (inc_depth_[y] > inc_depth_[x]) y = inc_parent_[y];
    while (x != y) {
        x = inc_parent_[x];
        y = inc_parent_[y];
    }
    int lca = x;
    int nonbip = inc_nonbip_prefix_[a] + inc_nonbip_prefix_[b] - 2 * inc_nonbip_prefix_[lca] +
                 ((lca < block_count() && !block_bip_[lca]) ? 1 : 0);
    if (nonbip > 0) return Parity::Both;
    return (color_of(u) == color_of(v)) ? Parity::Even : Parity::Odd;
}

BlockCutTree block_cut_tree(const Graph& g, const VertexSet& subset) {
    BlockAnalyzer ba;
    ba.run(g, subset);
    BlockCutTree t;
    t.blocks.reserve(ba.block_count());
    t.block_cuts.resize(ba.block_count());
    for (int b = 0; b < ba.block_count(); ++b) {
        t.blocks.push_back(ba.block_vertices(b));
        for (int v : ba.block_vertices(b))
            if (ba.is_cut(v)) t.block_cuts[b].push_back(v);
    }
    t.cut_vertices = ba.cut_vertices();
    return t;
}

bool is_s_bipartite(const Graph& g, const VertexSet& subset, const VertexSet& s) {
    BlockAnalyzer ba;
    ba.run(g, subset);
    for (int b = 0; b < ba.block_count(); ++b)
        if (!ba.block_bipartite(b) && ba.block_meets(b, s)) return false;
    return true;
}

bool has_s_traversing_cycle(const Graph& g, const VertexSet& subset, const VertexSet& s) {
    BlockAnalyzer ba;
    ba.run(g, subset);
    for (int b = 0; b < ba.block_count(); ++b)
        if (ba.block_vertices(b).size() >= 3 && ba.block_meets(b, s)) return true;
    return false;
}

bool has_even_cycle(const Graph& g, const VertexSet& subset) {
    BlockAnalyzer ba;
    ba.run(g, subset);
    for (int b = 0; b < ba.block_count(); ++b) {
        const auto& vs = ba.block_vertices(b);
        if (vs.size() < 3) continue;
        if (vs.size() % 2 == 0) return true;
        // an odd block contains an even cycle unless it is a single induced cycle
        if (ba.block_edges(b).size() != vs.size()) return true;
    }
    return false;
}

ParityTable pair_parities(const Graph& g, const VertexSet& subset,
                          const std::vector<std::pair<int, int>>& pairs) {
    BlockAnalyzer ba;
    ba.run(g, subset);
    ParityTable t;
    for (auto [u, v] : pairs) {
        if (u == v) throw Error("parity pair with equal endpoints");
        int a = std::min(u, v), b = std::max(u, v);
        t[{a, b}] = ba.parity(a, b);
    }
    return t;
}

}  // namespace stw
