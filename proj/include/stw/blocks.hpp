#pragma once

#include <map>
#include <utility>
#include <vector>

#include "stw/graph.hpp"

namespace stw {

/// Blocks (maximal 2-connected subgraphs) and cut vertices of an induced subgraph,
/// with the bipartite incidence forest between them. Isolated vertices are singleton
/// blocks; blocks are ordered by their sorted vertex lists.
struct BlockCutTree {
    std::vector<std::vector<int>> blocks;        // sorted vertex lists
    std::vector<int> cut_vertices;               // sorted
    std::vector<std::vector<int>> block_cuts;    // per block: its cut vertices, sorted

    int block_count() const { return int(blocks.size()); }
};

enum class Parity : uint8_t { Disconnected, Even, Odd, Both };

char parity_char(Parity p);

/// Achievable path parities for unordered vertex pairs.
using ParityTable = std::map<std::pair<int, int>, Parity>;

/// One-pass decomposition of G[subset] into blocks and cut vertices, with per-block
/// bipartiteness, a 2-coloring of the union of the bipartite blocks, and the rooted
/// incidence forest used for path-parity queries. Reusable across calls; arrays are
/// sized to the largest graph seen.
class BlockAnalyzer {
public:
    BlockAnalyzer() = default;

    void run(const Graph& g, const VertexSet& subset);

    int block_count() const { return int(block_verts_.size()); }
    const std::vector<int>& block_vertices(int b) const { return block_verts_[b]; }
    const std::vector<std::pair<int, int>>& block_edges(int b) const { return block_edges_[b]; }
    bool block_bipartite(int b) const { return block_bip_[b]; }

    bool is_cut(int v) const { return cut_mark_[v] == epoch_; }
    const std::vector<int>& cut_vertices() const { return cuts_; }

    bool in_subset(int v) const { return vis_[v] == epoch_; }
    int component_of(int v) const { return comp_[v]; }
    /// Color in the 2-coloring of the union of bipartite blocks; -1 when v has no
    /// incident bipartite-block edge.
    int color_of(int v) const { return color_stamp_[v] == epoch_ ? color_[v] : -1; }

    // Incidence forest node ids: blocks are [0, B), cut vertices follow.
    int node_of_block(int b) const { return b; }
    int node_of_cut(int v) const { return cut_node_[v]; }
    /// Node holding vertex v: its cut node, or the unique block containing it.
    int node_of_vertex(int v) const;
    const std::vector<std::vector<int>>& inc_adjacency() const { return inc_adj_; }
    bool node_is_block(int node) const { return node < block_count(); }
    /// For a cut node, the underlying vertex id.
    int node_cut_vertex(int node) const { return node_cut_vertex_[node]; }

    /// Achievable parities of paths between u and v in the analyzed subgraph.
    Parity parity(int u, int v) const;

    bool block_meets(int b, const VertexSet& s) const {
        for (int v : block_verts_[b])
            if (s.contains(v)) return true;
        return false;
    }

private:
    void ensure_capacity(int n);
    void build_inc_forest();

    // per-vertex workspace, epoch-stamped
    std::vector<int> vis_, disc_, low_, comp_, cut_mark_, color_, color_stamp_;
    std::vector<int> cut_node_, home_block_;
    int epoch_ = 0;

    std::vector<std::vector<int>> block_verts_;
    std::vector<std::vector<std::pair<int, int>>> block_edges_;
    std::vector<char> block_bip_;
    std::vector<int> cuts_;

    std::vector<std::vector<int>> inc_adj_;
    std::vector<int> node_cut_vertex_;
    std::vector<int> inc_parent_, inc_depth_, inc_nonbip_prefix_, inc_comp_;
};

BlockCutTree block_cut_tree(const Graph& g, const VertexSet& subset);

/// True iff every block of G[subset] either avoids s or is bipartite, i.e. the
/// induced subgraph has no odd cycle through s.
bool is_s_bipartite(const Graph& g, const VertexSet& subset, const VertexSet& s);

/// True iff some block of G[subset] with at least 3 vertices contains a vertex of s,
/// i.e. the induced subgraph has a cycle through s.
bool has_s_traversing_cycle(const Graph& g, const VertexSet& subset, const VertexSet& s);

/// True iff G[subset] contains an even cycle. A block contains one exactly when it
/// has at least 3 vertices and is not a single odd induced cycle (a 2-connected
/// graph that is not a cycle contains a theta subgraph, and a theta subgraph always
/// carries an even cycle).
bool has_even_cycle(const Graph& g, const VertexSet& subset);

ParityTable pair_parities(const Graph& g, const VertexSet& subset,
                          const std::vector<std::pair<int, int>>& pairs);

}  // namespace stw
