#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stw/graph.hpp"

namespace stw {

/// A tree decomposition: a tree of bags satisfying the usual three axioms
/// (all vertices covered, all edges covered, connected occurrence sets).
struct TreeDecomposition {
    int node_count = 0;
    int graph_n = 0;
    std::vector<std::vector<int>> bags;          // sorted vertex lists
    std::vector<std::pair<int, int>> tree_edges;

    int width() const {
        int w = -1;
        for (const auto& b : bags) w = std::max(w, int(b.size()) - 1);
        return w;
    }
};

struct TdViolation {
    enum Kind { VertexUncovered, EdgeUncovered, OccurrencesDisconnected } kind;
    int a = -1, b = -1;  // witness: vertex, or edge endpoints
    std::string to_string() const;
};

/// Parses the PACE 2017 .td format ("s td <bags> <width+1> <n>", "b <id> <verts>",
/// tree edges, 'c' comments). Vertices are 1-indexed on disk; throws Error with the
/// offending line number on malformed input, including a non-tree edge set.
TreeDecomposition load_td(const std::string& text);
std::string serialize_td(const TreeDecomposition& td);

/// Checks the three axioms; returns the first violation found, or nullopt when valid.
std::optional<TdViolation> validate_td(const Graph& g, const TreeDecomposition& td);

/// Elimination-order heuristic decomposition: runs min-fill and min-degree and keeps
/// the smaller width. Always valid; no approximation guarantee.
TreeDecomposition heuristic_td(const Graph& g);

enum class NodeKind : uint8_t { Leaf, Introduce, Forget, Join };

/// Rooted decomposition with only leaf / introduce / forget / join nodes, empty leaf
/// bags and an empty root bag.
struct NiceTreeDecomposition {
    struct Node {
        NodeKind kind = NodeKind::Leaf;
        int vertex = -1;          // introduced / forgotten vertex
        int child1 = -1, child2 = -1;
        std::vector<int> bag;     // sorted
    };
    std::vector<Node> nodes;
    int root = -1;
    int graph_n = 0;

    int width() const {
        int w = -1;
        for (const auto& nd : nodes) w = std::max(w, int(nd.bag.size()) - 1);
        return w;
    }
    /// Nodes in children-before-parent order.
    std::vector<int> postorder() const;
};

/// Turns a valid decomposition into a nice one of the same width. The root is the
/// minimum-id node; child bags are converted by forgetting then introducing in
/// ascending vertex order, every original bag is materialized (multiple children
/// and same-bag chains meet at join nodes), and trailing forgets empty the root bag.
NiceTreeDecomposition nicify(const TreeDecomposition& td, const Graph& g);

/// Structural sanity check of a nice decomposition plus the three axioms.
void check_nice_td(const NiceTreeDecomposition& ntd, const Graph& g);

}  // namespace stw
