#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "stw/blocks.hpp"
#include "stw/decomposition.hpp"
#include "stw/graph.hpp"

namespace stw {

/// Which induced-subgraph property the table tracks. Soct keeps sets whose induced
/// graph has no odd cycle through S; Sfvs keeps sets with no cycle through S at all.
/// Sfvs signatures drop the bipartiteness flags and the parity table.
enum class DpMode { Soct, Sfvs };

DpMode mode_for(Problem p);
bool valid_partial(const LabeledInstance& inst, const VertexSet& x, DpMode mode);

/// The pruned block-cut forest of G[X] relative to a bag: inactive leaves removed
/// recursively, maximal chains of inactive degree-2 nodes contracted into single
/// edges. An edge carries flags of the union M of the blocks along its contracted
/// path, endpoints included.
struct AuxForest {
    struct Node {
        bool is_block = false;
        bool active = false;
        int cut_vertex = -1;            // active cut vertex only
        std::vector<int> bag_vertices;  // active block only, sorted
        bool s_flag = false;            // active block only
        bool bipartite_flag = true;     // active block only
    };
    struct Edge {
        int u = -1, v = -1;
        bool m_bipartite = true;
        bool m_meets_s = false;
    };
    std::vector<Node> nodes;
    std::vector<Edge> edges;
};

/// Canonical equivalence key of a partial solution at a bag: the boundary set, a
/// canonical code of the labeled aux forest, and (Soct mode) the table of
/// achievable path parities between boundary vertices.
struct Signature {
    std::string key;
    bool operator==(const Signature& o) const { return key == o.key; }
};

struct SignatureHash {
    size_t operator()(const Signature& s) const { return std::hash<std::string>()(s.key); }
};

AuxForest aux_forest(const LabeledInstance& inst, const VertexSet& x,
                     const VertexSet& bag);

Signature signature(const LabeledInstance& inst, const VertexSet& x,
                    const VertexSet& bag, DpMode mode);

struct PartialSolution {
    VertexSet vertices;
    Weight weight = 0;
};

/// One maximum-weight representative per signature class. Ties broken toward the
/// lexicographically smallest vertex set.
struct ReducedSet {
    std::unordered_map<Signature, PartialSolution, SignatureHash> by_class;

    size_t size() const { return by_class.size(); }
    void offer(Signature sig, PartialSolution sol);
};

ReducedSet reduce_set(const LabeledInstance& inst,
                      const std::vector<VertexSet>& candidates, const VertexSet& bag,
                      DpMode mode);

/// Observer invoked when a candidate loses to (or displaces) an equivalent stored
/// solution during a reduce; used to harvest equal-signature pairs for testing.
struct EquivalencePairSink {
    virtual ~EquivalencePairSink() = default;
    virtual void pair(const VertexSet& kept, const VertexSet& dropped,
                      const VertexSet& bag) = 0;
};

struct SolveStats {
    long long dp_nodes = 0;
    long long max_classes_per_entry = 0;
    long long max_classes_per_bag = 0;
    long long candidates_reduced = 0;
    double wall_seconds = 0.0;
};

struct SolveResult {
    bool infeasible = false;  // forced-keep vertices admit no valid induced graph
    Weight max_weight = 0;    // weight of the kept set
    VertexSet kept;
    Weight deletion_weight = 0;
    VertexSet deletion_set;
    bool feasible_within_budget = true;
    SolveStats stats;
};

struct SolveOptions {
    int threads = 1;
    EquivalencePairSink* pair_sink = nullptr;
};

/// Table row for one (node, boundary subset) entry.
using DpTable = std::unordered_map<uint64_t, ReducedSet>;  // key: subset mask of bag

/// Computes the table of one nice-decomposition node from its children's tables.
/// Exposed for tests; solve_* drives it over a postorder traversal.
DpTable dp_step(const LabeledInstance& inst, const NiceTreeDecomposition& ntd,
                int node, const DpTable* child1, const DpTable* child2, DpMode mode,
                const SolveOptions& opts = {}, SolveStats* stats = nullptr);

SolveResult solve_soct(const LabeledInstance& inst, const NiceTreeDecomposition& ntd,
                       const SolveOptions& opts = {});
SolveResult solve_sfvs(const LabeledInstance& inst, const NiceTreeDecomposition& ntd,
                       const SolveOptions& opts = {});

}  // namespace stw
