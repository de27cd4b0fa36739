#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stw/dp.hpp"
#include "stw/graph.hpp"

namespace stw {

/// Hard ceilings for the subset enumerations; brute_solve refuses larger inputs.
struct OracleLimits {
    int max_vertices = 14;  // vertex-deletion problems
    int max_edges = 18;     // edge-deletion problems
};

struct OracleResult {
    bool feasible = false;
    Weight optimum_weight = 0;
    VertexSet deletion_vertices;                     // vertex problems
    std::vector<std::pair<int, int>> deletion_edges; // edge problems
    long long optimal_count = 0;
};

/// True iff the kept vertex set satisfies the instance's vertex-problem property.
bool vertex_solution_ok(const LabeledInstance& inst, const VertexSet& kept);

/// True iff the graph minus the given edges satisfies the edge-problem property.
bool edge_solution_ok(const LabeledInstance& inst,
                      const std::vector<std::pair<int, int>>& deleted);

/// Exact optimum by exhaustive enumeration, increasing cardinality then
/// lexicographic, with weight pruning. Respects forced_keep, terminals (NMC) and
/// undeletable S-edges (RESFES).
OracleResult brute_solve(const LabeledInstance& inst, const OracleLimits& limits = {});

/// Exhaustive budget-capped search for SFVS and NMC: repeatedly finds a violated
/// obstruction (an S-traversing cycle, or a terminal-terminal path) and branches on
/// deleting each of its deletable vertices. Decides "does a deletion set of size at
/// most cap exist" exactly, at sizes where full subset enumeration is out of reach.
bool decide_within_budget(const LabeledInstance& inst, int cap);

struct CompletionContext {
    VertexSet bag;
    VertexSet gt_vertices;  // vertices of the processed subgraph; completions avoid it
};

struct CompletionReport {
    bool pass = true;
    int failing_trial = -1;
    std::string detail;
};

/// Samples random completions glued onto the boundary and checks that the validity
/// of X-union-completion and Y-union-completion always agree. X and Y must share a
/// signature unless require_equal_signatures is false.
CompletionReport completion_consistency(const LabeledInstance& inst, const VertexSet& x,
                                        const VertexSet& y, const CompletionContext& ctx,
                                        int trials, uint64_t seed,
                                        DpMode mode = DpMode::Soct,
                                        bool require_equal_signatures = true);

}  // namespace stw
