#pragma once

#include <utility>
#include <vector>

#include "stw/decomposition.hpp"
#include "stw/dp.hpp"
#include "stw/graph.hpp"

namespace stw {

/// Maps vertices of a reduced instance back to the entities of the source problem.
struct ReductionTrace {
    enum class Origin : uint8_t { Original, Subdivision, Apex };
    struct Entry {
        Origin origin = Origin::Original;
        int source_vertex = -1;                  // Original
        std::pair<int, int> source_edge{-1, -1}; // Subdivision
    };
    std::vector<Entry> map;  // indexed by reduced-instance vertex
};

struct ReducedInstance {
    LabeledInstance instance;
    ReductionTrace trace;
};

/// Node multiway cut as weighted subset-FVS: a new undeletable vertex adjacent to
/// all terminals becomes the only S-vertex; terminals become undeletable.
ReducedInstance nmc_to_wsfvs(const LabeledInstance& src);

/// Restricted edge-subset feedback edge set as weighted subset-FVS: subdivide every
/// edge; the subdivision vertices of the marked edges form S; original vertices and
/// S stay undeletable. Edge weights are unit, so each deletable subdivision vertex
/// has weight 1.
ReducedInstance resfes_to_wsfvs(const LabeledInstance& src);

/// Multiway cut via an apex vertex whose incident edges become the undeletable edge
/// set of an intermediate restricted instance, then subdivision as above.
ReducedInstance mwc_to_wsfvs(const LabeledInstance& src);

/// Source decomposition transformed for the reduced instance: the apex joins every
/// bag; each subdivision vertex gets a fresh bag {u, v_e, v} hung off a bag covering
/// its edge.
TreeDecomposition transfer_td(const LabeledInstance& src, const TreeDecomposition& td,
                              Problem problem);

struct ReductionSolveResult {
    bool infeasible = false;
    Weight optimum_weight = 0;
    VertexSet deleted_vertices;                      // NMC
    std::vector<std::pair<int, int>> deleted_edges;  // RESFES / MWC
    bool feasible_within_budget = true;
    int width_used = -1;
    SolveStats stats;
};

/// Runs the matching reduction, decomposes (transforming a supplied source
/// decomposition when given), solves the subset-FVS instance and pulls the deletion
/// set back to the source vocabulary.
ReductionSolveResult solve_via_reduction(const LabeledInstance& src,
                                         const TreeDecomposition* source_td = nullptr,
                                         const SolveOptions& opts = {});

}  // namespace stw
