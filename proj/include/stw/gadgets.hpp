#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stw/decomposition.hpp"
#include "stw/graph.hpp"

namespace stw {

enum class GridVariant {
    IndependentSet,
    PermutationIndependentSet,
    Clique,
    PermutationClique
};

std::string grid_variant_name(GridVariant v);
std::optional<GridVariant> grid_variant_from_name(const std::string& s);

/// A k-by-k grid problem: find k cells, one per column (and one per row for the
/// permutation variants), forming an independent set or a clique. Cells are encoded
/// as row * k + column, 0-indexed.
struct GridProblemInstance {
    int k = 0;
    GridVariant variant = GridVariant::IndependentSet;
    std::vector<std::pair<int, int>> edges;  // cell pairs, normalized u < v, sorted
    std::optional<std::vector<int>> planted; // planted[column] = row

    int cell(int row, int col) const { return row * k + col; }
    int row_of(int c) const { return c / k; }
    int col_of(int c) const { return c % k; }
};

/// Seeded random grid instance. With plant=true a solution is chosen first and the
/// generator never emits an edge that would break it (IS variants) and always emits
/// the edges that realize it (clique variants). Permutation-clique instances never
/// carry an edge inside one row.
GridProblemInstance gen_grid_instance(int k, int edge_count, GridVariant variant,
                                      uint64_t seed, bool plant);

/// Exhaustive check whether the grid instance has a solution (k small).
bool grid_has_solution(const GridProblemInstance& h);

/// Vertex addressing of the selector/edge/propagation construction, kept so the
/// path-decomposition witness can be produced after the fact.
struct GenericLayout {
    int k = 0, m = 0;
    int col_variant = 1, row_variant = 1, edge_variant = 1, prop_variant = 1;
    std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> edge_cells;
    // ids
    std::vector<std::vector<std::vector<int>>> col_sel;  // [p][j]
    std::vector<std::vector<std::vector<int>>> row_sel;  // [p][i]
    std::vector<std::vector<int>> edge_gadget;           // [p]
    std::vector<std::vector<int>> prop_r;                // [p][i]
    std::vector<std::vector<int>> prop_c;                // [p][j]
    std::vector<int> prop_hub;                           // [p]
    std::vector<std::vector<std::vector<int>>> prop_w;   // [p][i][j] (subdivided rows)
    std::vector<std::vector<int>> prop_cprime;           // [p][j]

    int base(int p, int i, int j, int z) const {
        return p * 2 * k * k + (i * k + j) * 2 + z;
    }
};

/// A weighted edge of the multiway-cut construction before expansion into parallel
/// 2-edge paths. mids_start indexes the first internal path vertex.
struct MwcWeightedEdge {
    int u = -1, v = -1;
    Weight w = 0;
    int mids_start = -1;
};

struct MwcLayout {
    int k = 0;
    int copies = 0;     // mu + k^2
    Weight mu = 0, delta = 0, m = 0, h = 0;
    std::vector<MwcWeightedEdge> wedges;
    std::vector<int> r, c;  // terminal rows, column hubs
    int t = -1;
    int base(int p, int i, int j) const { return p * k * k + i * k + j; }
};

struct GeneratedInstance {
    LabeledInstance instance;
    Weight budget = 0;  // k'
    std::optional<VertexSet> planted_deletion;
    std::optional<std::vector<std::pair<int, int>>> planted_edge_deletion;
    std::optional<TreeDecomposition> witness_pd;
    // metadata
    Problem problem = Problem::Sfvs;
    int k = 0;
    long long m = 0;  // copies for the generic/NMC base; k^2 * maxdeg for MWC
    std::string gadget_variants;
    double width_constant = 0.0;  // witness max bag size divided by k
    std::string notes;
    std::optional<GenericLayout> generic_layout;
    std::optional<MwcLayout> mwc_layout;
};

/// Selector/edge/propagation construction over m copies of the doubled grid, with
/// the gadget variants the given problem needs. Requires a permutation-IS source.
GeneratedInstance construct_lb_instance(Problem problem, const GridProblemInstance& h);

/// Multiway-cut-style construction with shared terminals; requires an IS source.
GeneratedInstance construct_nmc_lb(const GridProblemInstance& h);

/// Edge-deletion construction from a permutation-clique source with weighted edges
/// expanded into parallel 2-edge paths and degree-equalizer gadgets.
GeneratedInstance construct_mwc_lb(const GridProblemInstance& h);

/// The explicit bag schedule witnessing pathwidth O(k) for construct_lb_instance
/// outputs. Fails for other construction kinds.
TreeDecomposition witness_path_decomposition(const GeneratedInstance& gen);

enum class GadgetKind { ColumnSelector, RowSelector, EdgeGadget, Propagation };

struct GadgetCheck {
    bool pass = false;
    std::string detail;
};

/// Standalone verification of one gadget family: column selectors are checked by
/// exhaustive (2k-2)-subset enumeration against the k expected legal deletions; the
/// other families are checked to be obstructions for every applicable index choice.
GadgetCheck verify_gadget(GadgetKind kind, int variant, int k, Problem problem);

}  // namespace stw
