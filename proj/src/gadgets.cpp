#include "stw/gadgets.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "stw/blocks.hpp"

namespace stw {

std::string grid_variant_name(GridVariant v) {
    switch (v) {
        case GridVariant::IndependentSet: return "independent-set";
        case GridVariant::PermutationIndependentSet: return "permutation-independent-set";
        case GridVariant::Clique: return "clique";
        case GridVariant::PermutationClique: return "permutation-clique";
    }
    return "?";
}

std::optional<GridVariant> grid_variant_from_name(const std::string& s) {
    if (s == "independent-set" || s == "is") return GridVariant::IndependentSet;
    if (s == "permutation-independent-set" || s == "pis")
        return GridVariant::PermutationIndependentSet;
    if (s == "clique") return GridVariant::Clique;
    if (s == "permutation-clique" || s == "pclique") return GridVariant::PermutationClique;
    return std::nullopt;
}

namespace {

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(uint64_t seed) : eng(seed) {}
    uint64_t next() { return eng(); }
    int below(int bound) { return bound <= 1 ? 0 : int(next() % uint64_t(bound)); }
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (int i = int(v.size()) - 1; i > 0; --i) std::swap(v[i], v[below(i + 1)]);
    }
};

bool is_clique_variant(GridVariant v) {
    return v == GridVariant::Clique || v == GridVariant::PermutationClique;
}
bool is_permutation_variant(GridVariant v) {
    return v == GridVariant::PermutationIndependentSet ||
           v == GridVariant::PermutationClique;
}

}  // namespace

GridProblemInstance gen_grid_instance(int k, int edge_count, GridVariant variant,
                                      uint64_t seed, bool plant) {
    if (k < 2) throw Error("gen_grid_instance: k must be at least 2");
    GridProblemInstance h;
    h.k = k;
    h.variant = variant;
    Rng rng(seed);

    std::vector<int> planted_rows;
    if (plant) {
        if (is_permutation_variant(variant)) {
            planted_rows.resize(k);
            std::iota(planted_rows.begin(), planted_rows.end(), 0);
            rng.shuffle(planted_rows);
        } else {
            for (int j = 0; j < k; ++j) planted_rows.push_back(rng.below(k));
        }
    }

    std::vector<std::pair<int, int>> forced, allowed;
    auto planted_cell = [&](int c) {
        return plant && planted_rows[h.col_of(c)] == h.row_of(c);
    };
    const int cells = k * k;
    for (int a = 0; a < cells; ++a) {
        for (int b = a + 1; b < cells; ++b) {
            if (variant == GridVariant::PermutationClique && h.row_of(a) == h.row_of(b))
                continue;  // same-row edges never emitted for permutation-clique
            bool both_planted = planted_cell(a) && planted_cell(b);
            if (both_planted) {
                if (is_clique_variant(variant)) forced.emplace_back(a, b);
                // IS variants: never emitted
            } else {
                allowed.emplace_back(a, b);
            }
        }
    }

    if (edge_count < int(forced.size()) ||
        edge_count > int(forced.size() + allowed.size()))
        throw Error("gen_grid_instance: edge_count " + std::to_string(edge_count) +
                    " out of range [" + std::to_string(forced.size()) + ", " +
                    std::to_string(forced.size() + allowed.size()) + "]");

    rng.shuffle(allowed);
    std::vector<std::pair<int, int>> edges = forced;
    for (int i = 0; i < edge_count - int(forced.size()); ++i) edges.push_back(allowed[i]);
    std::sort(edges.begin(), edges.end());
    h.edges = std::move(edges);
    if (plant) h.planted = planted_rows;
    return h;
}

bool grid_has_solution(const GridProblemInstance& h) {
    const int k = h.k;
    auto adjacent = [&](int a, int b) {
        auto e = std::minmax({a, b});
        return std::binary_search(h.edges.begin(), h.edges.end(),
                                  std::make_pair(e.first, e.second));
    };
    std::vector<int> rows(k, 0);
    bool permutation = is_permutation_variant(h.variant);
    bool clique = is_clique_variant(h.variant);
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    auto feasible = [&](const std::vector<int>& choice) {
        for (int a = 0; a < k; ++a)
            for (int b = a + 1; b < k; ++b) {
                bool adj = adjacent(h.cell(choice[a], a), h.cell(choice[b], b));
                if (clique != adj) return false;
            }
        return true;
    };
    if (permutation) {
        do {
            if (feasible(perm)) return true;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return false;
    }
    // one row per column, rows may repeat
    while (true) {
        if (feasible(rows)) return true;
        int j = 0;
        while (j < k && ++rows[j] == k) rows[j++] = 0;
        if (j == k) return false;
    }
}

namespace {

struct Builder {
    int next_id = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> s_list;

    int alloc(int count = 1) {
        int first = next_id;
        next_id += count;
        return first;
    }
    void edge(int u, int v) { edges.emplace_back(u, v); }
    void in_s(int v) { s_list.push_back(v); }

    LabeledInstance finish(Problem problem) {
        LabeledInstance inst(next_id);
        inst.problem = problem;
        for (auto [u, v] : edges) inst.graph.add_edge(u, v);
        for (int v : s_list) inst.s_vertices.insert(v);
        return inst;
    }
};

/// Column selector wiring on an existing column; ids per z-layer biclique rows,
/// mixed-layer vertices, and (variant 2) an extra biclique row plus subdivisions.
void wire_column_selector(Builder& b, int k, int variant,
                          const std::vector<std::vector<int>>& col,  // [i][z]
                          std::vector<int>& out_ids) {
    // intra-column: all pairs from different rows
    for (int i = 0; i < k; ++i)
        for (int i2 = i + 1; i2 < k; ++i2)
            for (int z = 0; z < 2; ++z)
                for (int z2 = 0; z2 < 2; ++z2) b.edge(col[i][z], col[i2][z2]);

    const int layer = (variant == 2) ? k + 1 : k;
    std::vector<int> dz0(layer), dz1(layer), dm(k), sub;
    for (int i = 0; i < layer; ++i) dz0[i] = b.alloc();
    for (int i = 0; i < layer; ++i) dz1[i] = b.alloc();
    for (int i = 0; i < k; ++i) dm[i] = b.alloc();
    if (variant == 2)
        for (int i = 0; i < k; ++i) sub.push_back(b.alloc());

    for (int i = 0; i < layer; ++i)
        for (int i2 = 0; i2 < k; ++i2) {
            b.edge(dz0[i], col[i2][0]);
            b.edge(dz1[i], col[i2][1]);
        }
    for (int i = 0; i < k; ++i) {
        if (variant == 2) {
            b.edge(dm[i], sub[i]);
            b.edge(sub[i], col[i][0]);
        } else {
            b.edge(dm[i], col[i][0]);
        }
        for (int i2 = 0; i2 < k; ++i2)
            if (i2 != i) b.edge(dm[i], col[i2][1]);
    }
    for (int v : dz0) b.in_s(v);
    for (int v : dz1) b.in_s(v);
    for (int v : dm) b.in_s(v);

    out_ids.clear();
    for (int v : dz0) out_ids.push_back(v);
    for (int v : dz1) out_ids.push_back(v);
    for (int v : dm) out_ids.push_back(v);
    for (int v : sub) out_ids.push_back(v);
}

void wire_row_selector(Builder& b, int variant,
                       const std::vector<int>& row_z1,  // z=1 side of the row
                       std::vector<int>& out_ids) {
    out_ids.clear();
    int count = (variant == 2) ? 3 : 2;
    for (int i = 0; i < count; ++i) out_ids.push_back(b.alloc());
    for (int v : out_ids)
        for (int u : row_z1) b.edge(v, u);
    if (variant == 2) {
        b.edge(out_ids[0], out_ids[2]);
        b.in_s(out_ids[1]);
    } else {
        b.in_s(out_ids[0]);
        b.in_s(out_ids[1]);
    }
}

void wire_edge_gadget(Builder& b, int variant, int end1, int end2,
                      std::vector<int>& out_ids) {
    out_ids.clear();
    b.edge(end1, end2);
    int sp = b.alloc();
    out_ids.push_back(sp);
    b.in_s(sp);
    b.edge(sp, end1);
    if (variant == 2) {
        int sub = b.alloc();
        out_ids.push_back(sub);
        b.edge(sp, sub);
        b.edge(sub, end2);
    } else {
        b.edge(sp, end2);
    }
}

}  // namespace

GeneratedInstance construct_lb_instance(Problem problem, const GridProblemInstance& h) {
    int cv, rv, ev, pv;
    switch (problem) {
        case Problem::Sfvs: cv = 1; rv = 1; ev = 1; pv = 1; break;
        case Problem::Soct: cv = 1; rv = 2; ev = 1; pv = 2; break;
        case Problem::Ect: cv = 2; rv = 1; ev = 2; pv = 3; break;
        default:
            throw Error("construct_lb_instance: unsupported problem " + problem_name(problem));
    }
    if (h.variant != GridVariant::PermutationIndependentSet)
        throw Error("construct_lb_instance: source must be a permutation-independent-set instance");
    const int k = h.k;
    const int m = int(h.edges.size());
    if (m == 0) throw Error("construct_lb_instance: source instance has no edges");

    GenericLayout lay;
    lay.k = k;
    lay.m = m;
    lay.col_variant = cv;
    lay.row_variant = rv;
    lay.edge_variant = ev;
    lay.prop_variant = pv;

    Builder b;
    b.alloc(2 * k * k * m);  // base vertices, copy-major then row, column, z

    lay.col_sel.assign(m, std::vector<std::vector<int>>(k));
    lay.row_sel.assign(m, std::vector<std::vector<int>>(k));
    lay.edge_gadget.assign(m, {});
    lay.edge_cells.resize(m);
    if (m > 1) {
        lay.prop_r.assign(m - 1, std::vector<int>(k));
        lay.prop_c.assign(m - 1, std::vector<int>(k));
        lay.prop_hub.assign(m - 1, -1);
        if (pv >= 2) lay.prop_w.assign(m - 1, std::vector<std::vector<int>>(k, std::vector<int>(k)));
        if (pv >= 3) lay.prop_cprime.assign(m - 1, std::vector<int>(k));
    }

    for (int p = 0; p < m; ++p) {
        for (int j = 0; j < k; ++j) {
            std::vector<std::vector<int>> col(k, std::vector<int>(2));
            for (int i = 0; i < k; ++i)
                for (int z = 0; z < 2; ++z) col[i][z] = lay.base(p, i, j, z);
            wire_column_selector(b, k, cv, col, lay.col_sel[p][j]);
        }
        for (int i = 0; i < k; ++i) {
            std::vector<int> row;
            for (int j = 0; j < k; ++j) row.push_back(lay.base(p, i, j, 0));
            wire_row_selector(b, rv, row, lay.row_sel[p][i]);
        }
        auto [c1, c2] = h.edges[p];
        std::pair<int, int> cell1{h.row_of(c1), h.col_of(c1)};
        std::pair<int, int> cell2{h.row_of(c2), h.col_of(c2)};
        lay.edge_cells[p] = {cell1, cell2};
        wire_edge_gadget(b, ev, lay.base(p, cell1.first, cell1.second, 0),
                         lay.base(p, cell2.first, cell2.second, 0), lay.edge_gadget[p]);
        if (p + 1 < m) {
            for (int i = 0; i < k; ++i) lay.prop_r[p][i] = b.alloc();
            for (int j = 0; j < k; ++j) lay.prop_c[p][j] = b.alloc();
            lay.prop_hub[p] = b.alloc();
            b.in_s(lay.prop_hub[p]);
            if (pv >= 2)
                for (int i = 0; i < k; ++i)
                    for (int j = 0; j < k; ++j) lay.prop_w[p][i][j] = b.alloc();
            if (pv >= 3)
                for (int j = 0; j < k; ++j) lay.prop_cprime[p][j] = b.alloc();

            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) {
                    if (pv >= 2) {
                        b.edge(lay.prop_r[p][i], lay.prop_w[p][i][j]);
                        b.edge(lay.prop_w[p][i][j], lay.base(p, i, j, 1));
                    } else {
                        b.edge(lay.prop_r[p][i], lay.base(p, i, j, 1));
                    }
                    b.edge(lay.prop_r[p][i], lay.base(p + 1, i, j, 0));
                    b.edge(lay.prop_c[p][j], lay.base(p, i, j, 1));
                    b.edge(lay.prop_c[p][j], lay.base(p + 1, i, j, 0));
                }
            for (int j = 0; j < k; ++j) {
                b.edge(lay.prop_hub[p], lay.prop_c[p][j]);
                if (pv >= 3) {
                    b.edge(lay.prop_cprime[p][j], lay.prop_c[p][j]);
                    b.edge(lay.prop_cprime[p][j], lay.prop_hub[p]);
                }
            }
        }
    }

    GeneratedInstance out;
    out.instance = b.finish(problem);
    out.problem = problem;
    out.k = k;
    out.m = m;
    out.budget = Weight(2) * (k - 1) * k * m;
    out.instance.budget = out.budget;
    {
        std::ostringstream os;
        os << "C" << cv << ",R" << rv << ",E" << ev << ",P" << pv;
        out.gadget_variants = os.str();
    }
    if (problem == Problem::Ect)
        out.notes = "no table-based solver exists for this problem kind; verify with the "
                    "brute-force oracle only";

    if (h.planted) {
        VertexSet del(out.instance.n());
        for (int p = 0; p < m; ++p)
            for (int j = 0; j < k; ++j)
                for (int i = 0; i < k; ++i) {
                    if (i == (*h.planted)[j]) continue;
                    del.insert(lay.base(p, i, j, 0));
                    del.insert(lay.base(p, i, j, 1));
                }
        out.planted_deletion = del;
    }
    out.generic_layout = std::move(lay);
    TreeDecomposition pd = witness_path_decomposition(out);
    int maxbag = 0;
    for (const auto& bag : pd.bags) maxbag = std::max(maxbag, int(bag.size()));
    out.width_constant = double(maxbag) / k;
    out.witness_pd = std::move(pd);
    return out;
}

GeneratedInstance construct_nmc_lb(const GridProblemInstance& h) {
    if (h.variant != GridVariant::IndependentSet)
        throw Error("construct_nmc_lb: source must be an independent-set instance");
    const int k = h.k;
    const int m = int(h.edges.size());
    if (m == 0) throw Error("construct_nmc_lb: source instance has no edges");

    auto base = [&](int p, int i, int j, int z) {
        return p * 2 * k * k + (i * k + j) * 2 + z;
    };
    Builder b;
    b.alloc(2 * k * k * m);
    const int t = b.alloc();
    const int t2 = b.alloc();
    std::vector<int> r(k), c(k);
    for (int i = 0; i < k; ++i) r[i] = b.alloc();
    for (int j = 0; j < k; ++j) c[j] = b.alloc();

    std::vector<char> touches_t(2 * k * k * m, 0);
    for (int p = 0; p < m; ++p) {
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < k; ++i)
                for (int i2 = i + 1; i2 < k; ++i2)
                    for (int z = 0; z < 2; ++z)
                        for (int z2 = 0; z2 < 2; ++z2)
                            b.edge(base(p, i, j, z), base(p, i2, j, z2));
        auto [c1, c2] = h.edges[p];
        int u = base(p, h.row_of(c1), h.col_of(c1), 1);
        int v = base(p, h.row_of(c2), h.col_of(c2), 1);
        b.edge(u, v);
        b.edge(t, u);
        b.edge(t2, v);
        touches_t[u] = touches_t[v] = 1;
    }
    for (int p = 0; p < m; ++p)
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                for (int z = 0; z < 2; ++z) {
                    int v = base(p, i, j, z);
                    if (!touches_t[v]) b.edge(r[i], v);
                }
    // one hub per column, adjacent to the first layer of that column in every copy
    for (int p = 0; p < m; ++p)
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < k; ++i) b.edge(c[j], base(p, i, j, 0));

    GeneratedInstance out;
    out.instance = b.finish(Problem::Nmc);
    out.instance.terminals.insert(t);
    out.instance.terminals.insert(t2);
    for (int i = 0; i < k; ++i) out.instance.terminals.insert(r[i]);
    out.problem = Problem::Nmc;
    out.k = k;
    out.m = m;
    out.budget = Weight(2) * (k - 1) * k * m;
    out.instance.budget = out.budget;
    out.gadget_variants = "communal";
    if (h.planted) {
        VertexSet del(out.instance.n());
        for (int p = 0; p < m; ++p)
            for (int j = 0; j < k; ++j)
                for (int i = 0; i < k; ++i) {
                    if (i == (*h.planted)[j]) continue;
                    del.insert(base(p, i, j, 0));
                    del.insert(base(p, i, j, 1));
                }
        out.planted_deletion = del;
    }
    return out;
}

GeneratedInstance construct_mwc_lb(const GridProblemInstance& h) {
    if (h.variant != GridVariant::PermutationClique)
        throw Error("construct_mwc_lb: source must be a permutation-clique instance");
    const int k = h.k;
    for (auto [a, b] : h.edges)
        if (a / k == b / k)
            throw Error("construct_mwc_lb: source carries an edge inside one row");
    const long long mu = (long long)h.edges.size();
    if (mu == 0) throw Error("construct_mwc_lb: source instance has no edges");

    std::vector<int> deg(k * k, 0);
    for (auto [a, b] : h.edges) {
        ++deg[a];
        ++deg[b];
    }
    const long long delta = *std::max_element(deg.begin(), deg.end());
    const long long m = (long long)k * k * delta;
    const long long h_slack = 12 * m - k * delta - (long long)k * (k - 1) / 2;
    const int copies = int(mu) + k * k;
    const Weight kprime = (h_slack + 1) * (k - 1) * k * copies + h_slack;

    MwcLayout lay;
    lay.k = k;
    lay.copies = copies;
    lay.mu = mu;
    lay.delta = delta;
    lay.m = m;
    lay.h = h_slack;

    int next = copies * k * k;
    lay.r.resize(k);
    for (int i = 0; i < k; ++i) lay.r[i] = next++;
    lay.t = next++;
    lay.c.resize(k);
    for (int j = 0; j < k; ++j) lay.c[j] = next++;

    enum Role { RowLink, Hub, EOuterV1, EOuterR1, EOuterV2, EOuterR2, EPath1, ETri1,
                ETri2, EPath2, ETriChord, Anchor, EqT, EqV, EqR };
    struct WEdgeDef {
        int u, v;
        Weight w;
        int role;
        int p;       // gadget copy (edge gadgets / equalizers)
        int cell;    // cell id for row links and equalizers
    };
    std::vector<WEdgeDef> defs;

    for (int p = 0; p < copies; ++p)
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                defs.push_back({lay.r[i], lay.base(p, i, j), h_slack + 1, RowLink, p,
                                i * k + j});
    for (int p = 0; p < copies; ++p)
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < k; ++i)
                defs.push_back({lay.c[j], lay.base(p, i, j), kprime + 1, Hub, p, -1});

    struct EdgeGadgetIds { int e1, x, z, y, e2; };
    std::vector<EdgeGadgetIds> eg(mu);
    for (int p = 0; p < int(mu); ++p) {
        auto [a, bcell] = h.edges[p];
        int i1 = a / k, j1 = a % k, i2 = bcell / k, j2 = bcell % k;
        EdgeGadgetIds g{next, next + 1, next + 2, next + 3, next + 4};
        next += 5;
        eg[p] = g;
        defs.push_back({g.e1, g.x, 5, EPath1, p, -1});
        defs.push_back({g.x, g.z, 3, ETri1, p, -1});
        defs.push_back({g.z, g.y, 3, ETri2, p, -1});
        defs.push_back({g.y, g.e2, 5, EPath2, p, -1});
        defs.push_back({g.x, g.y, 3, ETriChord, p, -1});
        defs.push_back({g.e1, lay.base(p, i1, j1), 3, EOuterV1, p, -1});
        defs.push_back({g.e1, lay.r[i1], 3, EOuterR1, p, -1});
        defs.push_back({g.e2, lay.base(p, i2, j2), 3, EOuterV2, p, -1});
        defs.push_back({g.e2, lay.r[i2], 3, EOuterR2, p, -1});
        defs.push_back({g.z, lay.t, kprime + 1, Anchor, p, -1});
    }
    // degree equalizers on the trailing k^2 copies, one cell each
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < k; ++i) {
            int cell = i * k + j;
            long long d = delta - deg[cell];
            if (d == 0) continue;
            int p = int(mu) + i + j * k;
            int w = next++;
            defs.push_back({w, lay.t, 11 * d, EqT, p, cell});
            defs.push_back({w, lay.base(p, i, j), 6 * d, EqV, p, cell});
            defs.push_back({w, lay.r[i], 6 * d, EqR, p, cell});
        }

    // expand weighted edges into parallel 2-edge paths
    lay.wedges.reserve(defs.size());
    long long total_mids = 0;
    for (const auto& s : defs) total_mids += s.w;
    const int anchor_count = next;
    LabeledInstance inst(int(anchor_count + total_mids));
    inst.problem = Problem::Mwc;
    int mid = anchor_count;
    for (const auto& s : defs) {
        MwcWeightedEdge we{s.u, s.v, s.w, mid};
        for (Weight i = 0; i < s.w; ++i) {
            inst.graph.add_edge(s.u, mid);
            inst.graph.add_edge(mid, s.v);
            ++mid;
        }
        lay.wedges.push_back(we);
    }
    inst.terminals = VertexSet(inst.n());
    for (int i = 0; i < k; ++i) inst.terminals.insert(lay.r[i]);
    inst.terminals.insert(lay.t);
    inst.budget = kprime;

    GeneratedInstance out;
    out.instance = std::move(inst);
    out.problem = Problem::Mwc;
    out.k = k;
    out.m = m;
    out.budget = kprime;
    out.gadget_variants = "weighted-paths";

    if (h.planted) {
        const auto& rows = *h.planted;
        auto in_c = [&](int cell) { return rows[cell % k] == cell / k; };
        std::vector<char> drop(defs.size(), 0);
        for (size_t i = 0; i < defs.size(); ++i) {
            const auto& s = defs[i];
            switch (s.role) {
                case RowLink: drop[i] = !in_c(s.cell); break;
                case EqT: drop[i] = in_c(s.cell); break;
                case EqV:
                case EqR: drop[i] = !in_c(s.cell); break;
                default: break;
            }
        }
        for (int p = 0; p < int(mu); ++p) {
            auto [a, bcell] = h.edges[p];
            int hits = int(in_c(a)) + int(in_c(bcell));
            auto mark = [&](int role) {
                for (size_t i = 0; i < defs.size(); ++i)
                    if (defs[i].role == role && defs[i].p == p) drop[i] = 1;
            };
            if (hits == 0) {
                mark(EOuterV1);
                mark(EOuterR1);
                mark(EOuterV2);
                mark(EOuterR2);
            } else if (hits == 2) {
                mark(ETri1);
                mark(ETri2);
                mark(ETriChord);
            } else if (in_c(a)) {
                mark(EPath1);
                mark(EOuterV2);
                mark(EOuterR2);
            } else {
                mark(EPath2);
                mark(EOuterV1);
                mark(EOuterR1);
            }
        }
        Weight menu = 0;
        for (size_t i = 0; i < defs.size(); ++i)
            if (drop[i]) menu += defs[i].w;
        Weight target = kprime - menu;
        if (target < 0) throw Error("construct_mwc_lb: planted menu exceeds the budget");
        // The intended deletion leaves slack; fill it exactly with additional whole
        // weighted-edge deletions (still feasible: deleting more edges never
        // reconnects terminals). Exact subset sum over the remaining deletable edges.
        if (target > 0) {
            std::vector<int> pool;
            for (size_t i = 0; i < defs.size(); ++i)
                if (!drop[i] && defs[i].w <= target && defs[i].w != kprime + 1)
                    pool.push_back(int(i));
            std::vector<int> pick(size_t(target) + 1, -2);
            pick[0] = -1;
            for (int idx : pool) {
                Weight w = defs[idx].w;
                for (Weight t2 = target; t2 >= w; --t2)
                    if (pick[t2] == -2 && pick[t2 - w] != -2) pick[t2] = idx;
            }
            if (pick[target] == -2)
                throw Error("construct_mwc_lb: cannot pad planted deletion to the budget");
            Weight t2 = target;
            while (t2 > 0) {
                drop[pick[t2]] = 1;
                t2 -= defs[pick[t2]].w;
            }
        }
        std::vector<std::pair<int, int>> del;
        for (size_t i = 0; i < defs.size(); ++i) {
            if (!drop[i]) continue;
            const auto& we = lay.wedges[i];
            for (Weight q = 0; q < we.w; ++q) {
                int mv = we.mids_start + int(q);
                del.emplace_back(std::min(we.u, mv), std::max(we.u, mv));
            }
        }
        std::sort(del.begin(), del.end());
        out.planted_edge_deletion = std::move(del);
    }
    out.mwc_layout = std::move(lay);
    return out;
}

TreeDecomposition witness_path_decomposition(const GeneratedInstance& gen) {
    if (!gen.generic_layout)
        throw Error("witness_path_decomposition: only selector-based constructions "
                    "carry an explicit bag schedule");
    const GenericLayout& L = *gen.generic_layout;
    const int k = L.k, m = L.m;
    const int pv = L.prop_variant;

    auto column_vertices = [&](int p, int j) {
        std::vector<int> vs;
        for (int i = 0; i < k; ++i)
            for (int z = 0; z < 2; ++z) vs.push_back(L.base(p, i, j, z));
        for (int v : L.col_sel[p][j]) vs.push_back(v);
        return vs;
    };

    // Y_p: propagation skeleton after copy p, the edge gadget and its two columns,
    // and the row selectors of copy p.
    std::vector<std::vector<int>> Y(m);
    for (int p = 0; p < m; ++p) {
        std::vector<int> y;
        if (p + 1 < m) {
            for (int i = 0; i < k; ++i) y.push_back(L.prop_r[p][i]);
            for (int j = 0; j < k; ++j) y.push_back(L.prop_c[p][j]);
            y.push_back(L.prop_hub[p]);
        }
        for (int v : L.edge_gadget[p]) y.push_back(v);
        int j1 = L.edge_cells[p].first.second, j2 = L.edge_cells[p].second.second;
        for (int v : column_vertices(p, j1)) y.push_back(v);
        if (j2 != j1)
            for (int v : column_vertices(p, j2)) y.push_back(v);
        for (int i = 0; i < k; ++i)
            for (int v : L.row_sel[p][i]) y.push_back(v);
        std::sort(y.begin(), y.end());
        Y[p] = std::move(y);
    }

    TreeDecomposition pd;
    pd.graph_n = gen.instance.n();
    auto emit = [&](std::vector<int> bag) {
        std::sort(bag.begin(), bag.end());
        bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
        pd.bags.push_back(std::move(bag));
    };
    auto with_extra = [&](const std::vector<int>& base, int extra) {
        std::vector<int> b = base;
        b.push_back(extra);
        return b;
    };

    for (int p = 0; p < m; ++p) {
        std::vector<int> a = Y[p];
        if (p > 0) a.insert(a.end(), Y[p - 1].begin(), Y[p - 1].end());
        std::sort(a.begin(), a.end());
        emit(a);
        int j1 = L.edge_cells[p].first.second, j2 = L.edge_cells[p].second.second;
        if (p + 1 < m && pv >= 3)
            for (int j = 0; j < k; ++j) emit(with_extra(a, L.prop_cprime[p][j]));
        if (p + 1 < m && pv >= 2)
            for (int i = 0; i < k; ++i) {
                emit(with_extra(a, L.prop_w[p][i][j1]));
                if (j2 != j1) emit(with_extra(a, L.prop_w[p][i][j2]));
            }
        // per plain column: the previous copy contributes only its forward skeleton,
        // which keeps these bags below the transition bag
        std::vector<int> carry = Y[p];
        if (p > 0) {
            for (int i = 0; i < k; ++i) carry.push_back(L.prop_r[p - 1][i]);
            for (int j = 0; j < k; ++j) carry.push_back(L.prop_c[p - 1][j]);
            carry.push_back(L.prop_hub[p - 1]);
        }
        std::sort(carry.begin(), carry.end());
        for (int j = 0; j < k; ++j) {
            if (j == j1 || j == j2) continue;
            std::vector<int> z = carry;
            for (int v : column_vertices(p, j)) z.push_back(v);
            std::sort(z.begin(), z.end());
            emit(z);
            if (p + 1 < m && pv >= 2)
                for (int i = 0; i < k; ++i) emit(with_extra(z, L.prop_w[p][i][j]));
        }
    }
    pd.node_count = int(pd.bags.size());
    for (int i = 0; i + 1 < pd.node_count; ++i) pd.tree_edges.emplace_back(i, i + 1);
    return pd;
}

namespace {

bool gadget_legal(Problem problem, const Graph& g, const VertexSet& kept,
                  const VertexSet& s) {
    switch (problem) {
        case Problem::Sfvs: return !has_s_traversing_cycle(g, kept, s);
        case Problem::Soct: return is_s_bipartite(g, kept, s);
        case Problem::Ect: return !has_even_cycle(g, kept);
        default: throw Error("verify_gadget: unsupported problem");
    }
}

}  // namespace

GadgetCheck verify_gadget(GadgetKind kind, int variant, int k, Problem problem) {
    if (k < 2) return {false, "k must be at least 2"};
    Builder b;
    std::ostringstream why;

    switch (kind) {
        case GadgetKind::ColumnSelector: {
            if (k > 3) return {false, "column selector enumeration limited to k <= 3"};
            std::vector<std::vector<int>> col(k, std::vector<int>(2));
            for (int i = 0; i < k; ++i)
                for (int z = 0; z < 2; ++z) col[i][z] = b.alloc();
            std::vector<int> sel;
            wire_column_selector(b, k, variant, col, sel);
            LabeledInstance inst = b.finish(problem);
            const int n = inst.n();
            // expected legal deletions: the column minus one homologous pair
            std::vector<std::vector<int>> expected;
            for (int keep = 0; keep < k; ++keep) {
                std::vector<int> d;
                for (int i = 0; i < k; ++i) {
                    if (i == keep) continue;
                    d.push_back(col[i][0]);
                    d.push_back(col[i][1]);
                }
                std::sort(d.begin(), d.end());
                expected.push_back(d);
            }
            std::sort(expected.begin(), expected.end());

            std::vector<std::vector<int>> legal;
            const int c = 2 * k - 2;
            std::vector<int> idx(c);
            for (int i = 0; i < c; ++i) idx[i] = i;
            while (true) {
                VertexSet kept(n);
                for (int v = 0; v < n; ++v) kept.insert(v);
                for (int i : idx) kept.erase(i);
                if (gadget_legal(problem, inst.graph, kept, inst.s_vertices))
                    legal.push_back(idx);
                int i = c - 1;
                while (i >= 0 && idx[i] == n - c + i) --i;
                if (i < 0) break;
                ++idx[i];
                for (int j = i + 1; j < c; ++j) idx[j] = idx[j - 1] + 1;
            }
            std::sort(legal.begin(), legal.end());
            if (legal == expected) return {true, ""};
            why << "expected " << expected.size() << " legal deletions, found "
                << legal.size();
            return {false, why.str()};
        }
        case GadgetKind::RowSelector: {
            std::vector<std::vector<int>> row(k, std::vector<int>(2));
            for (int j = 0; j < k; ++j)
                for (int z = 0; z < 2; ++z) row[j][z] = b.alloc();
            std::vector<int> z1;
            for (int j = 0; j < k; ++j) z1.push_back(row[j][0]);
            std::vector<int> sel;
            wire_row_selector(b, variant, z1, sel);
            LabeledInstance inst = b.finish(problem);
            for (int j = 0; j < k; ++j)
                for (int j2 = j + 1; j2 < k; ++j2) {
                    VertexSet sub(inst.n());
                    for (int v : sel) sub.insert(v);
                    sub.insert(row[j][0]);
                    sub.insert(row[j][1]);
                    sub.insert(row[j2][0]);
                    sub.insert(row[j2][1]);
                    if (gadget_legal(problem, inst.graph, sub, inst.s_vertices)) {
                        why << "columns " << j << "," << j2 << " not an obstruction";
                        return {false, why.str()};
                    }
                }
            return {true, ""};
        }
        case GadgetKind::EdgeGadget: {
            int a0 = b.alloc(), a1 = b.alloc(), c0 = b.alloc(), c1 = b.alloc();
            std::vector<int> sel;
            wire_edge_gadget(b, variant, a0, c0, sel);
            LabeledInstance inst = b.finish(problem);
            VertexSet sub(inst.n());
            for (int v : sel) sub.insert(v);
            for (int v : {a0, a1, c0, c1}) sub.insert(v);
            if (gadget_legal(problem, inst.graph, sub, inst.s_vertices))
                return {false, "gadget plus endpoints is not an obstruction"};
            return {true, ""};
        }
        case GadgetKind::Propagation: {
            auto base = [&](int p, int i, int j, int z) {
                return p * 2 * k * k + (i * k + j) * 2 + z;
            };
            b.alloc(2 * 2 * k * k);
            std::vector<int> r(k), c(k), hub(1), cprime;
            std::vector<std::vector<int>> w;
            for (int i = 0; i < k; ++i) r[i] = b.alloc();
            for (int j = 0; j < k; ++j) c[j] = b.alloc();
            hub[0] = b.alloc();
            b.in_s(hub[0]);
            if (variant >= 2) {
                w.assign(k, std::vector<int>(k));
                for (int i = 0; i < k; ++i)
                    for (int j = 0; j < k; ++j) w[i][j] = b.alloc();
            }
            if (variant >= 3)
                for (int j = 0; j < k; ++j) cprime.push_back(b.alloc());
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) {
                    if (variant >= 2) {
                        b.edge(r[i], w[i][j]);
                        b.edge(w[i][j], base(0, i, j, 1));
                    } else {
                        b.edge(r[i], base(0, i, j, 1));
                    }
                    b.edge(r[i], base(1, i, j, 0));
                    b.edge(c[j], base(0, i, j, 1));
                    b.edge(c[j], base(1, i, j, 0));
                }
            for (int j = 0; j < k; ++j) {
                b.edge(hub[0], c[j]);
                if (variant >= 3) {
                    b.edge(cprime[j], c[j]);
                    b.edge(cprime[j], hub[0]);
                }
            }
            LabeledInstance inst = b.finish(problem);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j)
                    for (int j2 = 0; j2 < k; ++j2) {
                        if (j2 == j) continue;
                        VertexSet sub(inst.n());
                        for (int v : r) sub.insert(v);
                        for (int v : c) sub.insert(v);
                        sub.insert(hub[0]);
                        for (auto& wi : w)
                            for (int v : wi) sub.insert(v);
                        for (int v : cprime) sub.insert(v);
                        sub.insert(base(0, i, j, 0));
                        sub.insert(base(0, i, j, 1));
                        sub.insert(base(1, i, j2, 0));
                        sub.insert(base(1, i, j2, 1));
                        if (gadget_legal(problem, inst.graph, sub, inst.s_vertices)) {
                            why << "copy transition (" << i << "," << j << ")->(" << i
                                << "," << j2 << ") not an obstruction";
                            return {false, why.str()};
                        }
                    }
            return {true, ""};
        }
    }
    return {false, "unknown gadget kind"};
}

}  // namespace stw
