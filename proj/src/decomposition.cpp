#include "stw/decomposition.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace stw {

std::string TdViolation::to_string() const {
    std::ostringstream os;
    switch (kind) {
        case VertexUncovered:
            os << "vertex " << a + 1 << " appears in no bag";
            break;
        case EdgeUncovered:
            os << "edge " << a + 1 << "-" << b + 1 << " covered by no bag";
            break;
        case OccurrencesDisconnected:
            os << "occurrences of vertex " << a + 1 << " do not form a subtree";
            break;
    }
    return os.str();
}

TreeDecomposition load_td(const std::string& text) {
    TreeDecomposition td;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool header = false;
    int declared_bags = 0;
    std::vector<bool> seen_bag;
    auto fail = [&](const std::string& msg) {
        throw Error("td parse error at line " + std::to_string(lineno) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == 'c' || line[0] == '#') continue;
        std::istringstream ls(line);
        if (line[0] == 's') {
            std::string s, tdtok;
            int w1 = 0;
            ls >> s >> tdtok >> declared_bags >> w1 >> td.graph_n;
            if (!ls || tdtok != "td" || declared_bags < 0 || td.graph_n < 0)
                fail("malformed header");
            if (header) fail("duplicate header");
            header = true;
            td.node_count = declared_bags;
            td.bags.assign(declared_bags, {});
            seen_bag.assign(declared_bags, false);
        } else if (line[0] == 'b') {
            if (!header) fail("bag line before header");
            char btok;
            int id;
            ls >> btok >> id;
            if (!ls) fail("malformed bag line");
            if (id < 1 || id > declared_bags) fail("bag index out of range");
            if (seen_bag[id - 1]) fail("duplicate bag id");
            seen_bag[id - 1] = true;
            int v;
            std::vector<int> bag;
            while (ls >> v) {
                if (v < 1 || v > td.graph_n) fail("bag vertex out of range");
                bag.push_back(v - 1);
            }
            std::sort(bag.begin(), bag.end());
            bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
            td.bags[id - 1] = std::move(bag);
        } else {
            if (!header) fail("edge line before header");
            int a, b;
            std::istringstream es(line);
            es >> a >> b;
            if (!es) fail("malformed tree edge line");
            if (a < 1 || a > declared_bags || b < 1 || b > declared_bags || a == b)
                fail("tree edge index out of range");
            td.tree_edges.emplace_back(a - 1, b - 1);
        }
    }
    if (!header) {
        lineno = 0;
        fail("missing header");
    }
    // The tree edges must form a tree over the declared bags.
    if (td.node_count > 0 && int(td.tree_edges.size()) != td.node_count - 1) {
        lineno = 0;
        fail("edge set is not a tree (wrong edge count)");
    }
    std::vector<int> parent(td.node_count, -1);
    std::vector<std::vector<int>> adj(td.node_count);
    for (auto [a, b] : td.tree_edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    if (td.node_count > 0) {
        std::deque<int> q{0};
        std::vector<bool> vis(td.node_count, false);
        vis[0] = true;
        int cnt = 1;
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            for (int y : adj[x])
                if (!vis[y]) {
                    vis[y] = true;
                    ++cnt;
                    q.push_back(y);
                }
        }
        if (cnt != td.node_count) {
            lineno = 0;
            fail("edge set is not a tree (disconnected)");
        }
    }
    return td;
}

std::string serialize_td(const TreeDecomposition& td) {
    std::ostringstream os;
    os << "s td " << td.node_count << " " << td.width() + 1 << " " << td.graph_n << "\n";
    for (int i = 0; i < td.node_count; ++i) {
        os << "b " << i + 1;
        for (int v : td.bags[i]) os << " " << v + 1;
        os << "\n";
    }
    for (auto [a, b] : td.tree_edges) os << a + 1 << " " << b + 1 << "\n";
    return os.str();
}

std::optional<TdViolation> validate_td(const Graph& g, const TreeDecomposition& td) {
    const int n = g.vertex_count();
    std::vector<std::vector<int>> occ(n);  // bag occurrences per vertex, ascending
    for (int i = 0; i < td.node_count; ++i)
        for (int v : td.bags[i]) {
            if (v < 0 || v >= n) return TdViolation{TdViolation::VertexUncovered, v, -1};
            occ[v].push_back(i);
        }
    for (int v = 0; v < n; ++v)
        if (occ[v].empty()) return TdViolation{TdViolation::VertexUncovered, v, -1};

    for (auto [u, v] : g.edges()) {
        bool ok = false;
        size_t a = 0, b = 0;
        while (a < occ[u].size() && b < occ[v].size()) {
            if (occ[u][a] == occ[v][b]) {
                ok = true;
                break;
            }
            if (occ[u][a] < occ[v][b]) ++a;
            else ++b;
        }
        if (!ok) return TdViolation{TdViolation::EdgeUncovered, u, v};
    }

    std::vector<std::vector<int>> adj(td.node_count);
    for (auto [a, b] : td.tree_edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<int> mark(td.node_count, -1);
    for (int v = 0; v < n; ++v) {
        for (int i : occ[v]) mark[i] = v;
        std::deque<int> q{occ[v][0]};
        mark[occ[v][0]] = ~v;  // visited
        size_t seen = 1;
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            for (int y : adj[x])
                if (mark[y] == v) {
                    mark[y] = ~v;
                    ++seen;
                    q.push_back(y);
                }
        }
        if (seen != occ[v].size())
            return TdViolation{TdViolation::OccurrencesDisconnected, v, -1};
    }
    return std::nullopt;
}

namespace {

// Elimination-order decomposition. The fill graph is maintained as adjacency sets.
TreeDecomposition from_elimination_order(const Graph& g, const std::vector<int>& order) {
    const int n = g.vertex_count();
    std::vector<std::set<int>> adj(n);
    for (int u = 0; u < n; ++u)
        for (int v : g.neighbors(u)) adj[u].insert(v);

    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[order[i]] = i;

    TreeDecomposition td;
    td.graph_n = n;
    td.node_count = n;
    td.bags.resize(n);
    std::vector<char> eliminated(n, 0);
    for (int i = 0; i < n; ++i) {
        int v = order[i];
        std::vector<int> later;
        for (int w : adj[v])
            if (!eliminated[w]) later.push_back(w);
        std::vector<int> bag = later;
        bag.push_back(v);
        std::sort(bag.begin(), bag.end());
        td.bags[i] = std::move(bag);
        for (size_t a = 0; a < later.size(); ++a)
            for (size_t b = a + 1; b < later.size(); ++b) {
                adj[later[a]].insert(later[b]);
                adj[later[b]].insert(later[a]);
            }
        eliminated[v] = 1;
        if (!later.empty()) {
            int next = later[0];
            for (int w : later)
                if (pos[w] < pos[next]) next = w;
            td.tree_edges.emplace_back(i, pos[next]);
        } else if (i + 1 < n) {
            // keep the tree connected for vertices whose component is finished
            td.tree_edges.emplace_back(i, i + 1);
        }
    }
    if (n == 0) {
        td.node_count = 1;
        td.bags.push_back({});
    }
    return td;
}

std::vector<int> greedy_order(const Graph& g, bool min_fill) {
    const int n = g.vertex_count();
    std::vector<std::set<int>> adj(n);
    for (int u = 0; u < n; ++u)
        for (int v : g.neighbors(u)) adj[u].insert(v);
    std::vector<char> done(n, 0);
    std::vector<int> order;
    order.reserve(n);
    for (int step = 0; step < n; ++step) {
        int best = -1;
        long long best_key1 = -1, best_key2 = -1;
        for (int v = 0; v < n; ++v) {
            if (done[v]) continue;
            std::vector<int> nb;
            for (int w : adj[v])
                if (!done[w]) nb.push_back(w);
            long long deg = (long long)nb.size();
            long long fill = 0;
            if (min_fill) {
                bool over = false;
                for (size_t a = 0; a < nb.size() && !over; ++a)
                    for (size_t b = a + 1; b < nb.size(); ++b) {
                        if (!adj[nb[a]].count(nb[b])) ++fill;
                        if (best != -1 && fill > best_key1) {
                            over = true;
                            break;
                        }
                    }
                if (over) continue;
            }
            long long key1 = min_fill ? fill : deg;
            long long key2 = min_fill ? deg : 0;
            if (best == -1 || key1 < best_key1 ||
                (key1 == best_key1 && key2 < best_key2)) {
                best = v;
                best_key1 = key1;
                best_key2 = key2;
            }
        }
        std::vector<int> nb;
        for (int w : adj[best])
            if (!done[w]) nb.push_back(w);
        for (size_t a = 0; a < nb.size(); ++a)
            for (size_t b = a + 1; b < nb.size(); ++b) {
                adj[nb[a]].insert(nb[b]);
                adj[nb[b]].insert(nb[a]);
            }
        done[best] = 1;
        order.push_back(best);
    }
    return order;
}

}  // namespace

TreeDecomposition heuristic_td(const Graph& g) {
    TreeDecomposition fill = from_elimination_order(g, greedy_order(g, true));
    TreeDecomposition deg = from_elimination_order(g, greedy_order(g, false));
    return fill.width() <= deg.width() ? fill : deg;
}

std::vector<int> NiceTreeDecomposition::postorder() const {
    std::vector<int> out;
    out.reserve(nodes.size());
    std::vector<std::pair<int, bool>> stack{{root, false}};
    while (!stack.empty()) {
        auto [v, expanded] = stack.back();
        stack.pop_back();
        if (v < 0) continue;
        if (expanded) {
            out.push_back(v);
        } else {
            stack.push_back({v, true});
            stack.push_back({nodes[v].child2, false});
            stack.push_back({nodes[v].child1, false});
        }
    }
    return out;
}

namespace {

struct NiceBuilder {
    NiceTreeDecomposition out;

    int add(NodeKind kind, int vertex, int c1, int c2, std::vector<int> bag) {
        NiceTreeDecomposition::Node nd;
        nd.kind = kind;
        nd.vertex = vertex;
        nd.child1 = c1;
        nd.child2 = c2;
        nd.bag = std::move(bag);
        out.nodes.push_back(std::move(nd));
        return int(out.nodes.size()) - 1;
    }

    /// Leaf followed by introduces of `bag` in ascending order.
    int leaf_chain(const std::vector<int>& bag) {
        int cur = add(NodeKind::Leaf, -1, -1, -1, {});
        std::vector<int> acc;
        for (int v : bag) {
            acc.push_back(v);
            cur = add(NodeKind::Introduce, v, cur, -1, acc);
        }
        return cur;
    }

    /// Forget (ascending) then introduce (ascending), from bag `from` to bag `to`.
    int transition(int node, const std::vector<int>& from, const std::vector<int>& to) {
        std::vector<int> cur = from;
        int top = node;
        std::vector<int> forgets, intros;
        std::set_difference(from.begin(), from.end(), to.begin(), to.end(),
                            std::back_inserter(forgets));
        std::set_difference(to.begin(), to.end(), from.begin(), from.end(),
                            std::back_inserter(intros));
        for (int v : forgets) {
            cur.erase(std::find(cur.begin(), cur.end(), v));
            top = add(NodeKind::Forget, v, top, -1, cur);
        }
        for (int v : intros) {
            cur.insert(std::lower_bound(cur.begin(), cur.end(), v), v);
            top = add(NodeKind::Introduce, v, top, -1, cur);
        }
        return top;
    }
};

}  // namespace

NiceTreeDecomposition nicify(const TreeDecomposition& td, const Graph& g) {
    if (auto bad = validate_td(g, td))
        throw Error("invalid tree decomposition: " + bad->to_string());

    NiceBuilder nb;
    nb.out.graph_n = g.vertex_count();

    std::vector<std::vector<int>> adj(td.node_count);
    for (auto [a, b] : td.tree_edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());

    const int root_orig = 0;  // minimum id
    // iterative post-order over the original tree
    struct Frame {
        int v, parent;
        size_t next;
        std::vector<int> child_tops;
    };
    std::vector<Frame> stack;
    stack.push_back({root_orig, -1, 0, {}});
    int final_top = -1;
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next < adj[f.v].size()) {
            int c = adj[f.v][f.next++];
            if (c != f.parent) stack.push_back({c, f.v, 0, {}});
            continue;
        }
        // combine: transitions from children plus a fresh chain for this bag
        const auto& bag = td.bags[f.v];
        std::vector<int> tops;
        for (int ct : f.child_tops) tops.push_back(ct);
        tops.push_back(nb.leaf_chain(bag));
        int top = tops[0];
        for (size_t i = 1; i < tops.size(); ++i)
            top = nb.add(NodeKind::Join, -1, top, tops[i], bag);
        int parent = f.parent;
        stack.pop_back();
        if (parent >= 0) {
            // transition this subtree's top to the parent's bag
            int transitioned = nb.transition(top, bag, td.bags[parent]);
            stack.back().child_tops.push_back(transitioned);
        } else {
            final_top = top;
        }
    }
    // empty the root bag
    {
        std::vector<int> cur = td.bags[root_orig];
        for (int v : td.bags[root_orig]) {
            std::vector<int> next;
            std::copy_if(cur.begin(), cur.end(), std::back_inserter(next),
                         [&](int x) { return x != v; });
            cur = next;
            final_top = nb.add(NodeKind::Forget, v, final_top, -1, cur);
        }
    }
    nb.out.root = final_top;
    return nb.out;
}

void check_nice_td(const NiceTreeDecomposition& ntd, const Graph& g) {
    if (ntd.root < 0 || ntd.root >= int(ntd.nodes.size())) throw Error("nice td: bad root");
    if (!ntd.nodes[ntd.root].bag.empty()) throw Error("nice td: root bag not empty");
    TreeDecomposition td;
    td.graph_n = g.vertex_count();
    td.node_count = int(ntd.nodes.size());
    for (const auto& nd : ntd.nodes) td.bags.push_back(nd.bag);
    for (int i = 0; i < int(ntd.nodes.size()); ++i) {
        const auto& nd = ntd.nodes[i];
        switch (nd.kind) {
            case NodeKind::Leaf:
                if (!nd.bag.empty() || nd.child1 >= 0 || nd.child2 >= 0)
                    throw Error("nice td: malformed leaf");
                break;
            case NodeKind::Introduce: {
                if (nd.child1 < 0 || nd.child2 >= 0) throw Error("nice td: malformed introduce");
                auto child_bag = ntd.nodes[nd.child1].bag;
                auto bag = nd.bag;
                if (!std::binary_search(bag.begin(), bag.end(), nd.vertex))
                    throw Error("nice td: introduce vertex not in bag");
                bag.erase(std::find(bag.begin(), bag.end(), nd.vertex));
                if (bag != child_bag) throw Error("nice td: introduce bag mismatch");
                break;
            }
            case NodeKind::Forget: {
                if (nd.child1 < 0 || nd.child2 >= 0) throw Error("nice td: malformed forget");
                auto child_bag = ntd.nodes[nd.child1].bag;
                if (!std::binary_search(child_bag.begin(), child_bag.end(), nd.vertex))
                    throw Error("nice td: forgotten vertex not in child bag");
                child_bag.erase(std::find(child_bag.begin(), child_bag.end(), nd.vertex));
                if (child_bag != nd.bag) throw Error("nice td: forget bag mismatch");
                break;
            }
            case NodeKind::Join:
                if (nd.child1 < 0 || nd.child2 < 0) throw Error("nice td: malformed join");
                if (ntd.nodes[nd.child1].bag != nd.bag || ntd.nodes[nd.child2].bag != nd.bag)
                    throw Error("nice td: join bag mismatch");
                break;
        }
    }
    // axioms via the generic validator
    for (int i = 0; i < int(ntd.nodes.size()); ++i) {
        if (ntd.nodes[i].child1 >= 0) td.tree_edges.emplace_back(i, ntd.nodes[i].child1);
        if (ntd.nodes[i].child2 >= 0) td.tree_edges.emplace_back(i, ntd.nodes[i].child2);
    }
    if (auto bad = validate_td(g, td))
        throw Error("nice td violates decomposition axioms: " + bad->to_string());
}

}  // namespace stw
