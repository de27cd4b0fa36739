#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stw {

using Weight = long long;

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Set of vertex ids over a fixed universe [0, n), backed by a bit array.
class VertexSet {
public:
    VertexSet() = default;
    explicit VertexSet(int universe) : n_(universe), words_((universe + 63) / 64, 0) {}

    int universe() const { return n_; }

    bool contains(int v) const { return (words_[v >> 6] >> (v & 63)) & 1; }
    void insert(int v) { words_[v >> 6] |= uint64_t(1) << (v & 63); }
    void erase(int v) { words_[v >> 6] &= ~(uint64_t(1) << (v & 63)); }
    void clear() { std::fill(words_.begin(), words_.end(), 0); }

    int count() const {
        int c = 0;
        for (uint64_t w : words_) c += __builtin_popcountll(w);
        return c;
    }
    bool empty() const {
        for (uint64_t w : words_) if (w) return false;
        return true;
    }

    VertexSet& operator|=(const VertexSet& o) {
        for (size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    VertexSet& operator&=(const VertexSet& o) {
        for (size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    VertexSet& subtract(const VertexSet& o) {
        for (size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }
    friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
    friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }

    bool operator==(const VertexSet& o) const { return n_ == o.n_ && words_ == o.words_; }
    bool operator!=(const VertexSet& o) const { return !(*this == o); }

    bool is_subset_of(const VertexSet& o) const {
        for (size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }
    bool intersects(const VertexSet& o) const {
        for (size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }

    std::vector<int> to_vector() const {
        std::vector<int> out;
        out.reserve(count());
        for (size_t i = 0; i < words_.size(); ++i) {
            uint64_t w = words_[i];
            while (w) {
                int b = __builtin_ctzll(w);
                out.push_back(int(i) * 64 + b);
                w &= w - 1;
            }
        }
        return out;
    }

    template <typename F>
    void for_each(F&& f) const {
        for (size_t i = 0; i < words_.size(); ++i) {
            uint64_t w = words_[i];
            while (w) {
                int b = __builtin_ctzll(w);
                f(int(i) * 64 + b);
                w &= w - 1;
            }
        }
    }

    /// Lexicographic order on the sorted vertex sequences; used only for tie-breaking.
    bool lex_less(const VertexSet& o) const {
        std::vector<int> a = to_vector(), b = o.to_vector();
        return a < b;
    }

    static VertexSet of(int universe, std::initializer_list<int> vs) {
        VertexSet s(universe);
        for (int v : vs) s.insert(v);
        return s;
    }

private:
    int n_ = 0;
    std::vector<uint64_t> words_;
};

/// Undirected simple graph with sorted adjacency lists. No loops, no parallel edges.
class Graph {
public:
    Graph() = default;
    explicit Graph(int n) : adj_(n) {}

    int vertex_count() const { return int(adj_.size()); }
    int edge_count() const { return m_; }

    const std::vector<int>& neighbors(int v) const { return adj_[v]; }
    int degree(int v) const { return int(adj_[v].size()); }

    bool has_edge(int u, int v) const {
        if (u < 0 || v < 0 || u >= vertex_count() || v >= vertex_count()) return false;
        const auto& a = adj_[u];
        return std::binary_search(a.begin(), a.end(), v);
    }

    /// Inserts the edge uv; duplicates are ignored, loops rejected.
    void add_edge(int u, int v) {
        if (u == v) throw Error("loop edge " + std::to_string(u) + "-" + std::to_string(v));
        if (u < 0 || v < 0 || u >= vertex_count() || v >= vertex_count())
            throw Error("edge endpoint out of range");
        if (has_edge(u, v)) return;
        insert_sorted(adj_[u], v);
        insert_sorted(adj_[v], u);
        ++m_;
    }

    /// Edges as (u, v) pairs with u < v, sorted.
    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> out;
        out.reserve(m_);
        for (int u = 0; u < vertex_count(); ++u)
            for (int v : adj_[u])
                if (u < v) out.emplace_back(u, v);
        return out;
    }

private:
    static void insert_sorted(std::vector<int>& a, int v) {
        a.insert(std::lower_bound(a.begin(), a.end(), v), v);
    }
    std::vector<std::vector<int>> adj_;
    int m_ = 0;
};

enum class Problem { Sfvs, Soct, Ect, Nmc, Mwc, Resfes };

std::string problem_name(Problem p);
std::optional<Problem> problem_from_name(const std::string& name);

/// A problem instance: graph, vertex weights, role labels, problem kind and budget.
/// Vertices in forced_keep may never appear in a deletion set (the undeletable role
/// otherwise modeled by an unbounded weight).
struct LabeledInstance {
    Graph graph;
    std::vector<Weight> weight;                 // per-vertex deletion cost, >= 0
    VertexSet s_vertices;
    VertexSet terminals;
    std::vector<std::pair<int, int>> s_edges;   // normalized u < v, sorted
    VertexSet forced_keep;
    Problem problem = Problem::Sfvs;
    std::optional<Weight> budget;

    LabeledInstance() = default;
    explicit LabeledInstance(int n)
        : graph(n), weight(n, 1), s_vertices(n), terminals(n), forced_keep(n) {}

    int n() const { return graph.vertex_count(); }

    Weight total_weight() const {
        Weight t = 0;
        for (Weight w : weight) t += w;
        return t;
    }

    void add_s_edge(int u, int v) {
        if (u > v) std::swap(u, v);
        if (!graph.has_edge(u, v)) throw Error("s-edge not present in graph");
        auto e = std::make_pair(u, v);
        auto it = std::lower_bound(s_edges.begin(), s_edges.end(), e);
        if (it == s_edges.end() || *it != e) s_edges.insert(it, e);
    }

    bool is_s_edge(int u, int v) const {
        if (u > v) std::swap(u, v);
        return std::binary_search(s_edges.begin(), s_edges.end(), std::make_pair(u, v));
    }

    void check() const {
        if (int(weight.size()) != n()) throw Error("weight vector size mismatch");
        for (Weight w : weight)
            if (w < 0) throw Error("negative vertex weight");
        for (auto [u, v] : s_edges)
            if (!graph.has_edge(u, v)) throw Error("s-edge not present in graph");
    }
};

}  // namespace stw
