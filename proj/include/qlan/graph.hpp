// Copyright 2026 The qlansim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qlan/error.hpp"

namespace qlan {

using VertexId = std::uint32_t;
using Edge = std::pair<VertexId, VertexId>;

/// Simple undirected graph over small integer vertex ids.
///
/// Adjacency is stored as one bitset row per id so that local complementation
/// is a handful of word operations. Ids are stable across deletions; each
/// vertex carries an immutable label (e.g. "orchestrator" or "client:c3").
class Graph {
public:
    static constexpr std::size_t kMaxVertices = 256;
    using Row = std::bitset<kMaxVertices>;

    Graph() = default;

    /// Edgeless graph on ids 0..n-1.
    explicit Graph(std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) add_vertex(static_cast<VertexId>(i));
    }

    /// Adds a vertex with the next unused id (one past the current maximum).
    VertexId add_vertex(std::string label = {}) {
        const VertexId id = next_id();
        add_vertex(id, std::move(label));
        return id;
    }

    void add_vertex(VertexId id, std::string label = {}) {
        if (id >= kMaxVertices) throw Error(Errc::IndexOutOfRange, "vertex id " + std::to_string(id) + " exceeds capacity");
        if (present_.test(id)) throw Error(Errc::IdCollision, "vertex " + std::to_string(id) + " already present");
        if (adj_.size() <= id) adj_.resize(id + 1);
        present_.set(id);
        adj_[id].reset();
        if (!label.empty()) labels_[id] = std::move(label);
    }

    bool has_vertex(VertexId v) const { return v < kMaxVertices && present_.test(v); }

    void add_edge(VertexId u, VertexId v) {
        check_pair(u, v);
        adj_[u].set(v);
        adj_[v].set(u);
    }

    void remove_edge(VertexId u, VertexId v) {
        check_pair(u, v);
        adj_[u].reset(v);
        adj_[v].reset(u);
    }

    void toggle_edge(VertexId u, VertexId v) {
        check_pair(u, v);
        adj_[u].flip(v);
        adj_[v].flip(u);
    }

    bool has_edge(VertexId u, VertexId v) const {
        return has_vertex(u) && has_vertex(v) && adj_[u].test(v);
    }

    /// Removes `v` and every incident edge.
    void erase_vertex(VertexId v) {
        require(v);
        for (VertexId w : neighbors(v)) adj_[w].reset(v);
        adj_[v].reset();
        present_.reset(v);
        labels_.erase(v);
    }

    /// In-place local complementation at `a`.
    void complement_neighborhood(VertexId a) {
        require(a);
        const Row na = adj_[a];
        for (VertexId b : ids_of(na)) {
            adj_[b] ^= na;
            adj_[b].reset(b);
        }
    }

    const Row &row(VertexId v) const {
        require(v);
        return adj_[v];
    }

    const Row &vertex_set() const { return present_; }

    std::vector<VertexId> vertices() const { return ids_of(present_); }

    std::vector<VertexId> neighbors(VertexId v) const { return ids_of(row(v)); }

    std::size_t degree(VertexId v) const { return row(v).count(); }

    std::size_t num_vertices() const { return present_.count(); }

    std::size_t num_edges() const {
        std::size_t twice = 0;
        for (VertexId v : vertices()) twice += adj_[v].count();
        return twice / 2;
    }

    bool empty() const { return present_.none(); }

    /// Sorted (u < v) edge list.
    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        for (VertexId u : vertices()) {
            for (VertexId v : ids_of(adj_[u])) {
                if (u < v) out.emplace_back(u, v);
            }
        }
        return out;
    }

    const std::string &label(VertexId v) const {
        require(v);
        static const std::string kEmpty;
        auto it = labels_.find(v);
        return it == labels_.end() ? kEmpty : it->second;
    }

    std::optional<VertexId> max_id() const {
        for (std::size_t i = adj_.size(); i-- > 0;) {
            if (present_.test(i)) return static_cast<VertexId>(i);
        }
        return std::nullopt;
    }

    VertexId next_id() const {
        auto m = max_id();
        return m ? *m + 1 : 0;
    }

    /// Labeled equality: same vertex ids, labels and edges.
    friend bool operator==(const Graph &a, const Graph &b) {
        if (a.present_ != b.present_) return false;
        for (VertexId v : a.vertices()) {
            if (a.adj_[v] != b.adj_[v] || a.label(v) != b.label(v)) return false;
        }
        return true;
    }

    /// Same ids and edges, labels ignored.
    bool same_edges(const Graph &o) const {
        if (present_ != o.present_) return false;
        for (VertexId v : vertices()) {
            if (adj_[v] != o.adj_[v]) return false;
        }
        return true;
    }

    static std::vector<VertexId> ids_of(const Row &r) {
        std::vector<VertexId> out;
        out.reserve(r.count());
        for (std::size_t i = r._Find_first(); i < kMaxVertices; i = r._Find_next(i)) {
            out.push_back(static_cast<VertexId>(i));
        }
        return out;
    }

private:
    void require(VertexId v) const {
        if (!has_vertex(v)) throw Error(Errc::UnknownVertex, "vertex " + std::to_string(v));
    }

    void check_pair(VertexId u, VertexId v) const {
        require(u);
        require(v);
        if (u == v) throw Error(Errc::InvalidParams, "self-loop at vertex " + std::to_string(u));
    }

    Row present_;
    std::vector<Row> adj_;
    std::map<VertexId, std::string> labels_;
};

/// tau_a: complement the edge set induced on N(a).
inline Graph local_complement(const Graph &g, VertexId a) {
    Graph out = g;
    out.complement_neighborhood(a);
    return out;
}

/// G - a.
inline Graph delete_vertex(const Graph &g, VertexId a) {
    Graph out = g;
    out.erase_vertex(a);
    return out;
}

struct MergeOptions {
    bool relabel = true;
};

struct MergeResult {
    Graph graph;
    VertexId merged = 0;
    /// Where each vertex of the second graph ended up.
    std::map<VertexId, VertexId> second_ids;
};

/// Identifies `a` in `g1` with `b` in `g2`. The merged vertex keeps id and
/// label of `a` and its neighborhood becomes N(a) union N(b). With relabeling
/// the remaining vertices of `g2` get fresh ids above the maximum of `g1`, in
/// increasing order of their original ids.
inline MergeResult merge(const Graph &g1, VertexId a, const Graph &g2, VertexId b, MergeOptions opts = {}) {
    if (!g1.has_vertex(a)) throw Error(Errc::UnknownVertex, "merge vertex " + std::to_string(a) + " not in first graph");
    if (!g2.has_vertex(b)) throw Error(Errc::UnknownVertex, "merge vertex " + std::to_string(b) + " not in second graph");
    MergeResult res;
    res.graph = g1;
    res.merged = a;
    VertexId next = g1.next_id();
    for (VertexId v : g2.vertices()) {
        if (v == b) {
            res.second_ids[v] = a;
            continue;
        }
        VertexId target = v;
        if (opts.relabel) {
            target = next++;
        } else if (g1.has_vertex(v)) {
            throw Error(Errc::IdCollision, "vertex " + std::to_string(v) + " present in both graphs");
        }
        res.second_ids[v] = target;
        res.graph.add_vertex(target, g2.label(v));
    }
    for (auto [u, v] : g2.edges()) res.graph.add_edge(res.second_ids.at(u), res.second_ids.at(v));
    return res;
}

enum class TopologyKind { Star, Path, Cycle };

struct Topology {
    TopologyKind kind;
    std::size_t n;

    static Topology star(std::size_t n) { return {TopologyKind::Star, n}; }
    static Topology path(std::size_t n) { return {TopologyKind::Path, n}; }
    static Topology cycle(std::size_t n) { return {TopologyKind::Cycle, n}; }
};

/// Canonical instances on ids 0..n-1. The star center is vertex 0; cycle(1)
/// and cycle(2) degenerate to a vertex and an edge.
inline Graph build(Topology t) {
    if (t.n == 0) throw Error(Errc::InvalidSize, "topology needs at least one vertex");
    if (t.n > Graph::kMaxVertices) throw Error(Errc::InvalidSize, "topology exceeds vertex capacity");
    Graph g(t.n);
    const auto n = static_cast<VertexId>(t.n);
    switch (t.kind) {
        case TopologyKind::Star:
            for (VertexId i = 1; i < n; ++i) g.add_edge(0, i);
            break;
        case TopologyKind::Path:
            for (VertexId i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
            break;
        case TopologyKind::Cycle:
            for (VertexId i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
            if (n >= 3) g.add_edge(n - 1, 0);
            break;
    }
    return g;
}

/// Breadth-first shortest path; ties resolve toward lower ids. Empty when
/// the endpoints are disconnected.
inline std::vector<VertexId> shortest_path(const Graph &g, VertexId u, VertexId v) {
    if (!g.has_vertex(u)) throw Error(Errc::UnknownVertex, "vertex " + std::to_string(u));
    if (!g.has_vertex(v)) throw Error(Errc::UnknownVertex, "vertex " + std::to_string(v));
    if (u == v) return {u};
    std::map<VertexId, VertexId> parent;
    parent[u] = u;
    std::deque<VertexId> queue{u};
    while (!queue.empty()) {
        const VertexId x = queue.front();
        queue.pop_front();
        for (VertexId y : g.neighbors(x)) {
            if (parent.count(y)) continue;
            parent[y] = x;
            if (y == v) {
                std::vector<VertexId> path{v};
                while (path.back() != u) path.push_back(parent.at(path.back()));
                std::reverse(path.begin(), path.end());
                return path;
            }
            queue.push_back(y);
        }
    }
    return {};
}

/// Hop count, or nullopt when u and v lie in different components.
inline std::optional<std::size_t> distance(const Graph &g, VertexId u, VertexId v) {
    auto p = shortest_path(g, u, v);
    if (p.empty()) return std::nullopt;
    return p.size() - 1;
}

inline std::vector<std::vector<VertexId>> connected_components(const Graph &g) {
    std::vector<std::vector<VertexId>> out;
    Graph::Row seen;
    for (VertexId s : g.vertices()) {
        if (seen.test(s)) continue;
        std::vector<VertexId> comp;
        std::deque<VertexId> queue{s};
        seen.set(s);
        while (!queue.empty()) {
            const VertexId x = queue.front();
            queue.pop_front();
            comp.push_back(x);
            for (VertexId y : g.neighbors(x)) {
                if (!seen.test(y)) {
                    seen.set(y);
                    queue.push_back(y);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

inline bool is_connected(const Graph &g) { return connected_components(g).size() <= 1; }

/// Subgraph induced on `keep` (ids not in `g` are ignored). Labels carry over.
inline Graph induced_subgraph(const Graph &g, const std::vector<VertexId> &keep) {
    Graph out;
    Graph::Row mask;
    for (VertexId v : keep) {
        if (g.has_vertex(v) && !mask.test(v)) {
            mask.set(v);
            out.add_vertex(v, g.label(v));
        }
    }
    for (auto [u, v] : g.edges()) {
        if (mask.test(u) && mask.test(v)) out.add_edge(u, v);
    }
    return out;
}

/// Brute-force isomorphism test for small graphs (n <= 8); meant for tests.
inline bool brute_force_isomorphic(const Graph &a, const Graph &b) {
    if (a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges()) return false;
    const auto va = a.vertices();
    const auto vb = b.vertices();
    if (va.size() > 8) throw Error(Errc::InvalidSize, "isomorphism helper limited to 8 vertices");
    std::vector<std::size_t> perm(vb.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (std::size_t i = 0; i < va.size() && ok; ++i) {
            for (std::size_t j = i + 1; j < va.size(); ++j) {
                if (a.has_edge(va[i], va[j]) != b.has_edge(vb[perm[i]], vb[perm[j]])) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

}  // namespace qlan
