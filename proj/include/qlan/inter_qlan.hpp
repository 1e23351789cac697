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

#include <cstdint>
#include <deque>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qlan/error.hpp"
#include "qlan/graph.hpp"
#include "qlan/graph_state.hpp"
#include "qlan/qlan.hpp"

namespace qlan {

/// Several QLANs whose orchestrators share point-to-point quantum channels.
struct MultiQlanNetwork {
    std::vector<QlanConfig> qlans;
    std::vector<std::pair<std::size_t, std::size_t>> mesh;  // by QLAN index

    /// n QLANs with orchestrators o1..on, clients numbered c1, c2, ... across
    /// the network, and a full orchestrator mesh.
    static MultiQlanNetwork uniform(std::size_t n, std::size_t clients_per_qlan) {
        MultiQlanNetwork net;
        std::size_t next = 1;
        for (std::size_t q = 0; q < n; ++q) {
            QlanConfig cfg;
            cfg.orchestrator = "o" + std::to_string(q + 1);
            for (std::size_t i = 0; i < clients_per_qlan; ++i) cfg.clients.push_back("c" + std::to_string(next++));
            net.qlans.push_back(std::move(cfg));
        }
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) net.mesh.emplace_back(a, b);
        }
        return net;
    }

    void validate() const {
        if (qlans.empty()) throw Error(Errc::InvalidSize, "network has no QLAN");
        std::set<std::string> names;
        for (const auto &q : qlans) {
            q.validate();
            if (!names.insert("o/" + q.orchestrator).second) throw Error(Errc::InvalidParams, "duplicate orchestrator " + q.orchestrator);
            for (const auto &c : q.clients) {
                if (!names.insert("c/" + c).second) throw Error(Errc::InvalidParams, "client " + c + " appears in two QLANs");
            }
        }
        for (auto [a, b] : mesh) {
            if (a >= qlans.size() || b >= qlans.size() || a == b) throw Error(Errc::InvalidParams, "bad orchestrator mesh edge");
        }
    }

    bool mesh_adjacent(std::size_t a, std::size_t b) const {
        for (auto [x, y] : mesh) {
            if ((x == a && y == b) || (x == b && y == a)) return true;
        }
        return false;
    }

    bool mesh_connected() const {
        Graph g;
        for (std::size_t q = 0; q < qlans.size(); ++q) g.add_vertex(static_cast<VertexId>(q));
        for (auto [a, b] : mesh) g.add_edge(static_cast<VertexId>(a), static_cast<VertexId>(b));
        return is_connected(g);
    }

    /// QLAN index of a client, or nullopt.
    std::optional<std::size_t> qlan_of(const std::string &client) const {
        for (std::size_t q = 0; q < qlans.size(); ++q) {
            if (qlans[q].has_client(client)) return q;
        }
        return std::nullopt;
    }

    /// Vertex of each node in resources built by build_resource: every QLAN
    /// contributes its orchestrator followed by its clients.
    VertexId orchestrator_vertex(std::size_t q) const {
        VertexId v = 0;
        for (std::size_t i = 0; i < q; ++i) v += static_cast<VertexId>(1 + qlans[i].clients.size());
        return v;
    }

    VertexId client_vertex(const std::string &client) const {
        const auto q = qlan_of(client);
        if (!q) throw Error(Errc::UnknownVertex, "no client named " + client);
        const auto &cs = qlans[*q].clients;
        const auto idx = static_cast<VertexId>(std::find(cs.begin(), cs.end(), client) - cs.begin());
        return orchestrator_vertex(*q) + 1 + idx;
    }

    /// Physical channels: client stars plus the orchestrator mesh.
    Graph physical_topology() const { return build_resource_graph(*this); }

  private:
    static Graph build_resource_graph(const MultiQlanNetwork &net) {
        Graph g;
        for (std::size_t q = 0; q < net.qlans.size(); ++q) {
            const VertexId o = net.orchestrator_vertex(q);
            g.add_vertex(o, net.qlans[q].orchestrator_node().label());
            for (std::size_t i = 0; i < net.qlans[q].clients.size(); ++i) {
                const VertexId c = o + 1 + static_cast<VertexId>(i);
                g.add_vertex(c, NodeId::client(net.qlans[q].clients[i]).label());
                g.add_edge(o, c);
            }
        }
        for (auto [a, b] : net.mesh) g.add_edge(net.orchestrator_vertex(a), net.orchestrator_vertex(b));
        return g;
    }
};

enum class ResourceKind { BiStar, NStar };

/// Orchestrators as star centers over their own clients, centers linked along
/// the mesh. The bi-star is the two-QLAN case.
inline GraphState build_resource(const MultiQlanNetwork &net, ResourceKind kind, std::size_t n) {
    net.validate();
    if (n != net.qlans.size()) throw Error(Errc::InvalidSize, "resource size differs from the number of QLANs");
    if (kind == ResourceKind::BiStar && n != 2) throw Error(Errc::InvalidSize, "a bi-star spans exactly two QLANs");
    if (!net.mesh_connected()) throw Error(Errc::DisconnectedMesh, "orchestrator mesh is disconnected");
    const Graph g = net.physical_topology();
    Ownership own;
    for (VertexId v : g.vertices()) own.emplace(v, NodeId::from_label(g.label(v)));
    return from_graph(g, own);
}

struct PeerToPeer {
    bool pure = false;
};
struct RoleDelegation {
    std::string delegate;
};
struct ClientsHandover {
    std::size_t from = 0, to = 1;
};
struct Extranet {
    std::vector<std::pair<std::string, std::string>> pairs;
};
using PrototypeKind = std::variant<PeerToPeer, RoleDelegation, ClientsHandover, Extranet>;

inline std::string prototype_name(const PrototypeKind &k) {
    if (const auto *p = std::get_if<PeerToPeer>(&k)) return p->pure ? "peer_to_peer_pure" : "peer_to_peer_hierarchical";
    if (std::holds_alternative<RoleDelegation>(k)) return "role_delegation";
    if (std::holds_alternative<ClientsHandover>(k)) return "clients_handover";
    return "extranet";
}

namespace detail {

// Moves the star-center role of QLAN q onto `client`: the client inherits the
// orchestrator's neighborhood and the orchestrator vertex disappears.
inline void replace_center(Graph &g, VertexId center, VertexId client) {
    for (VertexId w : g.neighbors(center)) {
        if (w != client) g.add_edge(client, w);
    }
    g.erase_vertex(center);
}

}  // namespace detail

/// Exact labeled artificial topology each prototype must produce, expressed
/// on the vertex ids of the resource.
///
/// - hierarchical peer-to-peer: the resource itself (orchestrator links carry
///   inter-QLAN traffic);
/// - pure peer-to-peer: clients only, every client linked to every client of
///   each mesh-adjacent QLAN, no intra-QLAN links;
/// - role delegation: the delegate takes its orchestrator's place as center;
/// - clients hand-over: o_from disappears, o_to serves the clients of both
///   QLANs, and the handed-over clients end up mutually linked;
/// - extranet: in each requested pair's QLANs the named clients take the
///   center role, which links the two clients directly.
inline Graph target_adjacency(const MultiQlanNetwork &net, const GraphState &resource, const PrototypeKind &kind) {
    net.validate();
    Graph g = resource.graph;
    const std::size_t n = net.qlans.size();
    if (const auto *p = std::get_if<PeerToPeer>(&kind)) {
        if (!p->pure) return g;
        Graph out;
        for (std::size_t q = 0; q < n; ++q) {
            for (const auto &c : net.qlans[q].clients) out.add_vertex(net.client_vertex(c), NodeId::client(c).label());
        }
        for (auto [a, b] : net.mesh) {
            for (const auto &x : net.qlans[a].clients) {
                for (const auto &y : net.qlans[b].clients) out.add_edge(net.client_vertex(x), net.client_vertex(y));
            }
        }
        return out;
    }
    if (const auto *r = std::get_if<RoleDelegation>(&kind)) {
        const auto q = net.qlan_of(r->delegate);
        if (!q) throw Error(Errc::UnknownVertex, "no client named " + r->delegate);
        detail::replace_center(g, net.orchestrator_vertex(*q), net.client_vertex(r->delegate));
        return g;
    }
    if (const auto *h = std::get_if<ClientsHandover>(&kind)) {
        if (h->from >= n || h->to >= n || h->from == h->to) throw Error(Errc::InvalidParams, "hand-over needs two distinct QLANs");
        if (!net.mesh_adjacent(h->from, h->to)) throw Error(Errc::InvalidParams, "hand-over QLANs share no orchestrator channel");
        const VertexId of = net.orchestrator_vertex(h->from), ot = net.orchestrator_vertex(h->to);
        const auto &moved = net.qlans[h->from].clients;
        for (std::size_t i = 0; i < moved.size(); ++i) {
            const VertexId ci = net.client_vertex(moved[i]);
            g.add_edge(ot, ci);
            for (std::size_t j = i + 1; j < moved.size(); ++j) g.add_edge(ci, net.client_vertex(moved[j]));
        }
        g.erase_vertex(of);
        return g;
    }
    const auto &e = std::get<Extranet>(kind);
    if (e.pairs.empty()) throw Error(Errc::InvalidParams, "extranet needs at least one client pair");
    std::set<std::size_t> used;
    for (const auto &[x, y] : e.pairs) {
        const auto qx = net.qlan_of(x), qy = net.qlan_of(y);
        if (!qx || !qy) throw Error(Errc::UnknownVertex, "unknown extranet client");
        if (*qx == *qy) throw Error(Errc::InvalidParams, "extranet pair inside one QLAN");
        if (!net.mesh_adjacent(*qx, *qy)) throw Error(Errc::InvalidParams, "extranet QLANs share no orchestrator channel");
        if (!used.insert(*qx).second || !used.insert(*qy).second) throw Error(Errc::InvalidParams, "a QLAN appears in two extranet pairs");
    }
    for (const auto &[x, y] : e.pairs) {
        detail::replace_center(g, net.orchestrator_vertex(*net.qlan_of(x)), net.client_vertex(x));
        detail::replace_center(g, net.orchestrator_vertex(*net.qlan_of(y)), net.client_vertex(y));
    }
    return g;
}

/// One measurement of a recipe, in the graph basis. Executors translate it to
/// a physical basis through the current local-Clifford frame.
struct RecipeStep {
    VertexId vertex = 0;
    Axis basis = Axis::Z;
    std::optional<VertexId> b0;

    friend bool operator==(const RecipeStep &, const RecipeStep &) = default;
};
using Recipe = std::vector<RecipeStep>;

inline std::string recipe_to_text(const Recipe &r) {
    std::string out = "# qlan-recipe v1\n";
    for (const auto &s : r) {
        out += std::to_string(s.vertex) + ' ' + axis_char(s.basis);
        if (s.b0) out += ' ' + std::to_string(*s.b0);
        out += '\n';
    }
    return out;
}

inline Recipe parse_recipe(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    Recipe r;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        long long v = -1, b = -1;
        std::string basis;
        if (!(ls >> v >> basis) || v < 0 || basis.size() != 1) throw Error(Errc::ParseError, "recipe line " + std::to_string(lineno));
        RecipeStep s;
        s.vertex = static_cast<VertexId>(v);
        s.basis = axis_from_char(basis[0]);
        if (ls >> b) {
            if (b < 0 || s.basis != Axis::X) throw Error(Errc::ParseError, "recipe line " + std::to_string(lineno));
            s.b0 = static_cast<VertexId>(b);
        }
        std::string extra;
        if (ls >> extra) throw Error(Errc::ParseError, "trailing text on recipe line " + std::to_string(lineno));
        r.push_back(s);
    }
    return r;
}

enum class OpKind { Measurement, ClassicalCorrection };

struct LogEntry {
    NodeId actor;
    OpKind kind = OpKind::Measurement;
    VertexId vertex = 0;
    NodeId vertex_owner;
    std::uint64_t round = 0;

    friend bool operator==(const LogEntry &, const LogEntry &) = default;
};

/// Append-only record of who did what, and when.
class OperationLog {
  public:
    void append(LogEntry e) {
        if (!entries_.empty() && e.round < entries_.back().round) throw Error(Errc::InvariantViolation, "operation log rounds must not decrease");
        entries_.push_back(std::move(e));
    }

    /// Adds the measurement and the corrections it triggers. Corrections are
    /// applied by whoever holds the corrected qubit after a classical message.
    void record(const MeasurementRecord &m, const GraphState &before, std::uint64_t round) {
        append({m.owner, OpKind::Measurement, m.vertex, before.owner(m.vertex), round});
        for (const auto &c : m.corrections) {
            const NodeId &o = before.owner(c.vertex);
            append({o, OpKind::ClassicalCorrection, c.vertex, o, round});
        }
    }

    const std::vector<LogEntry> &entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

  private:
    std::vector<LogEntry> entries_;
};

/// True iff every quantum operation is performed by an orchestrator on a qubit
/// it holds; clients appear only as receivers of classical corrections.
inline bool verify_locality(const OperationLog &log) {
    for (const auto &e : log.entries()) {
        if (e.kind != OpKind::Measurement) continue;
        if (!e.actor.is_orchestrator() || e.actor != e.vertex_owner) return false;
    }
    return true;
}

struct SearchResult {
    bool feasible = false;
    Recipe recipe;
    std::size_t depth = 0;     // deepest level explored
    std::size_t explored = 0;  // distinct graphs visited
};

namespace detail {

inline std::vector<std::uint32_t> graph_key(const Graph &g) {
    std::vector<std::uint32_t> k;
    for (VertexId v : g.vertices()) k.push_back(v);
    k.push_back(UINT32_MAX);
    for (auto [a, b] : g.edges()) {
        k.push_back(a);
        k.push_back(b);
    }
    return k;
}

}  // namespace detail

/// Breadth-first search over graph-basis measurements of the `movable`
/// vertices for a sequence turning `start` into `target` (labels ignored).
///
/// Moves are tried in order of vertex id, then basis X < Y < Z, then b0; the
/// first recipe found is therefore the lexicographically least among the
/// shortest. Graphs already seen are skipped, which loses nothing: the graph
/// after a Pauli measurement depends only on the graph and the graph basis.
inline SearchResult search_graph_target(const Graph &start, const std::vector<VertexId> &movable, const Graph &target, std::size_t max_depth) {
    SearchResult res;
    struct Node {
        Graph g;
        std::optional<std::size_t> parent;
        RecipeStep step;
        std::size_t depth = 0;
    };
    std::vector<Node> nodes{{start, std::nullopt, {}, 0}};
    std::set<std::vector<std::uint32_t>> seen{detail::graph_key(start)};
    const auto goal = detail::graph_key(target);
    auto finish = [&](std::size_t idx) {
        res.feasible = true;
        for (std::optional<std::size_t> i = idx; i && nodes[*i].parent; i = nodes[*i].parent) res.recipe.push_back(nodes[*i].step);
        std::reverse(res.recipe.begin(), res.recipe.end());
        res.explored = seen.size();
        return res;
    };
    if (detail::graph_key(start) == goal) return finish(0);
    for (std::size_t head = 0; head < nodes.size(); ++head) {
        if (nodes[head].depth >= max_depth) continue;
        const Graph cur = nodes[head].g;
        const std::size_t depth = nodes[head].depth + 1;
        for (VertexId v : movable) {
            if (!cur.has_vertex(v)) continue;
            std::vector<RecipeStep> moves;
            if (cur.degree(v) == 0) {
                moves.push_back({v, Axis::X, std::nullopt});
            } else {
                for (VertexId b : cur.neighbors(v)) moves.push_back({v, Axis::X, b});
            }
            moves.push_back({v, Axis::Y, std::nullopt});
            moves.push_back({v, Axis::Z, std::nullopt});
            for (const auto &m : moves) {
                Graph next = measured_graph(cur, m.vertex, m.basis, m.b0);
                auto key = detail::graph_key(next);
                if (!seen.insert(key).second) continue;
                res.depth = std::max(res.depth, depth);
                nodes.push_back({std::move(next), head, m, depth});
                if (key == goal) return finish(nodes.size() - 1);
            }
        }
    }
    res.explored = seen.size();
    return res;
}

inline std::vector<VertexId> orchestrator_vertices(const GraphState &gs) {
    std::vector<VertexId> out;
    for (VertexId v : gs.graph.vertices()) {
        if (gs.owner(v).is_orchestrator()) out.push_back(v);
    }
    return out;
}

inline SearchResult search_realization(const MultiQlanNetwork &net, const GraphState &resource, const PrototypeKind &kind, std::size_t max_depth = 6) {
    return search_graph_target(resource.graph, orchestrator_vertices(resource), target_adjacency(net, resource, kind), max_depth);
}

/// Structured outcome of a bounded search.
struct FeasibilityReport {
    std::string kind;
    std::size_t n = 0;
    std::size_t depth = 0;
    bool feasible = false;
    std::size_t recipe_length = 0;
    std::size_t explored = 0;
    Recipe recipe;
};

inline FeasibilityReport feasibility_report(const MultiQlanNetwork &net, const GraphState &resource, const PrototypeKind &kind, std::size_t max_depth = 6) {
    const auto s = search_realization(net, resource, kind, max_depth);
    return {prototype_name(kind), net.qlans.size(), max_depth, s.feasible, s.recipe.size(), s.explored, s.recipe};
}

inline std::string report_csv_header() { return "kind,n,depth,feasible,recipe_length,explored\n"; }

inline std::string report_csv_row(const FeasibilityReport &r) {
    return r.kind + ',' + std::to_string(r.n) + ',' + std::to_string(r.depth) + ',' + (r.feasible ? "true" : "false") + ',' +
           std::to_string(r.recipe_length) + ',' + std::to_string(r.explored) + '\n';
}

struct Realization {
    GraphState state;
    ArtificialTopology topology;
    OperationLog log;
    Recipe recipe;
    std::vector<MeasurementRecord> trace;
};

/// Runs `recipe` on the resource, one LOCC round per measurement, choosing
/// each physical basis from the current frame.
inline Realization execute_recipe(const GraphState &resource, const Recipe &recipe, OutcomePolicy policy, std::uint64_t round = 0) {
    Realization r{resource, {}, {}, recipe, {}};
    for (const auto &step : recipe) {
        auto [next, rec] = measure_graph_axis(r.state, step.vertex, step.basis, policy, step.b0, round);
        r.log.record(rec, r.state, round);
        r.state = std::move(next);
        r.trace.push_back(std::move(rec));
        ++round;
    }
    r.topology = artificial_topology(r.state, true);
    return r;
}

namespace detail {

// Closed-form recipes; nullopt when none is known for this network shape.
inline std::optional<Recipe> scripted_recipe(const MultiQlanNetwork &net, const PrototypeKind &kind) {
    if (const auto *p = std::get_if<PeerToPeer>(&kind)) {
        if (!p->pure) return Recipe{};
        if (net.qlans.size() != 2) return std::nullopt;
        const VertexId o1 = net.orchestrator_vertex(0), o2 = net.orchestrator_vertex(1);
        return Recipe{{o1, Axis::X, o2}, {o2, Axis::Z, std::nullopt}};
    }
    if (const auto *r = std::get_if<RoleDelegation>(&kind)) {
        const auto q = *net.qlan_of(r->delegate);
        return Recipe{{net.orchestrator_vertex(q), Axis::X, net.client_vertex(r->delegate)}};
    }
    if (const auto *h = std::get_if<ClientsHandover>(&kind)) {
        if (net.qlans.size() != 2) return std::nullopt;
        return Recipe{{net.orchestrator_vertex(h->from), Axis::Y, std::nullopt}};
    }
    Recipe out;
    for (const auto &[x, y] : std::get<Extranet>(kind).pairs) {
        out.push_back({net.orchestrator_vertex(*net.qlan_of(x)), Axis::X, net.client_vertex(x)});
        out.push_back({net.orchestrator_vertex(*net.qlan_of(y)), Axis::X, net.client_vertex(y)});
    }
    return out;
}

}  // namespace detail

/// Reconfigures the shared resource into the prototype's artificial topology
/// with orchestrator measurements only. Uses the closed-form recipe when one
/// exists and falls back to bounded search.
inline Realization realize_prototype(const MultiQlanNetwork &net, const GraphState &resource, const PrototypeKind &kind, OutcomePolicy policy,
                                     std::size_t max_depth = 6) {
    const Graph target = target_adjacency(net, resource, kind);
    auto recipe = detail::scripted_recipe(net, kind);
    if (!recipe) {
        auto s = search_graph_target(resource.graph, orchestrator_vertices(resource), target, max_depth);
        if (!s.feasible) throw Error(Errc::RecipeUnavailable, prototype_name(kind) + " not reachable within depth " + std::to_string(max_depth));
        recipe = std::move(s.recipe);
    }
    auto r = execute_recipe(resource, *recipe, policy);
    if (!(r.topology == target)) throw Error(Errc::InvariantViolation, prototype_name(kind) + " recipe missed its target");
    return r;
}

}  // namespace qlan
