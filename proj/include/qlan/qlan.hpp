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

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "qlan/error.hpp"
#include "qlan/graph.hpp"
#include "qlan/graph_state.hpp"

namespace qlan {

/// Classical-coordination timing of a QLAN, in microseconds.
struct Timing {
    double latency_us = 1.0;      // classical round trip L
    double coherence_us = 1000.0; // memory coherence time T
    double base_fidelity = 0.98;  // F0 of a freshly distributed link
};

/// Werner-type decay toward the maximally mixed floor:
/// F(t) = 1/4 + (F0 - 1/4) exp(-t / T).
inline double delivered_fidelity(const Timing &t, double elapsed_us) {
    return 0.25 + (t.base_fidelity - 0.25) * std::exp(-elapsed_us / t.coherence_us);
}

/// One orchestrator physically linked to every client (star).
struct QlanConfig {
    std::string orchestrator = "o";
    std::vector<std::string> clients;
    Timing timing;

    static QlanConfig with_clients(std::size_t n, std::string orchestrator_name = "o") {
        QlanConfig cfg;
        cfg.orchestrator = std::move(orchestrator_name);
        for (std::size_t i = 1; i <= n; ++i) cfg.clients.push_back("c" + std::to_string(i));
        return cfg;
    }

    NodeId orchestrator_node() const { return NodeId::orchestrator(orchestrator); }

    NodeId client_node(const std::string &name) const {
        if (!has_client(name)) throw Error(Errc::UnknownVertex, "no client named " + name);
        return NodeId::client(name);
    }

    bool has_client(const std::string &name) const {
        for (const auto &c : clients) {
            if (c == name) return true;
        }
        return false;
    }

    bool owns(const NodeId &n) const { return n.is_orchestrator() ? n.name == orchestrator : has_client(n.name); }

    void validate() const {
        if (clients.empty()) throw Error(Errc::InvalidParams, "qlan needs at least one client");
        std::set<std::string> seen;
        for (const auto &c : clients) {
            if (c.empty() || !seen.insert(c).second) throw Error(Errc::InvalidParams, "client names must be unique and non-empty");
        }
        if (!(timing.latency_us > 0.0) || !(timing.coherence_us > 0.0)) throw Error(Errc::InvalidParams, "latency and coherence time must be positive");
        if (!(timing.base_fidelity > 0.25 && timing.base_fidelity <= 1.0)) throw Error(Errc::InvalidParams, "base fidelity must lie in (0.25, 1]");
    }

    /// Physical channels: vertex 0 is the orchestrator, client i is vertex i.
    Graph physical_topology() const {
        Graph g;
        g.add_vertex(0, orchestrator_node().label());
        for (std::size_t i = 0; i < clients.size(); ++i) {
            const auto v = static_cast<VertexId>(i + 1);
            g.add_vertex(v, NodeId::client(clients[i]).label());
            g.add_edge(0, v);
        }
        return g;
    }
};

/// Connectivity induced by shared entanglement. Vertex labels name the owner.
using ArtificialTopology = Graph;

inline ArtificialTopology artificial_topology(const GraphState &gs, bool include_orchestrator = false) {
    std::vector<VertexId> keep;
    for (VertexId v : gs.graph.vertices()) {
        if (include_orchestrator || !gs.owner(v).is_orchestrator()) keep.push_back(v);
    }
    Graph out;
    for (VertexId v : keep) out.add_vertex(v, gs.owner(v).label());
    for (auto [a, b] : gs.graph.edges()) {
        if (out.has_vertex(a) && out.has_vertex(b)) out.add_edge(a, b);
    }
    return out;
}

enum class Policy { Centralized, Permissive };

/// Owner of each position of the linear state, in path order.
using RetentionPlan = std::vector<NodeId>;

/// c1, o, c2, o, ..., cN: every interior odd position stays at the orchestrator.
inline RetentionPlan alternating_plan(const QlanConfig &cfg) {
    RetentionPlan plan;
    for (std::size_t i = 0; i < cfg.clients.size(); ++i) {
        if (i > 0) plan.push_back(cfg.orchestrator_node());
        plan.push_back(NodeId::client(cfg.clients[i]));
    }
    return plan;
}

/// The orchestrator prepares |L> on k qubits and hands position i to plan[i].
///
/// Under the centralized policy a plan that keeps nothing at the orchestrator
/// is refused when it spans more than two clients, since any later
/// reconfiguration would need client-side measurements.
inline GraphState distribute_linear(const QlanConfig &cfg, std::size_t k, const RetentionPlan &plan, Policy policy = Policy::Centralized) {
    cfg.validate();
    if (k == 0) throw Error(Errc::InvalidSize, "linear state needs at least one qubit");
    if (plan.size() != k) throw Error(Errc::PlanMismatch, "plan covers " + std::to_string(plan.size()) + " of " + std::to_string(k) + " qubits");
    std::set<std::string> used;
    std::size_t retained = 0;
    for (const auto &owner : plan) {
        if (!cfg.owns(owner)) throw Error(Errc::PlanMismatch, "unknown node " + owner.label());
        if (owner.is_orchestrator()) {
            ++retained;
        } else if (!used.insert(owner.name).second) {
            throw Error(Errc::PlanMismatch, "client " + owner.name + " receives two qubits");
        }
    }
    if (policy == Policy::Centralized && retained == 0 && k > 2) {
        throw Error(Errc::CentralizedPolicy, "no qubit retained at the orchestrator");
    }
    Graph g;
    Ownership own;
    for (std::size_t i = 0; i < k; ++i) {
        const auto v = static_cast<VertexId>(i);
        g.add_vertex(v, plan[i].label());
        if (i > 0) g.add_edge(v - 1, v);
        own.emplace(v, plan[i]);
    }
    return from_graph(g, own);
}

namespace detail {

// Vertices of a path graph from one endpoint to the other, or nullopt.
inline std::optional<std::vector<VertexId>> path_order(const Graph &g) {
    const auto vs = g.vertices();
    if (vs.empty()) return std::vector<VertexId>{};
    if (g.num_edges() + 1 != vs.size() || !is_connected(g)) return std::nullopt;
    VertexId start = vs.front();
    for (VertexId v : vs) {
        if (g.degree(v) > 2) return std::nullopt;
        if (g.degree(v) <= 1) {
            start = v;
            break;
        }
    }
    std::vector<VertexId> order{start};
    std::optional<VertexId> prev;
    while (order.size() < vs.size()) {
        for (VertexId w : g.neighbors(order.back())) {
            if (!prev || w != *prev) {
                prev = order.back();
                order.push_back(w);
                break;
            }
        }
    }
    return order;
}

}  // namespace detail

struct TopologyStep {
    GraphState state;
    ArtificialTopology topology;
    std::vector<MeasurementRecord> trace;
};

/// Y-measures every orchestrator-held qubit of an alternating linear state,
/// contracting the path onto the clients in order. All measurements share one
/// LOCC round (`tick`).
inline TopologyStep star_to_bus(const GraphState &gs, OutcomePolicy policy, std::uint64_t tick = 0) {
    const auto order = detail::path_order(gs.graph);
    if (!order) throw Error(Errc::NotLinear, "resource is not a linear graph state");
    const auto &p = *order;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!gs.owner(p[i]).is_orchestrator()) continue;
        if (i == 0 || i + 1 == p.size()) throw Error(Errc::NotAlternating, "orchestrator qubit at a path end");
        if (gs.owner(p[i - 1]).is_orchestrator() || gs.owner(p[i + 1]).is_orchestrator()) {
            throw Error(Errc::NotAlternating, "adjacent orchestrator qubits");
        }
    }
    TopologyStep res{gs, {}, {}};
    for (VertexId v : p) {
        if (!gs.owner(v).is_orchestrator()) continue;
        auto [next, rec] = measure_graph_axis(res.state, v, Axis::Y, policy, std::nullopt, tick);
        res.state = std::move(next);
        res.trace.push_back(std::move(rec));
    }
    res.topology = artificial_topology(res.state);
    return res;
}

/// Identifies a vertex of one chain with a vertex of another (or the same).
struct MergePair {
    std::size_t chain_a = 0;
    VertexId a = 0;
    std::size_t chain_b = 0;
    VertexId b = 0;
};

struct DenseBuild {
    GraphState state;
    ArtificialTopology topology;
    std::vector<MeasurementRecord> trace;
    /// Global id of each chain vertex after relabeling: chain_ids[c][v].
    std::vector<std::map<VertexId, VertexId>> chain_ids;
};

/// Places the chains side by side (later chains relabeled above earlier ones),
/// merges the orchestrator-held vertex pairs of `plan`, and then, when
/// `collapse` is set, measures every remaining orchestrator qubit in that
/// graph basis in increasing id order.
inline DenseBuild build_dense(const QlanConfig &cfg, const std::vector<GraphState> &chains, const std::vector<MergePair> &plan,
                              std::optional<Axis> collapse, OutcomePolicy policy, std::uint64_t tick = 0) {
    cfg.validate();
    if (chains.empty()) throw Error(Errc::InvalidSize, "no chains to merge");
    DenseBuild res;
    GraphState &st = res.state;
    for (std::size_t c = 0; c < chains.size(); ++c) {
        const GraphState &ch = chains[c];
        std::map<VertexId, VertexId> ids;
        VertexId next = st.graph.next_id();
        for (VertexId v : ch.graph.vertices()) {
            if (!cfg.owns(ch.owner(v))) throw Error(Errc::PlanMismatch, "chain vertex owned outside this qlan");
            ids[v] = next;
            st.graph.add_vertex(next, ch.graph.label(v));
            st.frame[next] = ch.frame_at(v);
            st.ownership[next] = ch.owner(v);
            ++next;
        }
        for (auto [a, b] : ch.graph.edges()) st.graph.add_edge(ids.at(a), ids.at(b));
        res.chain_ids.push_back(std::move(ids));
    }
    for (const auto &m : plan) {
        if (m.chain_a >= chains.size() || m.chain_b >= chains.size()) throw Error(Errc::IndexOutOfRange, "merge plan chain index");
        auto lookup = [&](std::size_t c, VertexId v) {
            auto it = res.chain_ids[c].find(v);
            if (it == res.chain_ids[c].end()) throw Error(Errc::UnknownVertex, "chain " + std::to_string(c) + " vertex " + std::to_string(v));
            return it->second;
        };
        const VertexId ga = lookup(m.chain_a, m.a), gb = lookup(m.chain_b, m.b);
        if (!st.graph.has_vertex(ga) || !st.graph.has_vertex(gb)) throw Error(Errc::UnknownVertex, "vertex already merged away");
        if (!st.owner(ga).is_orchestrator() || !st.owner(gb).is_orchestrator()) {
            throw Error(Errc::NonLocalMerge, "merge pair involves a client-held vertex");
        }
        if (ga == gb || st.graph.has_edge(ga, gb)) throw Error(Errc::InvalidParams, "merge pair must be two non-adjacent vertices");
        if (!st.frame_at(ga).is_identity() || !st.frame_at(gb).is_identity()) throw Error(Errc::InvalidParams, "merge needs bare graph-state qubits");
        for (VertexId w : st.graph.neighbors(gb)) st.graph.add_edge(ga, w);
        st.graph.erase_vertex(gb);
        st.frame.erase(gb);
        st.ownership.erase(gb);
        for (auto &ids : res.chain_ids) {
            for (auto &[orig, global] : ids) {
                if (global == gb) global = ga;
            }
        }
    }
    if (collapse) {
        for (VertexId v : st.graph.vertices()) {
            if (!st.owner(v).is_orchestrator()) continue;
            auto [next, rec] = measure_graph_axis(st, v, *collapse, policy, std::nullopt, tick);
            st = std::move(next);
            res.trace.push_back(std::move(rec));
        }
    }
    res.topology = artificial_topology(st, !collapse.has_value());
    return res;
}

struct ProximityResult {
    GraphState state;
    std::vector<MeasurementRecord> trace;
    /// distance(u, v) before the first step and after every step.
    std::vector<std::size_t> distances;
};

/// Shrinks distance(u, v) to 1 by measuring orchestrator-held qubits on a
/// shortest path, one LOCC round per step. Each step takes the X measurement
/// (over interior vertex and b0) that leaves u and v closest; when no X
/// measurement shortens the path, or when `preferred` is Y, the first
/// interior vertex is Y-measured instead.
inline ProximityResult reduce_proximity(const GraphState &gs, VertexId u, VertexId v, OutcomePolicy policy, Axis preferred = Axis::X,
                                        std::uint64_t tick = 0) {
    if (preferred == Axis::Z) throw Error(Errc::InvalidParams, "Z measurements never shorten a path");
    ProximityResult res{gs, {}, {}};
    for (std::uint64_t step = 0;; ++step) {
        const auto path = shortest_path(res.state.graph, u, v);
        if (path.empty()) throw Error(Errc::Disconnected, std::to_string(u) + " and " + std::to_string(v));
        const std::size_t d = path.size() - 1;
        res.distances.push_back(d);
        if (d <= 1) break;
        for (std::size_t i = 1; i < d; ++i) {
            if (!res.state.owner(path[i]).is_orchestrator()) {
                throw Error(Errc::InteriorNotOrchestratorHeld, "vertex " + std::to_string(path[i]) + " on the shortest path is client-held");
            }
        }
        Axis axis = Axis::Y;
        VertexId target = path[1];
        std::optional<VertexId> b0;
        if (preferred == Axis::X) {
            std::size_t best = d;
            for (std::size_t i = 1; i < d; ++i) {
                for (VertexId b : res.state.graph.neighbors(path[i])) {
                    const Graph g2 = measured_graph(res.state.graph, path[i], Axis::X, b);
                    const auto d2 = distance(g2, u, v);
                    if (d2 && *d2 < best) {
                        best = *d2;
                        target = path[i];
                        b0 = b;
                        axis = Axis::X;
                    }
                }
            }
        }
        auto [next, rec] = measure_graph_axis(res.state, target, axis, policy, b0, tick + step);
        res.state = std::move(next);
        res.trace.push_back(std::move(rec));
    }
    return res;
}

struct PairRequest {
    std::string a, b;
};
struct DisconnectRequest {
    std::string client;
};
enum class TopologyTarget { Bus, Proximity };
struct TopologyChangeRequest {
    TopologyTarget target = TopologyTarget::Bus;
    std::string a, b;  // endpoints for proximity reduction
};
using TrafficRequest = std::variant<PairRequest, DisconnectRequest, TopologyChangeRequest>;

/// Orchestration clock; one tick per LOCC round.
struct Clock {
    double now_us = 0.0;
    std::uint64_t round = 0;
};

struct ServedLink {
    std::string a, b;
    VertexId u = 0, v = 0;
    std::size_t rounds = 0;
    double elapsed_us = 0.0;
    double fidelity = 0.0;
    std::vector<MeasurementRecord> trace;
};

struct ServeResult {
    GraphState state;
    std::optional<ServedLink> link;
    std::vector<MeasurementRecord> trace;
    std::size_t rounds = 0;
    double elapsed_us = 0.0;
};

namespace detail {

inline VertexId client_vertex(const QlanConfig &cfg, const GraphState &gs, const std::string &name) {
    if (!cfg.has_client(name)) throw Error(Errc::Unservable, "unknown client " + name);
    const auto held = gs.held_by(NodeId::client(name));
    if (held.empty()) throw Error(Errc::Unservable, "client " + name + " holds no qubit");
    return held.front();
}

}  // namespace detail

/// Serves one request against the live state and advances the clock.
///
/// Pair requests run Bell extraction with all of its measurements batched in
/// a single LOCC round; the delivered fidelity decays with the elapsed
/// classical time. Disconnections Z-cut the client's qubits.
inline ServeResult serve_request(const QlanConfig &cfg, const GraphState &gs, const TrafficRequest &req, Clock &clock, OutcomePolicy policy) {
    cfg.validate();
    ServeResult res{gs, std::nullopt, {}, 0, 0.0};
    const double L = cfg.timing.latency_us;
    if (const auto *pr = std::get_if<PairRequest>(&req)) {
        const VertexId u = detail::client_vertex(cfg, gs, pr->a);
        const VertexId v = detail::client_vertex(cfg, gs, pr->b);
        if (u == v) throw Error(Errc::Unservable, "pair request needs two different clients");
        if (!distance(gs.graph, u, v)) throw Error(Errc::Unservable, pr->a + " and " + pr->b + " are not connected");
        auto ex = extract_bell(gs, u, v, policy, clock.round);
        res.rounds = ex.trace.empty() ? 0 : 1;
        res.elapsed_us = static_cast<double>(res.rounds) * L;
        ServedLink link;
        link.a = pr->a;
        link.b = pr->b;
        link.u = u;
        link.v = v;
        link.rounds = res.rounds;
        link.elapsed_us = res.elapsed_us;
        link.fidelity = delivered_fidelity(cfg.timing, res.elapsed_us);
        link.trace = ex.trace;
        res.state = std::move(ex.state);
        res.trace = std::move(ex.trace);
        res.link = std::move(link);
    } else if (const auto *dr = std::get_if<DisconnectRequest>(&req)) {
        if (!cfg.has_client(dr->client)) throw Error(Errc::Unservable, "unknown client " + dr->client);
        for (VertexId v : gs.held_by(NodeId::client(dr->client))) {
            auto [next, rec] = measure_graph_axis(res.state, v, Axis::Z, policy, std::nullopt, clock.round);
            res.state = std::move(next);
            res.trace.push_back(std::move(rec));
        }
        res.rounds = res.trace.empty() ? 0 : 1;
        res.elapsed_us = static_cast<double>(res.rounds) * L;
    } else {
        const auto &tc = std::get<TopologyChangeRequest>(req);
        if (tc.target == TopologyTarget::Bus) {
            auto step = star_to_bus(gs, policy, clock.round);
            res.rounds = step.trace.empty() ? 0 : 1;
            res.state = std::move(step.state);
            res.trace = std::move(step.trace);
        } else {
            const VertexId u = detail::client_vertex(cfg, gs, tc.a);
            const VertexId v = detail::client_vertex(cfg, gs, tc.b);
            auto pr = reduce_proximity(gs, u, v, policy, Axis::X, clock.round);
            res.rounds = pr.trace.size();
            res.state = std::move(pr.state);
            res.trace = std::move(pr.trace);
        }
        res.elapsed_us = static_cast<double>(res.rounds) * L;
    }
    clock.now_us += res.elapsed_us;
    clock.round += res.rounds;
    return res;
}

}  // namespace qlan
