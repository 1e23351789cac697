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
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qlan/clifford.hpp"
#include "qlan/dense_state.hpp"
#include "qlan/error.hpp"
#include "qlan/graph.hpp"
#include "qlan/random.hpp"
#include "qlan/tableau.hpp"

namespace qlan {

enum class Role : std::uint8_t { Orchestrator, Client };

/// A network node that can hold qubits.
struct NodeId {
    Role role = Role::Client;
    std::string name;

    static NodeId orchestrator(std::string n) { return {Role::Orchestrator, std::move(n)}; }
    static NodeId client(std::string n) { return {Role::Client, std::move(n)}; }

    bool is_orchestrator() const { return role == Role::Orchestrator; }

    /// "orchestrator:<name>" or "client:<name>"; used as the vertex label.
    std::string label() const { return (is_orchestrator() ? "orchestrator:" : "client:") + name; }

    static NodeId from_label(const std::string &label) {
        const auto colon = label.find(':');
        if (colon == std::string::npos) throw Error(Errc::ParseError, "node label without role: " + label);
        const std::string role = label.substr(0, colon);
        if (role == "orchestrator") return orchestrator(label.substr(colon + 1));
        if (role == "client") return client(label.substr(colon + 1));
        throw Error(Errc::ParseError, "unknown node role: " + role);
    }

    friend auto operator<=>(const NodeId &, const NodeId &) = default;
};

using Ownership = std::map<VertexId, NodeId>;

/// Graph state with a local-Clifford frame: the represented state is
/// (tensor over v of frame[v]) |G>, where |G> = prod_{ab in E} CZ_ab |+>^n.
struct GraphState {
    Graph graph;
    std::map<VertexId, Clifford> frame;
    Ownership ownership;

    Clifford frame_at(VertexId v) const { return frame.at(v); }
    const NodeId &owner(VertexId v) const {
        auto it = ownership.find(v);
        if (it == ownership.end()) throw Error(Errc::UnknownVertex, "no owner for vertex " + std::to_string(v));
        return it->second;
    }

    /// Vertices held by `node`, in increasing id order.
    std::vector<VertexId> held_by(const NodeId &node) const {
        std::vector<VertexId> out;
        for (const auto &[v, o] : ownership) {
            if (o == node) out.push_back(v);
        }
        return out;
    }

    bool identity_frame() const {
        return std::all_of(frame.begin(), frame.end(), [](const auto &kv) { return kv.second.is_identity(); });
    }
};

inline GraphState from_graph(const Graph &g, const Ownership &ownership) {
    GraphState gs;
    gs.graph = g;
    for (VertexId v : g.vertices()) {
        auto it = ownership.find(v);
        if (it == ownership.end()) throw Error(Errc::MissingOwnership, "vertex " + std::to_string(v) + " has no owner");
        gs.ownership.emplace(v, it->second);
        gs.frame.emplace(v, Clifford::identity());
    }
    return gs;
}

/// Basis of a single-qubit Pauli measurement. `b0` selects the special
/// neighbor used by the X rule; by default the lowest-id neighbor is taken.
struct PauliBasis {
    Axis axis = Axis::Z;
    std::optional<VertexId> b0;
};

/// Forced outcomes make runs reproducible without a generator; sampled
/// outcomes draw from the injected generator only when the outcome is random.
struct OutcomePolicy {
    std::optional<int> forced;
    Rng *rng = nullptr;

    static OutcomePolicy force(int outcome) { return {outcome, nullptr}; }
    static OutcomePolicy sample(Rng &r) { return {std::nullopt, &r}; }
};

struct Correction {
    VertexId vertex;
    Clifford op;

    friend bool operator==(const Correction &, const Correction &) = default;
};

/// One single-qubit Pauli measurement and the frame updates it implies.
/// `corrections` are what the owners of the listed vertices would apply to
/// return to the bare graph state; they are folded into the frame lazily.
struct MeasurementRecord {
    VertexId vertex = 0;
    NodeId owner;
    Axis axis = Axis::Z;            // physical basis
    Axis effective_axis = Axis::Z;  // basis relative to the bare graph state
    int outcome = 1;
    double probability = 1.0;
    std::optional<VertexId> b0;
    std::vector<Correction> corrections;
    std::uint64_t tick = 0;

    friend bool operator==(const MeasurementRecord &, const MeasurementRecord &) = default;
};

namespace detail {

inline std::vector<VertexId> set_minus(const std::vector<VertexId> &a, const std::vector<VertexId> &b, VertexId skip) {
    std::vector<VertexId> out;
    for (VertexId v : a) {
        if (v != skip && !std::binary_search(b.begin(), b.end(), v)) out.push_back(v);
    }
    return out;
}

}  // namespace detail

/// Graph produced by measuring `a` in the given graph-basis axis.
inline Graph measured_graph(const Graph &g, VertexId a, Axis effective, std::optional<VertexId> b0 = std::nullopt) {
    switch (effective) {
        case Axis::Z:
            return delete_vertex(g, a);
        case Axis::Y: {
            Graph out = local_complement(g, a);
            out.erase_vertex(a);
            return out;
        }
        case Axis::X: {
            if (g.degree(a) == 0) return delete_vertex(g, a);
            const VertexId b = b0 ? *b0 : g.neighbors(a).front();
            if (!g.has_edge(a, b)) throw Error(Errc::InvalidB0, std::to_string(b) + " is not a neighbor of " + std::to_string(a));
            Graph out = local_complement(g, b);
            out.complement_neighborhood(a);
            out.erase_vertex(a);
            out.complement_neighborhood(b);
            return out;
        }
    }
    return g;
}

/// Measures the observable `basis.axis` on qubit `a` of the physical state.
///
/// The axis is first pulled back through the vertex frame to a graph-basis
/// axis; the graph then changes by vertex deletion and local complementation
/// (Z: G-a; Y: tau_a(G)-a; X: tau_b0(tau_a(tau_b0(G))-a)) and the byproduct
/// Cliffords are absorbed into the neighbors' frames.
inline std::pair<GraphState, MeasurementRecord> measure_pauli(const GraphState &gs, VertexId a, PauliBasis basis, OutcomePolicy policy,
                                                              std::uint64_t tick = 0) {
    const Graph &g = gs.graph;
    if (!g.has_vertex(a)) throw Error(Errc::UnknownVertex, "vertex " + std::to_string(a));
    if (basis.b0 && !g.has_edge(a, *basis.b0)) {
        throw Error(Errc::InvalidB0, std::to_string(*basis.b0) + " is not a neighbor of " + std::to_string(a));
    }
    const SignedAxis eff = gs.frame_at(a).inverse().conjugate(basis.axis);
    const int eff_sign = eff.negative ? -1 : 1;
    const auto na = g.neighbors(a);
    const bool deterministic = eff.axis == Axis::X && na.empty();

    int outcome;
    double probability;
    if (deterministic) {
        const int forced_value = eff_sign;  // graph-basis outcome is +1
        if (policy.forced && *policy.forced != forced_value) {
            throw Error(Errc::ImpossibleOutcome, "outcome " + std::to_string(*policy.forced) + " has probability 0");
        }
        outcome = forced_value;
        probability = 1.0;
    } else {
        if (policy.forced) {
            if (*policy.forced != 1 && *policy.forced != -1) throw Error(Errc::InvalidParams, "outcome must be +1 or -1");
            outcome = *policy.forced;
        } else {
            outcome = (policy.rng && policy.rng->coin()) ? -1 : 1;
        }
        probability = 0.5;
    }
    const int graph_outcome = outcome * eff_sign;

    MeasurementRecord rec;
    rec.vertex = a;
    rec.owner = gs.owner(a);
    rec.axis = basis.axis;
    rec.effective_axis = eff.axis;
    rec.outcome = outcome;
    rec.probability = probability;
    rec.tick = tick;

    std::vector<Correction> corr;
    switch (eff.axis) {
        case Axis::Z:
            if (graph_outcome < 0) {
                for (VertexId b : na) corr.push_back({b, Clifford::pauli(Axis::Z)});
            }
            break;
        case Axis::Y: {
            const Clifford u = graph_outcome > 0 ? Clifford::sqrt_minus_i_z() : Clifford::sqrt_plus_i_z();
            for (VertexId b : na) corr.push_back({b, u});
            break;
        }
        case Axis::X: {
            if (na.empty()) break;
            const VertexId b0 = basis.b0 ? *basis.b0 : na.front();
            rec.b0 = b0;
            const auto nb = g.neighbors(b0);
            if (graph_outcome > 0) {
                corr.push_back({b0, Clifford::sqrt_plus_i_y()});
                for (VertexId b : detail::set_minus(na, nb, b0)) corr.push_back({b, Clifford::pauli(Axis::Z)});
            } else {
                corr.push_back({b0, Clifford::sqrt_minus_i_y()});
                for (VertexId b : detail::set_minus(nb, na, a)) corr.push_back({b, Clifford::pauli(Axis::Z)});
            }
            break;
        }
    }

    GraphState out;
    out.graph = measured_graph(g, a, eff.axis, rec.b0);
    out.frame = gs.frame;
    out.ownership = gs.ownership;
    out.frame.erase(a);
    out.ownership.erase(a);
    for (const auto &c : corr) out.frame[c.vertex] = out.frame[c.vertex] * c.op;
    std::sort(corr.begin(), corr.end(), [](const Correction &x, const Correction &y) { return x.vertex < y.vertex; });
    rec.corrections = std::move(corr);
    return {std::move(out), std::move(rec)};
}

/// Physical axis whose pull-back through the frame at `a` is `effective`.
inline Axis physical_axis_for(const GraphState &gs, VertexId a, Axis effective) { return gs.frame_at(a).conjugate(effective).axis; }

/// Measures so that the graph-basis rule for `effective` applies.
inline std::pair<GraphState, MeasurementRecord> measure_graph_axis(const GraphState &gs, VertexId a, Axis effective, OutcomePolicy policy,
                                                                   std::optional<VertexId> b0 = std::nullopt, std::uint64_t tick = 0) {
    if (!gs.graph.has_vertex(a)) throw Error(Errc::UnknownVertex, "vertex " + std::to_string(a));
    return measure_pauli(gs, a, PauliBasis{physical_axis_for(gs, a, effective), b0}, policy, tick);
}

struct BellExtraction {
    GraphState state;
    std::vector<MeasurementRecord> trace;
    std::size_t z_cuts = 0;
    std::size_t y_contractions = 0;
};

/// Leaves u and v as an isolated edge: Z-measure every off-path neighbor of a
/// shortest u-v path, then Y-measure the interior path vertices in order.
inline BellExtraction extract_bell(const GraphState &gs, VertexId u, VertexId v, OutcomePolicy policy, std::uint64_t tick = 0) {
    if (u == v) throw Error(Errc::InvalidParams, "bell extraction needs two distinct vertices");
    const auto path = shortest_path(gs.graph, u, v);
    if (path.empty()) throw Error(Errc::Disconnected, std::to_string(u) + " and " + std::to_string(v));
    Graph::Row on_path, cut;
    for (VertexId p : path) on_path.set(p);
    for (VertexId p : path) cut |= gs.graph.row(p);
    cut &= ~on_path;

    BellExtraction res{gs, {}, 0, 0};
    for (VertexId c : Graph::ids_of(cut)) {
        auto [next, rec] = measure_graph_axis(res.state, c, Axis::Z, policy, std::nullopt, tick);
        res.state = std::move(next);
        res.trace.push_back(std::move(rec));
        ++res.z_cuts;
    }
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
        auto [next, rec] = measure_graph_axis(res.state, path[i], Axis::Y, policy, std::nullopt, tick);
        res.state = std::move(next);
        res.trace.push_back(std::move(rec));
        ++res.y_contractions;
    }
    return res;
}

/// Tableau of the represented state, qubit i being the i-th smallest vertex:
/// generators K_a = X_a prod_{b in N(a)} Z_b (destabilizers Z_a), conjugated
/// by the frame.
inline StabilizerTableau to_tableau(const GraphState &gs) {
    const auto vs = gs.graph.vertices();
    const std::size_t n = vs.size();
    std::map<VertexId, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index[vs[i]] = i;
    std::vector<PauliString> destab, stab;
    for (std::size_t i = 0; i < n; ++i) {
        PauliString d(n), s(n);
        d.z[i] = 1;
        s.x[i] = 1;
        for (VertexId b : gs.graph.neighbors(vs[i])) s.z[index.at(b)] = 1;
        destab.push_back(std::move(d));
        stab.push_back(std::move(s));
    }
    auto t = StabilizerTableau::from_rows(std::move(destab), std::move(stab));
    for (std::size_t i = 0; i < n; ++i) t.apply(i, gs.frame_at(vs[i]));
    return t;
}

/// Same state built gate by gate on the tableau: H on |0>, CZ per edge, frame.
inline StabilizerTableau circuit_tableau(const GraphState &gs) {
    const auto vs = gs.graph.vertices();
    std::map<VertexId, std::size_t> index;
    for (std::size_t i = 0; i < vs.size(); ++i) index[vs[i]] = i;
    StabilizerTableau t(vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i) t.h(i);
    for (auto [a, b] : gs.graph.edges()) t.cz(index.at(a), index.at(b));
    for (std::size_t i = 0; i < vs.size(); ++i) t.apply(i, gs.frame_at(vs[i]));
    return t;
}

/// State vector of the represented state (at most 12 vertices).
inline DenseState to_dense(const GraphState &gs) {
    const auto vs = gs.graph.vertices();
    std::map<VertexId, std::size_t> index;
    for (std::size_t i = 0; i < vs.size(); ++i) index[vs[i]] = i;
    DenseState s = DenseState::plus(vs.size());
    for (auto [a, b] : gs.graph.edges()) s.cz(index.at(a), index.at(b));
    for (std::size_t i = 0; i < vs.size(); ++i) s.apply(i, gs.frame_at(vs[i]));
    return s;
}

}  // namespace qlan
