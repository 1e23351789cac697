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
#include <optional>
#include <string>
#include <vector>

#include "qlan/dense_state.hpp"
#include "qlan/graph_state.hpp"
#include "qlan/tableau.hpp"

namespace qlan {

struct AuditOptions {
    std::size_t max_n = 6;            // exhaustive over connected labeled graphs up to this size
    std::size_t dense_samples = 200;  // random cases checked against the dense simulator
    std::size_t dense_max_n = 8;
    double tolerance = 1e-9;
};

struct AuditSummary {
    std::uint64_t graphs = 0;
    std::uint64_t cases = 0;
    std::uint64_t mismatches = 0;
    std::uint64_t dense_cases = 0;
    std::uint64_t dense_mismatches = 0;
    double max_dense_error = 0.0;
    std::string first_failure;

    bool ok() const { return mismatches == 0 && dense_mismatches == 0; }
};

namespace detail {

inline std::size_t position_of(const Graph &g, VertexId v) {
    const auto vs = g.vertices();
    return static_cast<std::size_t>(std::lower_bound(vs.begin(), vs.end(), v) - vs.begin());
}

inline GraphState audit_state(const Graph &g, Rng &rng) {
    Ownership own;
    for (VertexId v : g.vertices()) own.emplace(v, NodeId::client("q" + std::to_string(v)));
    GraphState gs = from_graph(g, own);
    for (auto &[v, c] : gs.frame) c = Clifford::from_index(rng.below(24));
    return gs;
}

inline std::string describe(const Graph &g, VertexId a, Axis axis, int outcome, std::optional<VertexId> b0) {
    std::string s = "edges{";
    for (auto [u, v] : g.edges()) s += std::to_string(u) + "-" + std::to_string(v) + " ";
    s += "} vertex " + std::to_string(a) + " basis " + axis_char(axis) + " outcome " + std::to_string(outcome);
    if (b0) s += " b0 " + std::to_string(*b0);
    return s;
}

}  // namespace detail

/// Compares one graph-rule measurement against projective measurement of the
/// stabilizer tableau. Returns nullopt when the outcome is impossible.
inline std::optional<bool> check_against_tableau(const GraphState &gs, VertexId a, PauliBasis basis, int outcome) {
    const std::size_t pos = detail::position_of(gs.graph, a);
    StabilizerTableau t = to_tableau(gs);
    const auto m = t.measure(pos, basis.axis, nullptr, outcome);
    if (m.probability == 0.0) return std::nullopt;
    const auto [out, rec] = measure_pauli(gs, a, basis, OutcomePolicy::force(outcome));
    const StabilizerTableau rebuilt = to_tableau(out).insert_qubit(pos, SignedAxis{basis.axis, outcome < 0});
    return canonical_equal(t, rebuilt) && std::abs(rec.probability - m.probability) < 1e-12;
}

/// Same check against the dense simulator; returns the larger of the
/// infidelity and the probability error, or nullopt for impossible outcomes.
inline std::optional<double> dense_error(const GraphState &gs, VertexId a, PauliBasis basis, int outcome) {
    const std::size_t n = gs.graph.num_vertices();
    const std::size_t pos = detail::position_of(gs.graph, a);
    DenseState psi = to_dense(gs);
    const double p = psi.project(PauliString::single(n, pos, {basis.axis, false}), outcome);
    if (p < 1e-12) return std::nullopt;
    const auto [out, rec] = measure_pauli(gs, a, basis, OutcomePolicy::force(outcome));
    const auto [a0, a1] = pauli_eigenvector({basis.axis, outcome < 0});
    const DenseState rebuilt = to_dense(out).insert_qubit(pos, a0, a1);
    return std::max(std::abs(1.0 - dense_fidelity(psi, rebuilt)), std::abs(p - rec.probability));
}

/// Exhaustive tableau audit plus sampled dense audit of the measurement rules.
inline AuditSummary audit_measurement_calculus(const AuditOptions &opt, std::uint64_t seed) {
    AuditSummary s;
    Rng rng(seed);
    Rng frames = rng.split(1);
    for (std::size_t n = 1; n <= opt.max_n; ++n) {
        const std::size_t pairs = n * (n - 1) / 2;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs); ++mask) {
            Graph g(n);
            std::size_t k = 0;
            for (VertexId i = 0; i < n; ++i) {
                for (VertexId j = i + 1; j < n; ++j, ++k) {
                    if ((mask >> k) & 1) g.add_edge(i, j);
                }
            }
            if (!is_connected(g)) continue;
            ++s.graphs;
            const GraphState gs = detail::audit_state(g, frames);
            for (VertexId a = 0; a < n; ++a) {
                for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
                    std::vector<std::optional<VertexId>> b0s{std::nullopt};
                    if (gs.frame_at(a).inverse().conjugate(axis).axis == Axis::X) {
                        for (VertexId b : g.neighbors(a)) b0s.push_back(b);
                        if (b0s.size() > 1) b0s.erase(b0s.begin());
                    }
                    for (int outcome : {1, -1}) {
                        for (auto b0 : b0s) {
                            const auto ok = check_against_tableau(gs, a, {axis, b0}, outcome);
                            if (!ok) continue;
                            ++s.cases;
                            if (!*ok) {
                                if (s.mismatches++ == 0) s.first_failure = detail::describe(g, a, axis, outcome, b0);
                            }
                        }
                    }
                }
            }
        }
    }
    Rng dense = rng.split(2);
    while (s.dense_cases < opt.dense_samples) {
        const std::size_t n = 2 + dense.below(opt.dense_max_n - 1);
        Graph g(n);
        for (VertexId i = 0; i < n; ++i) {
            for (VertexId j = i + 1; j < n; ++j) {
                if (dense.coin()) g.add_edge(i, j);
            }
        }
        if (!is_connected(g)) continue;
        const GraphState gs = detail::audit_state(g, dense);
        const auto a = static_cast<VertexId>(dense.below(n));
        const Axis axis = static_cast<Axis>(1 + dense.below(3));
        std::optional<VertexId> b0;
        const auto nb = g.neighbors(a);
        if (!nb.empty()) b0 = nb[dense.below(nb.size())];
        int outcome = dense.coin() ? -1 : 1;
        auto err = dense_error(gs, a, {axis, b0}, outcome);
        if (!err) {
            outcome = -outcome;
            err = dense_error(gs, a, {axis, b0}, outcome);
        }
        ++s.dense_cases;
        const double e = err ? *err : 1.0;
        s.max_dense_error = std::max(s.max_dense_error, e);
        if (e > opt.tolerance) {
            if (s.dense_mismatches++ == 0 && s.first_failure.empty()) s.first_failure = "dense " + detail::describe(g, a, axis, outcome, b0);
        }
    }
    return s;
}

}  // namespace qlan
