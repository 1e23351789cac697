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


#include "qlan/graph_state.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "qlan/audit.hpp"

using namespace qlan;

namespace {

Ownership clients_for(const Graph &g) {
    Ownership own;
    for (VertexId v : g.vertices()) own.emplace(v, NodeId::client("c" + std::to_string(v)));
    return own;
}

GraphState state_of(const Graph &g) { return from_graph(g, clients_for(g)); }

std::set<Edge> edges(const Graph &g) {
    auto e = g.edges();
    return {e.begin(), e.end()};
}

// Analytic GHZ_n = (|0..0> + |1..1>)/sqrt(2).
DenseState ghz(std::size_t n) {
    std::vector<std::complex<double>> a(std::size_t{1} << n, 0.0);
    a.front() = a.back() = 1.0 / std::sqrt(2.0);
    return DenseState::from_amplitudes(n, a);
}

// Largest squared Schmidt coefficient of a two-qubit pure state; 1/2 iff
// maximally entangled.
double max_schmidt_weight(const DenseState &d) {
    const auto &a = d.amplitudes();
    // Reduced density matrix of qubit 0: rho = M M^dagger with M[i][j] = a[i + 2j].
    const std::complex<double> r00 = std::norm(a[0]) + std::norm(a[2]);
    const std::complex<double> r11 = std::norm(a[1]) + std::norm(a[3]);
    const std::complex<double> r01 = a[0] * std::conj(a[1]) + a[2] * std::conj(a[3]);
    const double tr = (r00 + r11).real(), det = (r00 * r11 - r01 * std::conj(r01)).real();
    return 0.5 * (tr + std::sqrt(std::max(0.0, tr * tr - 4 * det)));
}

}  // namespace

TEST(graph_state, from_graph_requires_ownership) {
    const Graph g = build(Topology::path(3));
    Ownership partial{{0, NodeId::client("a")}};
    try {
        from_graph(g, partial);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), Errc::MissingOwnership);
    }
    const GraphState gs = state_of(g);
    EXPECT_TRUE(gs.identity_frame());
    EXPECT_EQ(gs.frame.size(), 3u);
}

TEST(graph_state, node_labels_round_trip) {
    for (const auto &n : {NodeId::orchestrator("o"), NodeId::client("c12")}) EXPECT_EQ(NodeId::from_label(n.label()), n);
    EXPECT_THROW(NodeId::from_label("nobody"), Error);
    EXPECT_THROW(NodeId::from_label("router:r"), Error);
}

TEST(graph_state, linear_state_matches_circuit) {
    for (std::size_t n = 1; n <= 6; ++n) {
        const GraphState gs = state_of(build(Topology::path(n)));
        DenseState d = DenseState::plus(n);
        for (std::size_t i = 0; i + 1 < n; ++i) d.cz(i, i + 1);
        EXPECT_NEAR(dense_fidelity(to_dense(gs), d), 1.0, 1e-12);
        EXPECT_TRUE(canonical_equal(to_tableau(gs), circuit_tableau(gs)));
    }
}

TEST(graph_state, empty_graph_is_product_of_plus) {
    const GraphState gs = state_of(Graph(3));
    EXPECT_EQ(to_tableau(gs).canonical_text(), "+XII\n+IXI\n+IIX\n");
    EXPECT_NEAR(dense_fidelity(to_dense(gs), DenseState::plus(3)), 1.0, 1e-12);
}

TEST(graph_state, single_edge_generators) {
    const GraphState gs = state_of(build(Topology::path(2)));
    EXPECT_EQ(to_tableau(gs).canonical_text(), "+XZ\n+ZX\n");
}

TEST(graph_state, star_is_ghz_after_hadamards_on_leaves) {
    for (std::size_t n : {3u, 4u, 5u}) {
        DenseState d = to_dense(state_of(build(Topology::star(n))));
        for (std::size_t q = 1; q < n; ++q) d.h(q);
        EXPECT_NEAR(dense_fidelity(d, ghz(n)), 1.0, 1e-12);
    }
}

TEST(graph_state, tableau_and_dense_agree_with_random_frames) {
    Rng rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + rng.below(8);
        Graph g(n);
        for (VertexId i = 0; i < n; ++i) {
            for (VertexId j = i + 1; j < n; ++j) {
                if (rng.coin()) g.add_edge(i, j);
            }
        }
        GraphState gs = state_of(g);
        for (auto &[v, c] : gs.frame) c = Clifford::from_index(static_cast<int>(rng.below(24)));
        const auto t = to_tableau(gs);
        EXPECT_TRUE(canonical_equal(t, circuit_tableau(gs)));
        const DenseState d = to_dense(gs);
        for (const auto &s : t.stabilizers()) EXPECT_NEAR(d.expectation(s), 1.0, 1e-9);
        EXPECT_NEAR(dense_fidelity(d, DenseState::from_tableau(t)), 1.0, 1e-9);
    }
}

TEST(graph_state, z_rule_deletes_vertex) {
    const Graph g = build(Topology::cycle(5));
    for (int m : {1, -1}) {
        const auto [out, rec] = measure_pauli(state_of(g), 2, {Axis::Z, std::nullopt}, OutcomePolicy::force(m));
        EXPECT_EQ(out.graph, delete_vertex(g, 2));
        EXPECT_EQ(rec.outcome, m);
        EXPECT_EQ(rec.probability, 0.5);
        EXPECT_EQ(rec.corrections.size(), m > 0 ? 0u : 2u);
        EXPECT_FALSE(out.ownership.count(2));
        EXPECT_FALSE(out.frame.count(2));
    }
}

TEST(graph_state, y_on_path_midpoint_joins_ends) {
    const auto [out, rec] = measure_pauli(state_of(build(Topology::path(3))), 1, {Axis::Y, std::nullopt}, OutcomePolicy::force(1));
    EXPECT_EQ(edges(out.graph), (std::set<Edge>{{0, 2}}));
    EXPECT_EQ(rec.effective_axis, Axis::Y);
    EXPECT_EQ(rec.corrections.size(), 2u);
}

TEST(graph_state, y_rule_on_path4_matches_tableau) {
    const GraphState gs = state_of(build(Topology::path(4)));
    for (int m : {1, -1}) {
        const auto ok = check_against_tableau(gs, 2, {Axis::Y, std::nullopt}, m);
        ASSERT_TRUE(ok.has_value());
        EXPECT_TRUE(*ok);
    }
}

TEST(graph_state, x_on_isolated_vertex) {
    Graph g = build(Topology::path(2));
    g.add_vertex(2);
    GraphState gs = state_of(g);
    const auto [out, rec] = measure_pauli(gs, 2, {Axis::X, std::nullopt}, OutcomePolicy{});
    EXPECT_EQ(out.graph, delete_vertex(g, 2));
    EXPECT_EQ(rec.outcome, 1);
    EXPECT_EQ(rec.probability, 1.0);
    EXPECT_THROW(measure_pauli(gs, 2, {Axis::X, std::nullopt}, OutcomePolicy::force(-1)), Error);

    // With a Hadamard frame the same physical X is a graph-basis Z: random.
    gs.frame[2] = Clifford::hadamard();
    const auto [out2, rec2] = measure_pauli(gs, 2, {Axis::X, std::nullopt}, OutcomePolicy::force(-1));
    EXPECT_EQ(rec2.effective_axis, Axis::Z);
    EXPECT_EQ(rec2.probability, 0.5);
    EXPECT_EQ(out2.graph, delete_vertex(g, 2));
}

TEST(graph_state, x_rule_graph_formula) {
    // Star centered at 0 with leaves 1..3, X on a leaf with b0 = center.
    const Graph g = build(Topology::star(4));
    const auto [out, rec] = measure_pauli(state_of(g), 1, {Axis::X, VertexId{0}}, OutcomePolicy::force(1));
    Graph want = local_complement(g, 0);
    want.complement_neighborhood(1);
    want.erase_vertex(1);
    want.complement_neighborhood(0);
    EXPECT_EQ(out.graph, want);
    EXPECT_EQ(rec.b0, VertexId{0});
}

TEST(graph_state, invalid_b0_and_unknown_vertex) {
    const GraphState gs = state_of(build(Topology::path(4)));
    try {
        measure_pauli(gs, 0, {Axis::X, VertexId{3}}, OutcomePolicy::force(1));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), Errc::InvalidB0);
    }
    try {
        measure_pauli(gs, 9, {Axis::Z, std::nullopt}, OutcomePolicy::force(1));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), Errc::UnknownVertex);
    }
}

TEST(graph_state, exhaustive_rules_match_tableau_up_to_five_vertices) {
    AuditOptions opt;
    opt.max_n = 5;
    opt.dense_samples = 100;
    opt.dense_max_n = 7;
    const auto s = audit_measurement_calculus(opt, 2024);
    EXPECT_EQ(s.graphs, 1 + 1 + 4 + 38 + 728u);  // connected labeled graphs on 1..5 vertices
    EXPECT_GT(s.cases, 30000u);
    EXPECT_EQ(s.mismatches, 0u) << s.first_failure;
    EXPECT_EQ(s.dense_mismatches, 0u) << s.first_failure;
}

TEST(graph_state, different_b0_give_the_same_state) {
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 3 + rng.below(4);
        Graph g(n);
        for (VertexId i = 0; i < n; ++i) {
            for (VertexId j = i + 1; j < n; ++j) {
                if (rng.coin()) g.add_edge(i, j);
            }
        }
        const auto a = static_cast<VertexId>(rng.below(n));
        if (g.degree(a) < 2) continue;
        GraphState gs = state_of(g);
        for (auto &[v, c] : gs.frame) c = Clifford::from_index(static_cast<int>(rng.below(24)));
        const Axis phys = physical_axis_for(gs, a, Axis::X);
        const int m = rng.coin() ? 1 : -1;
        std::optional<StabilizerTableau> first;
        for (VertexId b0 : g.neighbors(a)) {
            const auto [out, rec] = measure_pauli(gs, a, {phys, b0}, OutcomePolicy::force(m));
            const auto t = to_tableau(out);
            if (!first) {
                first = t;
            } else {
                EXPECT_TRUE(canonical_equal(*first, t));
            }
        }
    }
}

TEST(graph_state, sampled_outcomes_follow_born_rule) {
    const GraphState gs = state_of(build(Topology::star(4)));
    Rng rng(9);
    int plus = 0;
    const int shots = 4000;
    for (int i = 0; i < shots; ++i) {
        const auto [out, rec] = measure_pauli(gs, 0, {Axis::X, std::nullopt}, OutcomePolicy::sample(rng));
        plus += rec.outcome > 0;
    }
    EXPECT_NEAR(static_cast<double>(plus) / shots, 0.5, 0.03);
}

TEST(graph_state, measurement_never_grows_the_graph) {
    Rng rng(10);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.below(7);
        Graph g(n);
        for (VertexId i = 0; i < n; ++i) {
            for (VertexId j = i + 1; j < n; ++j) {
                if (rng.coin()) g.add_edge(i, j);
            }
        }
        const auto a = static_cast<VertexId>(rng.below(n));
        const Axis axis = static_cast<Axis>(1 + rng.below(3));
        const auto [out, rec] = measure_pauli(state_of(g), a, {axis, std::nullopt}, OutcomePolicy::sample(rng));
        EXPECT_EQ(out.graph.num_vertices(), n - 1);
        if (axis == Axis::Z) {
            for (auto [u, v] : out.graph.edges()) EXPECT_TRUE(g.has_edge(u, v));
        }
    }
}

TEST(graph_state, bell_extraction_on_bus) {
    // Six clients on a path; extract (c2, c5) = vertices 1 and 4.
    const GraphState bus = state_of(build(Topology::path(6)));
    const auto ex = extract_bell(bus, 1, 4, OutcomePolicy::force(1));
    EXPECT_EQ(ex.z_cuts, 2u);
    EXPECT_EQ(ex.y_contractions, 2u);
    EXPECT_EQ(edges(ex.state.graph), (std::set<Edge>{{1, 4}}));
    EXPECT_EQ(ex.state.graph.vertices(), (std::vector<VertexId>{1, 4}));
    EXPECT_NEAR(max_schmidt_weight(to_dense(ex.state)), 0.5, 1e-12);
}

TEST(graph_state, bell_extraction_trivial_and_errors) {
    const GraphState pair = state_of(build(Topology::path(2)));
    const auto ex = extract_bell(pair, 0, 1, OutcomePolicy::force(1));
    EXPECT_TRUE(ex.trace.empty());
    EXPECT_EQ(ex.state.graph, pair.graph);

    const auto mid = extract_bell(state_of(build(Topology::path(3))), 0, 2, OutcomePolicy::force(-1));
    EXPECT_EQ(mid.y_contractions, 1u);
    EXPECT_EQ(mid.z_cuts, 0u);
    EXPECT_NEAR(max_schmidt_weight(to_dense(mid.state)), 0.5, 1e-12);

    Graph two(4);
    two.add_edge(0, 1);
    two.add_edge(2, 3);
    try {
        extract_bell(state_of(two), 0, 3, OutcomePolicy::force(1));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), Errc::Disconnected);
    }
}

TEST(graph_state, bell_extraction_random_graphs_yield_maximal_entanglement) {
    Rng rng(12);
    int checked = 0;
    while (checked < 150) {
        const std::size_t n = 2 + rng.below(7);
        Graph g(n);
        for (VertexId i = 0; i < n; ++i) {
            for (VertexId j = i + 1; j < n; ++j) {
                if (rng.uniform() < 0.4) g.add_edge(i, j);
            }
        }
        const auto u = static_cast<VertexId>(rng.below(n));
        const auto v = static_cast<VertexId>(rng.below(n));
        if (u == v || !distance(g, u, v)) continue;
        GraphState gs = state_of(g);
        for (auto &[w, c] : gs.frame) c = Clifford::from_index(static_cast<int>(rng.below(24)));
        const auto ex = extract_bell(gs, u, v, OutcomePolicy::sample(rng));
        ASSERT_EQ(ex.state.graph.neighbors(u), std::vector<VertexId>{v});
        ASSERT_EQ(ex.state.graph.neighbors(v), std::vector<VertexId>{u});
        GraphState pair = ex.state;
        pair.graph = induced_subgraph(ex.state.graph, {std::min(u, v), std::max(u, v)});
        for (auto it = pair.frame.begin(); it != pair.frame.end();) it = (it->first == u || it->first == v) ? std::next(it) : pair.frame.erase(it);
        EXPECT_NEAR(max_schmidt_weight(to_dense(pair)), 0.5, 1e-9);
        ++checked;
    }
}
