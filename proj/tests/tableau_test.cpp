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


#include "qlan/tableau.hpp"

#include <gtest/gtest.h>

#include "qlan/dense_state.hpp"
#include "qlan/random.hpp"

using namespace qlan;

namespace {

void random_circuit(std::size_t n, std::size_t gates, Rng &rng, StabilizerTableau &t, DenseState &d) {
    for (std::size_t g = 0; g < gates; ++g) {
        const std::size_t q = rng.below(n);
        switch (rng.below(4)) {
            case 0:
                t.h(q);
                d.h(q);
                break;
            case 1:
                t.s(q);
                d.s(q);
                break;
            case 2:
                if (n > 1) {
                    std::size_t r = rng.below(n - 1);
                    if (r >= q) ++r;
                    t.cx(q, r);
                    d.cx(q, r);
                }
                break;
            default:
                if (n > 1) {
                    std::size_t r = rng.below(n - 1);
                    if (r >= q) ++r;
                    t.cz(q, r);
                    d.cz(q, r);
                }
                break;
        }
    }
}

PauliString random_pauli(std::size_t n, Rng &rng) {
    PauliString p(n);
    for (std::size_t q = 0; q < n; ++q) {
        p.x[q] = rng.coin();
        p.z[q] = rng.coin();
    }
    p.negative = rng.coin();
    return p;
}

}  // namespace

TEST(tableau, fresh_state_is_all_zero) {
    StabilizerTableau t(3);
    EXPECT_EQ(t.canonical_text(), "+ZII\n+IZI\n+IIZ\n");
    const auto m = t.measure(1, Axis::Z, nullptr);
    EXPECT_TRUE(m.deterministic);
    EXPECT_EQ(m.outcome, 1);
    EXPECT_EQ(m.probability, 1.0);
}

TEST(tableau, pauli_string_parse_and_commutation) {
    const auto p = PauliString::parse("-XZIY");
    EXPECT_TRUE(p.negative);
    EXPECT_EQ(p.str(), "-XZIY");
    EXPECT_FALSE(PauliString::parse("XI").commutes(PauliString::parse("ZI")));
    EXPECT_TRUE(PauliString::parse("XX").commutes(PauliString::parse("ZZ")));
    EXPECT_THROW(PauliString::parse("XQ"), Error);
}

TEST(tableau, bell_state_via_h_and_cx) {
    StabilizerTableau t(2);
    t.h(0);
    t.cx(0, 1);
    EXPECT_TRUE(canonical_equal(t, StabilizerTableau::from_rows({PauliString::parse("Z_"), PauliString::parse("_X")},
                                                                 {PauliString::parse("XX"), PauliString::parse("ZZ")})));
    const auto m = t.measure(PauliString::parse("-YY"), nullptr);
    EXPECT_TRUE(m.deterministic);
    EXPECT_EQ(m.outcome, 1);
}

TEST(tableau, random_circuits_stabilize_dense_state) {
    Rng rng(21);
    for (int trial = 0; trial < 80; ++trial) {
        const std::size_t n = 1 + rng.below(6);
        StabilizerTableau t(n);
        DenseState d(n);
        random_circuit(n, 30, rng, t, d);
        for (const auto &s : t.stabilizers()) EXPECT_NEAR(d.expectation(s), 1.0, 1e-9) << s.str();
        for (const auto &s : t.canonical_stabilizers()) EXPECT_NEAR(d.expectation(s), 1.0, 1e-9) << s.str();
    }
}

TEST(tableau, measurement_matches_dense_born_rule) {
    Rng rng(22);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.below(5);
        StabilizerTableau t(n);
        DenseState d(n);
        random_circuit(n, 25, rng, t, d);
        const PauliString p = random_pauli(n, rng);
        if (p.is_identity()) continue;
        const int want = rng.coin() ? 1 : -1;
        DenseState dp = d;
        const double pd = dp.project(p, want);
        StabilizerTableau tm = t;
        const auto m = tm.measure(p, nullptr, want);
        EXPECT_NEAR(m.probability, pd, 1e-9);
        if (pd < 1e-9) {
            EXPECT_TRUE(canonical_equal(tm, t));  // impossible outcome leaves the state alone
            continue;
        }
        for (const auto &s : tm.stabilizers()) EXPECT_NEAR(dp.expectation(s), 1.0, 1e-9);
    }
}

TEST(tableau, sampled_outcomes_use_the_generator) {
    StabilizerTableau t(1);
    t.h(0);
    Rng a(1), b(1);
    StabilizerTableau t1 = t, t2 = t;
    EXPECT_EQ(t1.measure(0, Axis::Z, &a).outcome, t2.measure(0, Axis::Z, &b).outcome);
    StabilizerTableau t3 = t;
    const auto m = t3.measure(0, Axis::Z, nullptr);
    EXPECT_FALSE(m.deterministic);
    EXPECT_EQ(m.probability, 0.5);
}

TEST(tableau, gate_identities) {
    Rng rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + rng.below(4);
        StabilizerTableau t(n);
        DenseState d(n);
        random_circuit(n, 20, rng, t, d);
        // CZ = (I x H) CX (I x H); S^2 = Z; clifford apply = word.
        StabilizerTableau a = t, b = t;
        a.cz(0, 1);
        b.h(1);
        b.cx(0, 1);
        b.h(1);
        EXPECT_TRUE(canonical_equal(a, b));
        StabilizerTableau c = t, e = t;
        c.s(0);
        c.s(0);
        e.pauli(0, Axis::Z);
        EXPECT_TRUE(canonical_equal(c, e));
        const Clifford k = Clifford::from_index(static_cast<int>(rng.below(24)));
        StabilizerTableau f = t;
        f.apply(1, k);
        DenseState g = d;
        g.apply(1, k);
        for (const auto &s : f.stabilizers()) EXPECT_NEAR(g.expectation(s), 1.0, 1e-9);
    }
}

TEST(tableau, insert_qubit_builds_tensor_product) {
    StabilizerTableau t(2);
    t.h(0);
    t.cx(0, 1);
    const auto w = t.insert_qubit(1, {Axis::X, true});
    EXPECT_EQ(w.num_qubits(), 3u);
    DenseState d(2);
    d.h(0);
    d.cx(0, 1);
    const auto [a0, a1] = pauli_eigenvector({Axis::X, true});
    const DenseState dw = d.insert_qubit(1, a0, a1);
    for (const auto &s : w.stabilizers()) EXPECT_NEAR(dw.expectation(s), 1.0, 1e-12);
}

TEST(tableau, canonical_equal_checks_sizes_and_signs) {
    StabilizerTableau a(2), b(3);
    EXPECT_THROW(canonical_equal(a, b), Error);
    StabilizerTableau c(2);
    c.pauli(0, Axis::X);
    EXPECT_FALSE(canonical_equal(a, c));
    EXPECT_THROW(a.h(5), Error);
}
