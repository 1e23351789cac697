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


#include "qlan/clifford.hpp"

#include <gtest/gtest.h>

#include <complex>
#include <set>

using namespace qlan;

namespace {

using C = std::complex<double>;

Matrix2 pauli_matrix(Axis a) {
    const C i(0, 1);
    switch (a) {
        case Axis::X: return {0, 1, 1, 0};
        case Axis::Y: return {0, -i, i, 0};
        case Axis::Z: break;
    }
    return {1, 0, 0, -1};
}

Matrix2 mul(const Matrix2 &a, const Matrix2 &b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Matrix2 dagger(const Matrix2 &a) { return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])}; }

bool close(const Matrix2 &a, const Matrix2 &b, C scale = 1.0) {
    for (int k = 0; k < 4; ++k) {
        if (std::abs(a[k] - scale * b[k]) > 1e-12) return false;
    }
    return true;
}

// Equal up to a global phase.
bool same_up_to_phase(const Matrix2 &a, const Matrix2 &b) {
    int k = 0;
    while (std::abs(b[k]) < 1e-9) ++k;
    return close(a, b, a[k] / b[k]);
}

// Matrix built independently from the gate word.
Matrix2 from_word(const std::string &w) {
    const double r = 1.0 / std::sqrt(2.0);
    const Matrix2 h{r, r, r, -r};
    const Matrix2 s{1, 0, 0, C(0, 1)};
    Matrix2 m{1, 0, 0, 1};
    for (char c : w) m = mul(c == 'H' ? h : s, m);
    return m;
}

}  // namespace

TEST(clifford, group_has_24_distinct_elements) {
    std::set<std::pair<int, int>> images;
    for (int i = 0; i < Clifford::kGroupSize; ++i) {
        const Clifford c = Clifford::from_index(i);
        const auto x = c.conjugate(Axis::X), z = c.conjugate(Axis::Z);
        images.emplace(static_cast<int>(x.axis) * 2 + x.negative, static_cast<int>(z.axis) * 2 + z.negative);
        EXPECT_EQ(Clifford::from_images(x, z), c);
        EXPECT_EQ(c.index(), i);
    }
    EXPECT_EQ(images.size(), 24u);
    EXPECT_TRUE(Clifford::identity().is_identity());
    EXPECT_THROW(Clifford::from_index(24), Error);
}

TEST(clifford, matrices_conjugate_paulis_to_their_images) {
    for (int i = 0; i < Clifford::kGroupSize; ++i) {
        const Clifford c = Clifford::from_index(i);
        const Matrix2 m = c.matrix();
        EXPECT_TRUE(same_up_to_phase(m, from_word(c.word()))) << c.name();
        for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
            const auto img = c.conjugate(a);
            EXPECT_TRUE(close(mul(mul(m, pauli_matrix(a)), dagger(m)), pauli_matrix(img.axis), img.negative ? -1.0 : 1.0)) << c.name();
        }
    }
}

TEST(clifford, multiplication_and_inverse_agree_with_matrices) {
    for (int i = 0; i < Clifford::kGroupSize; ++i) {
        const Clifford a = Clifford::from_index(i);
        EXPECT_TRUE((a * a.inverse()).is_identity());
        EXPECT_TRUE((a.inverse() * a).is_identity());
        for (int j = 0; j < Clifford::kGroupSize; ++j) {
            const Clifford b = Clifford::from_index(j);
            EXPECT_TRUE(same_up_to_phase((a * b).matrix(), mul(a.matrix(), b.matrix())));
        }
    }
}

TEST(clifford, named_square_roots) {
    // sqrt(-iZ) = diag(1, i) up to phase; sqrt(+iY) = exp(i pi/4 Y).
    const C i(0, 1);
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_TRUE(same_up_to_phase(Clifford::sqrt_minus_i_z().matrix(), {1, 0, 0, i}));
    EXPECT_TRUE(same_up_to_phase(Clifford::sqrt_plus_i_z().matrix(), {1, 0, 0, -i}));
    EXPECT_TRUE(same_up_to_phase(Clifford::sqrt_plus_i_y().matrix(), {r, r, -r, r}));
    EXPECT_TRUE(same_up_to_phase(Clifford::sqrt_minus_i_y().matrix(), {r, -r, r, r}));
    EXPECT_EQ(Clifford::sqrt_minus_i_z(), Clifford::phase());
    EXPECT_EQ(Clifford::sqrt_minus_i_z() * Clifford::sqrt_plus_i_z(), Clifford::identity());
    EXPECT_EQ(Clifford::sqrt_plus_i_y() * Clifford::sqrt_plus_i_y(), Clifford::pauli(Axis::Y));
    EXPECT_EQ(Clifford::hadamard().conjugate(Axis::Y), (SignedAxis{Axis::Y, true}));
}

TEST(clifford, axis_chars_round_trip) {
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) EXPECT_EQ(axis_from_char(axis_char(a)), a);
    EXPECT_THROW(axis_from_char('Q'), Error);
}
