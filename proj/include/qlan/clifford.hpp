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

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <deque>
#include <string>
#include <string_view>

#include "qlan/error.hpp"

namespace qlan {

enum class Axis : std::uint8_t { X = 1, Y = 2, Z = 3 };

constexpr char axis_char(Axis a) { return a == Axis::X ? 'X' : a == Axis::Y ? 'Y' : 'Z'; }

inline Axis axis_from_char(char c) {
    switch (c) {
        case 'X': case 'x': return Axis::X;
        case 'Y': case 'y': return Axis::Y;
        case 'Z': case 'z': return Axis::Z;
        default: throw Error(Errc::ParseError, std::string("not a Pauli axis: ") + c);
    }
}

/// +P or -P for a single-qubit Pauli P.
struct SignedAxis {
    Axis axis = Axis::Z;
    bool negative = false;

    friend bool operator==(SignedAxis, SignedAxis) = default;
};

using Matrix2 = std::array<std::complex<double>, 4>;  // row-major

namespace detail {

// P1 * P2 = i * eps * P3 for distinct P1, P2; returns eps.
constexpr int cyclic_sign(Axis a, Axis b) {
    const int d = (static_cast<int>(b) - static_cast<int>(a) + 3) % 3;
    return d == 1 ? 1 : -1;
}

constexpr Axis third_axis(Axis a, Axis b) { return static_cast<Axis>(6 - static_cast<int>(a) - static_cast<int>(b)); }

// Image of Y under a Clifford with the given images of X and Z: Y = iXZ.
constexpr SignedAxis y_image(SignedAxis x, SignedAxis z) {
    const int s = (x.negative ? -1 : 1) * (z.negative ? -1 : 1) * -cyclic_sign(x.axis, z.axis);
    return {third_axis(x.axis, z.axis), s < 0};
}

inline Matrix2 matmul(const Matrix2 &a, const Matrix2 &b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

struct CliffordTable {
    static constexpr int kSize = 24;
    std::array<SignedAxis, kSize> x_img{};
    std::array<SignedAxis, kSize> z_img{};
    std::array<std::string, kSize> word{};  // gates in application order
    std::array<Matrix2, kSize> matrix{};
    std::array<std::array<std::uint8_t, kSize>, kSize> mul{};
    std::array<std::uint8_t, kSize> inv{};

    static int key(SignedAxis x, SignedAxis z) {
        return ((static_cast<int>(x.axis) - 1) * 2 + x.negative) * 6 + (static_cast<int>(z.axis) - 1) * 2 + z.negative;
    }
    std::array<int, 36> lookup{};

    static SignedAxis conj(SignedAxis x, SignedAxis z, SignedAxis p) {
        SignedAxis img = p.axis == Axis::X ? x : p.axis == Axis::Z ? z : y_image(x, z);
        img.negative = img.negative != p.negative;
        return img;
    }

    int find(SignedAxis x, SignedAxis z) const { return lookup[key(x, z)]; }

    CliffordTable() {
        lookup.fill(-1);
        const double r = 1.0 / std::sqrt(2.0);
        const Matrix2 h{r, r, r, -r};
        const Matrix2 s{1.0, 0.0, 0.0, std::complex<double>(0.0, 1.0)};
        // Generators as Pauli maps: H swaps X and Z, S sends X to Y.
        const SignedAxis hx{Axis::Z, false}, hz{Axis::X, false};
        const SignedAxis sx{Axis::Y, false}, sz{Axis::Z, false};

        int count = 0;
        auto insert = [&](SignedAxis x, SignedAxis z, std::string w, Matrix2 m) {
            if (lookup[key(x, z)] >= 0) return;
            lookup[key(x, z)] = count;
            x_img[count] = x;
            z_img[count] = z;
            word[count] = std::move(w);
            matrix[count] = m;
            ++count;
        };
        insert({Axis::X, false}, {Axis::Z, false}, "", Matrix2{1.0, 0.0, 0.0, 1.0});
        for (int i = 0; i < count; ++i) {
            // Left-multiply by H, then by S.
            insert(conj(hx, hz, x_img[i]), conj(hx, hz, z_img[i]), word[i] + "H", matmul(h, matrix[i]));
            insert(conj(sx, sz, x_img[i]), conj(sx, sz, z_img[i]), word[i] + "S", matmul(s, matrix[i]));
        }
        for (int a = 0; a < kSize; ++a) {
            for (int b = 0; b < kSize; ++b) {
                const SignedAxis x = conj(x_img[a], z_img[a], x_img[b]);
                const SignedAxis z = conj(x_img[a], z_img[a], z_img[b]);
                mul[a][b] = static_cast<std::uint8_t>(find(x, z));
            }
        }
        for (int a = 0; a < kSize; ++a) {
            for (int b = 0; b < kSize; ++b) {
                if (mul[a][b] == 0) inv[a] = static_cast<std::uint8_t>(b);
            }
        }
    }
};

inline const CliffordTable &clifford_table() {
    static const CliffordTable table;
    return table;
}

}  // namespace detail

/// Element of the 24-element single-qubit Clifford group modulo phase.
///
/// Stored as an index into a table generated from H and S; the index order is
/// fixed by breadth-first generation, with 0 the identity.
class Clifford {
public:
    static constexpr int kGroupSize = 24;

    constexpr Clifford() = default;

    static Clifford from_index(int index) {
        if (index < 0 || index >= kGroupSize) throw Error(Errc::IndexOutOfRange, "clifford index " + std::to_string(index));
        return Clifford(static_cast<std::uint8_t>(index));
    }

    /// The element mapping X -> x and Z -> z under conjugation.
    static Clifford from_images(SignedAxis x, SignedAxis z) {
        const int i = detail::clifford_table().find(x, z);
        if (i < 0) throw Error(Errc::InvalidParams, "images do not define a Clifford");
        return Clifford(static_cast<std::uint8_t>(i));
    }

    static Clifford identity() { return {}; }
    static Clifford hadamard() { return from_images({Axis::Z, false}, {Axis::X, false}); }
    static Clifford phase() { return from_images({Axis::Y, false}, {Axis::Z, false}); }
    static Clifford pauli(Axis a) {
        return from_images({Axis::X, a != Axis::X}, {Axis::Z, a != Axis::Z});
    }
    /// exp(-i pi/4 Z), i.e. sqrt(-iZ) up to phase (equals S).
    static Clifford sqrt_minus_i_z() { return from_images({Axis::Y, false}, {Axis::Z, false}); }
    /// exp(+i pi/4 Z), i.e. sqrt(+iZ) up to phase (equals S^dagger).
    static Clifford sqrt_plus_i_z() { return from_images({Axis::Y, true}, {Axis::Z, false}); }
    /// exp(+i pi/4 Y).
    static Clifford sqrt_plus_i_y() { return from_images({Axis::Z, false}, {Axis::X, true}); }
    /// exp(-i pi/4 Y).
    static Clifford sqrt_minus_i_y() { return from_images({Axis::Z, true}, {Axis::X, false}); }

    int index() const { return idx_; }
    bool is_identity() const { return idx_ == 0; }

    /// C P C^dagger.
    SignedAxis conjugate(SignedAxis p) const {
        const auto &t = detail::clifford_table();
        return detail::CliffordTable::conj(t.x_img[idx_], t.z_img[idx_], p);
    }
    SignedAxis conjugate(Axis p) const { return conjugate(SignedAxis{p, false}); }

    /// Product as operators: (a * b) applies b first, then a.
    friend Clifford operator*(Clifford a, Clifford b) { return Clifford(detail::clifford_table().mul[a.idx_][b.idx_]); }

    Clifford inverse() const { return Clifford(detail::clifford_table().inv[idx_]); }

    /// Decomposition into H and S gates, listed in application order.
    const std::string &word() const { return detail::clifford_table().word[idx_]; }

    const Matrix2 &matrix() const { return detail::clifford_table().matrix[idx_]; }

    std::string name() const { return word().empty() ? "I" : word(); }

    friend bool operator==(Clifford, Clifford) = default;

private:
    constexpr explicit Clifford(std::uint8_t i) : idx_(i) {}
    std::uint8_t idx_ = 0;
};

}  // namespace qlan
