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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qlan/clifford.hpp"
#include "qlan/error.hpp"
#include "qlan/random.hpp"

namespace qlan {

/// Signed n-qubit Pauli operator in (x, z) bit form; Y is x = z = 1.
struct PauliString {
    std::vector<std::uint8_t> x;
    std::vector<std::uint8_t> z;
    bool negative = false;

    PauliString() = default;
    explicit PauliString(std::size_t n) : x(n, 0), z(n, 0) {}

    std::size_t size() const { return x.size(); }

    static PauliString single(std::size_t n, std::size_t q, SignedAxis p) {
        PauliString s(n);
        s.set(q, p.axis);
        s.negative = p.negative;
        return s;
    }

    /// Parses "+XZI", "-Y_Z" ('_' and 'I' are identity; sign optional).
    static PauliString parse(const std::string &text) {
        std::size_t i = 0;
        bool neg = false;
        if (!text.empty() && (text[0] == '+' || text[0] == '-')) {
            neg = text[0] == '-';
            i = 1;
        }
        PauliString s(text.size() - i);
        s.negative = neg;
        for (std::size_t q = 0; i < text.size(); ++i, ++q) {
            const char c = text[i];
            if (c == 'I' || c == '_') continue;
            s.set(q, axis_from_char(c));
        }
        return s;
    }

    void set(std::size_t q, Axis a) {
        x[q] = a != Axis::Z;
        z[q] = a != Axis::X;
    }

    char at(std::size_t q) const { return x[q] ? (z[q] ? 'Y' : 'X') : (z[q] ? 'Z' : 'I'); }

    std::string str() const {
        std::string out(1, negative ? '-' : '+');
        for (std::size_t q = 0; q < size(); ++q) out.push_back(at(q));
        return out;
    }

    bool commutes(const PauliString &o) const {
        unsigned acc = 0;
        for (std::size_t q = 0; q < size(); ++q) acc ^= (x[q] & o.z[q]) ^ (z[q] & o.x[q]);
        return acc == 0;
    }

    bool is_identity() const {
        for (std::size_t q = 0; q < size(); ++q) {
            if (x[q] || z[q]) return false;
        }
        return true;
    }

    friend bool operator==(const PauliString &, const PauliString &) = default;
};

namespace detail {

// Power of i picked up by the single-qubit product (x1,z1)*(x2,z2).
inline int pauli_phase(unsigned x1, unsigned z1, unsigned x2, unsigned z2) {
    if (!x1 && !z1) return 0;
    if (x1 && z1) return static_cast<int>(z2) - static_cast<int>(x2);
    if (x1) return static_cast<int>(z2) * (2 * static_cast<int>(x2) - 1);
    return static_cast<int>(x2) * (1 - 2 * static_cast<int>(z2));
}

// target <- left * target. Exact for commuting operands.
inline void left_multiply(PauliString &target, const PauliString &left) {
    int e = 2 * target.negative + 2 * left.negative;
    for (std::size_t q = 0; q < target.size(); ++q) {
        e += pauli_phase(left.x[q], left.z[q], target.x[q], target.z[q]);
        target.x[q] ^= left.x[q];
        target.z[q] ^= left.z[q];
    }
    target.negative = (((e % 4) + 4) % 4) >= 2;
}

}  // namespace detail

struct MeasureOutcome {
    int outcome = 1;           // +1 or -1
    double probability = 1.0;  // Born probability of `outcome` before the update
    bool deterministic = true;
};

/// Aaronson-Gottesman tableau with destabilizers.
///
/// Rows 0..n-1 are destabilizers, rows n..2n-1 stabilizers. A fresh tableau is
/// |0...0>.
class StabilizerTableau {
public:
    StabilizerTableau() = default;

    explicit StabilizerTableau(std::size_t n) : n_(n), rows_(2 * n, PauliString(n)) {
        for (std::size_t q = 0; q < n; ++q) {
            rows_[q].x[q] = 1;
            rows_[n + q].z[q] = 1;
        }
    }

    /// Builds from explicit destabilizer and stabilizer generators.
    static StabilizerTableau from_rows(std::vector<PauliString> destabilizers, std::vector<PauliString> stabilizers) {
        if (destabilizers.size() != stabilizers.size()) throw Error(Errc::DimensionMismatch, "row counts differ");
        StabilizerTableau t;
        t.n_ = stabilizers.size();
        for (auto &r : destabilizers) {
            if (r.size() != t.n_) throw Error(Errc::DimensionMismatch, "row width");
            t.rows_.push_back(std::move(r));
        }
        for (auto &r : stabilizers) {
            if (r.size() != t.n_) throw Error(Errc::DimensionMismatch, "row width");
            t.rows_.push_back(std::move(r));
        }
        return t;
    }

    std::size_t num_qubits() const { return n_; }

    const PauliString &destabilizer(std::size_t i) const { return rows_.at(i); }
    const PauliString &stabilizer(std::size_t i) const { return rows_.at(n_ + i); }

    std::vector<PauliString> stabilizers() const { return {rows_.begin() + static_cast<long>(n_), rows_.end()}; }

    void h(std::size_t q) {
        check(q);
        for (auto &r : rows_) {
            r.negative ^= r.x[q] & r.z[q];
            std::swap(r.x[q], r.z[q]);
        }
    }

    void s(std::size_t q) {
        check(q);
        for (auto &r : rows_) {
            r.negative ^= r.x[q] & r.z[q];
            r.z[q] ^= r.x[q];
        }
    }

    void pauli(std::size_t q, Axis a) {
        check(q);
        for (auto &r : rows_) {
            if (a == Axis::X) r.negative ^= r.z[q];
            else if (a == Axis::Z) r.negative ^= r.x[q];
            else r.negative ^= r.x[q] ^ r.z[q];
        }
    }

    void cx(std::size_t c, std::size_t t) {
        check(c);
        check(t);
        if (c == t) throw Error(Errc::IndexOutOfRange, "cx on a single qubit");
        for (auto &r : rows_) {
            r.negative ^= r.x[c] & r.z[t] & (r.x[t] ^ r.z[c] ^ 1);
            r.x[t] ^= r.x[c];
            r.z[c] ^= r.z[t];
        }
    }

    void cz(std::size_t a, std::size_t b) {
        check(a);
        check(b);
        if (a == b) throw Error(Errc::IndexOutOfRange, "cz on a single qubit");
        for (auto &r : rows_) {
            r.negative ^= r.x[a] & r.x[b] & (r.z[a] ^ r.z[b]);
            r.z[a] ^= r.x[b];
            r.z[b] ^= r.x[a];
        }
    }

    void apply(std::size_t q, Clifford c) {
        for (char g : c.word()) {
            if (g == 'H') h(q);
            else s(q);
        }
    }

    /// Measures the observable `p`. A forced outcome that has probability 0
    /// is reported with probability 0 and leaves the tableau untouched.
    MeasureOutcome measure(const PauliString &p, Rng *rng, std::optional<int> forced = std::nullopt) {
        if (p.size() != n_) throw Error(Errc::DimensionMismatch, "pauli width");
        std::optional<std::size_t> pivot;
        for (std::size_t i = n_; i < 2 * n_; ++i) {
            if (!rows_[i].commutes(p)) {
                pivot = i;
                break;
            }
        }
        if (pivot) {
            const std::size_t pr = *pivot;
            for (std::size_t i = 0; i < 2 * n_; ++i) {
                if (i != pr && !rows_[i].commutes(p)) detail::left_multiply(rows_[i], rows_[pr]);
            }
            int outcome = forced ? *forced : (rng && rng->coin() ? -1 : 1);
            rows_[pr - n_] = rows_[pr];
            rows_[pr] = p;
            rows_[pr].negative = p.negative != (outcome < 0);
            return {outcome, 0.5, false};
        }
        PauliString acc(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            if (!rows_[i].commutes(p)) detail::left_multiply(acc, rows_[n_ + i]);
        }
        const int value = acc.negative == p.negative ? 1 : -1;
        if (forced && *forced != value) return {*forced, 0.0, true};
        return {value, 1.0, true};
    }

    MeasureOutcome measure(std::size_t q, Axis a, Rng *rng, std::optional<int> forced = std::nullopt) {
        check(q);
        return measure(PauliString::single(n_, q, {a, false}), rng, forced);
    }

    /// Tensor product with a single-qubit stabilizer state inserted at `pos`.
    StabilizerTableau insert_qubit(std::size_t pos, SignedAxis state) const {
        if (pos > n_) throw Error(Errc::IndexOutOfRange, "insert position");
        auto widen = [pos](const PauliString &r) {
            PauliString w(r.size() + 1);
            w.negative = r.negative;
            for (std::size_t q = 0, k = 0; q < w.size(); ++q) {
                if (q == pos) continue;
                w.x[q] = r.x[k];
                w.z[q] = r.z[k];
                ++k;
            }
            return w;
        };
        std::vector<PauliString> d, st;
        for (std::size_t i = 0; i < n_; ++i) {
            d.push_back(widen(rows_[i]));
            st.push_back(widen(rows_[n_ + i]));
        }
        d.push_back(PauliString::single(n_ + 1, pos, {state.axis == Axis::Z ? Axis::X : Axis::Z, false}));
        st.push_back(PauliString::single(n_ + 1, pos, state));
        return from_rows(std::move(d), std::move(st));
    }

    /// Stabilizer generators in reduced row-echelon form over the column
    /// order x_0..x_{n-1}, z_0..z_{n-1}. Two tableaus describe the same state
    /// iff their canonical generators coincide.
    std::vector<PauliString> canonical_stabilizers() const {
        std::vector<PauliString> g = stabilizers();
        std::size_t row = 0;
        for (std::size_t col = 0; col < 2 * n_ && row < g.size(); ++col) {
            auto bit = [&](const PauliString &r) { return col < n_ ? r.x[col] : r.z[col - n_]; };
            std::size_t sel = row;
            while (sel < g.size() && !bit(g[sel])) ++sel;
            if (sel == g.size()) continue;
            std::swap(g[row], g[sel]);
            for (std::size_t i = 0; i < g.size(); ++i) {
                if (i != row && bit(g[i])) detail::left_multiply(g[i], g[row]);
            }
            ++row;
        }
        return g;
    }

    std::string canonical_text() const {
        std::string out;
        for (const auto &r : canonical_stabilizers()) out += r.str() + "\n";
        return out;
    }

private:
    void check(std::size_t q) const {
        if (q >= n_) throw Error(Errc::IndexOutOfRange, "qubit " + std::to_string(q) + " of " + std::to_string(n_));
    }

    std::size_t n_ = 0;
    std::vector<PauliString> rows_;
};

/// Same stabilizer group with the same signs.
inline bool canonical_equal(const StabilizerTableau &a, const StabilizerTableau &b) {
    if (a.num_qubits() != b.num_qubits()) throw Error(Errc::DimensionMismatch, "tableau sizes differ");
    return a.canonical_stabilizers() == b.canonical_stabilizers();
}

}  // namespace qlan
