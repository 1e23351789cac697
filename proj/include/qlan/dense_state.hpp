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

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "qlan/clifford.hpp"
#include "qlan/error.hpp"
#include "qlan/random.hpp"
#include "qlan/tableau.hpp"

namespace qlan {

/// State vector on up to 12 qubits; qubit q is bit q of the basis index.
class DenseState {
public:
    using Amplitude = std::complex<double>;
    static constexpr std::size_t kMaxQubits = 12;

    explicit DenseState(std::size_t n = 0) : n_(n) {
        if (n > kMaxQubits) throw Error(Errc::InvalidSize, "dense state capped at 12 qubits");
        amp_.assign(std::size_t{1} << n, 0.0);
        amp_[0] = 1.0;
    }

    static DenseState plus(std::size_t n) {
        DenseState s(n);
        const double a = 1.0 / std::sqrt(static_cast<double>(s.amp_.size()));
        for (auto &v : s.amp_) v = a;
        return s;
    }

    static DenseState from_amplitudes(std::size_t n, std::vector<Amplitude> amp) {
        DenseState s(n);
        if (amp.size() != s.amp_.size()) throw Error(Errc::DimensionMismatch, "amplitude count");
        s.amp_ = std::move(amp);
        return s;
    }

    /// State stabilized by the tableau, obtained by projecting a seeded random
    /// vector onto the common +1 eigenspace of the generators.
    static DenseState from_tableau(const StabilizerTableau &t, std::uint64_t seed = 7) {
        Rng rng(seed);
        for (int attempt = 0; attempt < 8; ++attempt) {
            DenseState s(t.num_qubits());
            for (auto &v : s.amp_) v = Amplitude(rng.uniform() - 0.5, rng.uniform() - 0.5);
            s.normalize();
            bool ok = true;
            for (const auto &g : t.stabilizers()) {
                if (s.project(g, 1) < 1e-6) {
                    ok = false;
                    break;
                }
            }
            if (ok) return s;
        }
        throw Error(Errc::InvariantViolation, "could not project onto stabilizer space");
    }

    std::size_t num_qubits() const { return n_; }
    const std::vector<Amplitude> &amplitudes() const { return amp_; }

    double norm() const {
        double acc = 0.0;
        for (const auto &v : amp_) acc += std::norm(v);
        return std::sqrt(acc);
    }

    void normalize() {
        const double nv = norm();
        if (nv == 0.0) throw Error(Errc::InvariantViolation, "zero vector");
        for (auto &v : amp_) v /= nv;
    }

    void apply(std::size_t q, const Matrix2 &m) {
        check(q);
        const std::size_t bit = std::size_t{1} << q;
        for (std::size_t k = 0; k < amp_.size(); ++k) {
            if (k & bit) continue;
            const Amplitude a0 = amp_[k], a1 = amp_[k | bit];
            amp_[k] = m[0] * a0 + m[1] * a1;
            amp_[k | bit] = m[2] * a0 + m[3] * a1;
        }
    }

    void apply(std::size_t q, Clifford c) { apply(q, c.matrix()); }
    void h(std::size_t q) { apply(q, Clifford::hadamard()); }
    void s(std::size_t q) { apply(q, Clifford::phase()); }

    void cz(std::size_t a, std::size_t b) {
        check(a);
        check(b);
        const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
        for (std::size_t k = 0; k < amp_.size(); ++k) {
            if ((k & mask) == mask) amp_[k] = -amp_[k];
        }
    }

    void cx(std::size_t c, std::size_t t) {
        check(c);
        check(t);
        const std::size_t cb = std::size_t{1} << c, tb = std::size_t{1} << t;
        for (std::size_t k = 0; k < amp_.size(); ++k) {
            if ((k & cb) && !(k & tb)) std::swap(amp_[k], amp_[k | tb]);
        }
    }

    /// P|psi>.
    DenseState applied(const PauliString &p) const {
        if (p.size() != n_) throw Error(Errc::DimensionMismatch, "pauli width");
        std::size_t xmask = 0, zmask = 0;
        int ys = 0;
        for (std::size_t q = 0; q < n_; ++q) {
            if (p.x[q]) xmask |= std::size_t{1} << q;
            if (p.z[q]) zmask |= std::size_t{1} << q;
            if (p.x[q] && p.z[q]) ++ys;
        }
        static const Amplitude ipow[4] = {1.0, Amplitude(0, 1), -1.0, Amplitude(0, -1)};
        const Amplitude global = ipow[ys % 4] * (p.negative ? -1.0 : 1.0);
        DenseState out(n_);
        for (std::size_t k = 0; k < amp_.size(); ++k) {
            const double sign = (std::popcount(k & zmask) & 1) ? -1.0 : 1.0;
            out.amp_[k ^ xmask] = global * sign * amp_[k];
        }
        return out;
    }

    double expectation(const PauliString &p) const {
        const DenseState pp = applied(p);
        Amplitude acc = 0.0;
        for (std::size_t k = 0; k < amp_.size(); ++k) acc += std::conj(amp_[k]) * pp.amp_[k];
        return acc.real();
    }

    /// Projects onto the `outcome` eigenspace of `p`, renormalizes, and returns
    /// the Born probability. Leaves the state untouched if that probability
    /// vanishes.
    double project(const PauliString &p, int outcome) {
        const DenseState pp = applied(p);
        std::vector<Amplitude> next(amp_.size());
        double prob = 0.0;
        for (std::size_t k = 0; k < amp_.size(); ++k) {
            next[k] = 0.5 * (amp_[k] + static_cast<double>(outcome) * pp.amp_[k]);
            prob += std::norm(next[k]);
        }
        if (prob < 1e-15) return 0.0;
        const double s = 1.0 / std::sqrt(prob);
        for (auto &v : next) v *= s;
        amp_ = std::move(next);
        return prob;
    }

    /// Tensor product with a single-qubit state inserted as qubit `pos`.
    DenseState insert_qubit(std::size_t pos, Amplitude a0, Amplitude a1) const {
        if (pos > n_) throw Error(Errc::IndexOutOfRange, "insert position");
        DenseState out(n_ + 1);
        const std::size_t low = (std::size_t{1} << pos) - 1;
        for (std::size_t k = 0; k < amp_.size(); ++k) {
            const std::size_t base = (k & low) | ((k & ~low) << 1);
            out.amp_[base] = amp_[k] * a0;
            out.amp_[base | (std::size_t{1} << pos)] = amp_[k] * a1;
        }
        return out;
    }

private:
    void check(std::size_t q) const {
        if (q >= n_) throw Error(Errc::IndexOutOfRange, "qubit " + std::to_string(q));
    }

    std::size_t n_;
    std::vector<Amplitude> amp_;
};

/// |<a|b>|^2.
inline double dense_fidelity(const DenseState &a, const DenseState &b) {
    if (a.num_qubits() != b.num_qubits()) throw Error(Errc::DimensionMismatch, "qubit counts differ");
    std::complex<double> acc = 0.0;
    for (std::size_t k = 0; k < a.amplitudes().size(); ++k) acc += std::conj(a.amplitudes()[k]) * b.amplitudes()[k];
    return std::norm(acc);
}

/// Single-qubit eigenvector of +/- the given axis, as (amp0, amp1).
inline std::pair<std::complex<double>, std::complex<double>> pauli_eigenvector(SignedAxis p) {
    const double r = 1.0 / std::sqrt(2.0);
    const std::complex<double> i(0.0, 1.0);
    switch (p.axis) {
        case Axis::X: return p.negative ? std::pair{std::complex<double>(r), std::complex<double>(-r)} : std::pair{std::complex<double>(r), std::complex<double>(r)};
        case Axis::Y: return p.negative ? std::pair{std::complex<double>(r), -i * r} : std::pair{std::complex<double>(r), i * r};
        case Axis::Z: break;
    }
    return p.negative ? std::pair{std::complex<double>(0.0), std::complex<double>(1.0)} : std::pair{std::complex<double>(1.0), std::complex<double>(0.0)};
}

}  // namespace qlan
