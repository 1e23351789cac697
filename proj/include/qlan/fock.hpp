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
#include <cstddef>
#include <cstdint>
#include <map>

#include "qlan/error.hpp"

namespace qlan {

/// Sparse pure state over M bosonic modes, truncated at `cutoff` photons per
/// mode. Keys are occupation numbers.
template <std::size_t M>
class FockState {
  public:
    using Occupation = std::array<std::uint8_t, M>;
    using Amplitude = std::complex<double>;

    explicit FockState(int cutoff) : cutoff_(cutoff) {
        if (cutoff < 1) throw Error(Errc::TruncationTooLow, "cutoff must be positive");
        amps_[Occupation{}] = 1.0;
    }

    int cutoff() const { return cutoff_; }
    const std::map<Occupation, Amplitude> &terms() const { return amps_; }

    double norm_squared() const {
        double s = 0.0;
        for (const auto &[k, a] : amps_) s += std::norm(a);
        return s;
    }

    /// Applies a map that sends the vacuum of `modes` to the given superposition
    /// of occupations on those modes. Only valid while `modes` are empty.
    template <std::size_t K>
    void prepare(const std::array<std::size_t, K> &modes, const std::map<std::array<std::uint8_t, K>, Amplitude> &branch) {
        std::map<Occupation, Amplitude> out;
        for (const auto &[occ, amp] : amps_) {
            for (std::size_t i = 0; i < K; ++i) {
                if (occ[modes[i]] != 0) throw Error(Errc::InvariantViolation, "prepare on an occupied mode");
            }
            for (const auto &[local, b] : branch) {
                Occupation next = occ;
                for (std::size_t i = 0; i < K; ++i) next[modes[i]] = local[i];
                out[next] += amp * b;
            }
        }
        amps_ = std::move(out);
        prune();
    }

    /// Two-mode linear-optics transformation on creation operators:
    /// a_i^+ -> u[0][0] a_i^+ + u[1][0] a_j^+,  a_j^+ -> u[0][1] a_i^+ + u[1][1] a_j^+.
    void beam_splitter(std::size_t i, std::size_t j, const std::array<std::array<Amplitude, 2>, 2> &u) {
        std::map<Occupation, Amplitude> out;
        for (const auto &[occ, amp] : amps_) {
            const int ni = occ[i], nj = occ[j];
            const double pre = 1.0 / std::sqrt(factorial(ni) * factorial(nj));
            for (int k = 0; k <= ni; ++k) {
                const Amplitude ck = binomial(ni, k) * std::pow(u[0][0], k) * std::pow(u[1][0], ni - k);
                for (int l = 0; l <= nj; ++l) {
                    const Amplitude cl = binomial(nj, l) * std::pow(u[0][1], l) * std::pow(u[1][1], nj - l);
                    const int mi = k + l, mj = ni + nj - k - l;
                    if (mi > cutoff_ || mj > cutoff_) continue;
                    Occupation next = occ;
                    next[i] = static_cast<std::uint8_t>(mi);
                    next[j] = static_cast<std::uint8_t>(mj);
                    out[next] += amp * pre * ck * cl * std::sqrt(factorial(mi) * factorial(mj));
                }
            }
        }
        amps_ = std::move(out);
        prune();
    }

    /// Loss as a beam splitter of transmissivity t coupling `mode` to the
    /// (empty) environment mode `env`.
    void loss(std::size_t mode, std::size_t env, double t) {
        const double r = std::sqrt(std::max(0.0, 1.0 - t)), s = std::sqrt(std::max(0.0, t));
        beam_splitter(mode, env, {{{s, -r}, {r, s}}});
    }

  private:
    static double factorial(int n) {
        double f = 1.0;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    }
    static double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

    void prune() {
        for (auto it = amps_.begin(); it != amps_.end();) {
            if (std::norm(it->second) < 1e-300) {
                it = amps_.erase(it);
            } else {
                ++it;
            }
        }
    }

    int cutoff_;
    std::map<Occupation, Amplitude> amps_;
};

}  // namespace qlan
