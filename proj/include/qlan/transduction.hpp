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
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qlan/error.hpp"
#include "qlan/fock.hpp"
#include "qlan/random.hpp"

namespace qlan {

using Complex = std::complex<double>;

/// One microwave-optical transducer. An EGT device emits
/// alpha |0_m 1_o> + beta |1_m 0_o>; eta is the conversion efficiency.
struct TransducerParams {
    double eta = 1.0;
    Complex alpha = 1.0 / std::sqrt(2.0);
    Complex beta = 1.0 / std::sqrt(2.0);
    double omega_m_ghz = 5.0;    // nominal, not used by the models
    double omega_o_thz = 194.0;  // nominal, not used by the models

    static TransducerParams with(double eta, double alpha_sq = 0.5) {
        TransducerParams p;
        p.eta = eta;
        p.alpha = std::sqrt(alpha_sq);
        p.beta = std::sqrt(1.0 - alpha_sq);
        return p;
    }

    void validate() const {
        if (!(eta >= 0.0 && eta <= 1.0)) throw Error(Errc::InvalidParams, "conversion efficiency outside [0, 1]");
        if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12) throw Error(Errc::InvalidParams, "|alpha|^2 + |beta|^2 != 1");
    }
};

enum class DetectorType { PhotonNumberResolving, Threshold };

struct LinkBudget {
    double length_km = 0.0;
    double attenuation_db_per_km = 0.2;
    double detector_efficiency = 1.0;
    DetectorType detector = DetectorType::PhotonNumberResolving;
    double attempt_overhead_us = 1.0;  // local preparation and reset per attempt

    double fiber_transmissivity() const { return std::pow(10.0, -attenuation_db_per_km * length_km / 10.0); }

    /// Photon flight to the midpoint station plus the herald back: one fiber
    /// length at 2e5 km/s.
    double attempt_period_us() const { return attempt_overhead_us + length_km * 5.0; }

    void validate() const {
        if (!(length_km >= 0.0) || !(attenuation_db_per_km >= 0.0)) throw Error(Errc::InvalidParams, "fiber length and attenuation must be non-negative");
        if (!(detector_efficiency >= 0.0 && detector_efficiency <= 1.0)) throw Error(Errc::InvalidParams, "detector efficiency outside [0, 1]");
        if (!(attempt_overhead_us >= 0.0)) throw Error(Errc::InvalidParams, "attempt overhead must be non-negative");
        const double f = fiber_transmissivity();
        if (!(f > 0.0 && f <= 1.0)) throw Error(Errc::InvalidParams, "fiber transmissivity underflows");
    }
};

/// Guard for the ebit rate factor as the end-to-end efficiency approaches 1.
inline constexpr double kRateFactorCap = 64.0;

struct DqtRate {
    double per_attempt_success = 0.0;
    double ebit_rate_factor = 0.0;
};

/// Direct transduction of one half of an ebit: the photon must survive both
/// conversions and the whole fiber. The rate factor is the pure-loss channel
/// capacity log2(eta / (1 - eta)), clamped to [0, kRateFactorCap].
inline DqtRate dqt_epr_rate(const TransducerParams &s, const TransducerParams &d, const LinkBudget &lb) {
    s.validate();
    d.validate();
    lb.validate();
    DqtRate r;
    r.per_attempt_success = s.eta * lb.fiber_transmissivity() * d.eta;
    const double e = r.per_attempt_success;
    if (e >= 1.0) {
        r.ebit_rate_factor = kRateFactorCap;
    } else if (e > 0.5) {
        r.ebit_rate_factor = std::min(kRateFactorCap, std::log2(e / (1.0 - e)));
    }
    return r;
}

struct EgtStats {
    double p_herald = 0.0;
    std::optional<double> f_herald;  // only when p_herald > 0
};

/// Transmissivity from an emitter to the midpoint detectors.
inline double egt_arm_transmissivity(const TransducerParams &p, const LinkBudget &lb) {
    return p.eta * std::sqrt(lb.fiber_transmissivity()) * lb.detector_efficiency;
}

/// Closed-form single-click heralding for two EGT emitters interfered on a
/// 50/50 beam splitter at the midpoint. A click in D- is corrected by Z on the
/// source microwave qubit; fidelity is to (|01> + |10>)/sqrt(2).
inline EgtStats egt_herald(const TransducerParams &s, const TransducerParams &d, const LinkBudget &lb) {
    s.validate();
    d.validate();
    lb.validate();
    const double ts = egt_arm_transmissivity(s, lb), td = egt_arm_transmissivity(d, lb);
    const Complex one_s = s.alpha * d.beta, one_d = s.beta * d.alpha;
    const double both = std::norm(s.alpha * d.alpha);
    EgtStats r;
    r.p_herald = ts * std::norm(one_s) + td * std::norm(one_d) + both * (ts * (1.0 - td) + td * (1.0 - ts));
    // Both photons arrive and bunch; a threshold detector cannot tell.
    if (lb.detector == DetectorType::Threshold) r.p_herald += ts * td * both;
    if (r.p_herald > 0.0) r.f_herald = std::norm(one_s * std::sqrt(ts) + one_d * std::sqrt(td)) / (2.0 * r.p_herald);
    return r;
}

using MicrowaveDensity = std::array<std::array<Complex, 4>, 4>;  // basis |ms md>: 00, 01, 10, 11

/// Detector outcome. With threshold detectors the counts are 0 or 1 (click).
struct DetectionPattern {
    int plus = 0;
    int minus = 0;
    double probability = 0.0;
    MicrowaveDensity rho{};  // conditional microwave state, normalized when probability > 0

    bool single_click() const { return plus + minus == 1; }
};

struct FockOracleResult {
    std::vector<DetectionPattern> patterns;  // sorted by (plus, minus)
    double total_probability = 0.0;
    double p_herald = 0.0;
    std::optional<double> f_herald;
};

inline double bell_fidelity(const MicrowaveDensity &rho, bool correct_minus) {
    // <psi| rho |psi> with psi = (|01> + |10>) / sqrt(2); Z on the source qubit flips |10>.
    const double sign = correct_minus ? -1.0 : 1.0;
    const Complex f = 0.5 * (rho[1][1] + rho[2][2] + sign * (rho[1][2] + rho[2][1]));
    return f.real();
}

/// Exact simulation over ten modes: both microwave modes, both optical modes,
/// and three loss environments per arm (conversion, half fiber, detector).
inline FockOracleResult fock_oracle(const TransducerParams &s, const TransducerParams &d, const LinkBudget &lb, int truncation = 2) {
    if (truncation < 2) throw Error(Errc::TruncationTooLow, "need at least two photons per optical mode");
    s.validate();
    d.validate();
    lb.validate();
    enum : std::size_t { MS, MD, A, B, ES1, ES2, ES3, ED1, ED2, ED3, kModes };
    FockState<kModes> st(truncation);
    st.prepare<2>({MS, A}, {{{0, 1}, s.alpha}, {{1, 0}, s.beta}});
    st.prepare<2>({MD, B}, {{{0, 1}, d.alpha}, {{1, 0}, d.beta}});
    const double half_fiber = std::sqrt(lb.fiber_transmissivity());
    st.loss(A, ES1, s.eta);
    st.loss(A, ES2, half_fiber);
    st.loss(B, ED1, d.eta);
    st.loss(B, ED2, half_fiber);
    const double h = 1.0 / std::sqrt(2.0);
    st.beam_splitter(A, B, {{{h, h}, {h, -h}}});  // A becomes D+, B becomes D-
    st.loss(A, ES3, lb.detector_efficiency);
    st.loss(B, ED3, lb.detector_efficiency);

    const bool threshold = lb.detector == DetectorType::Threshold;
    // Group amplitudes by (pattern, everything unobserved), then trace out.
    using Rest = std::array<std::uint8_t, kModes>;
    std::map<std::pair<int, int>, std::map<Rest, std::array<Complex, 4>>> groups;
    for (const auto &[occ, amp] : st.terms()) {
        int p = occ[A], m = occ[B];
        if (threshold) {
            p = p > 0;
            m = m > 0;
        }
        Rest rest = occ;
        rest[MS] = rest[MD] = 0;
        if (!threshold) rest[A] = rest[B] = 0;
        groups[{p, m}][rest][occ[MS] * 2 + occ[MD]] += amp;
    }
    FockOracleResult res;
    double fsum = 0.0;
    for (const auto &[pat, rests] : groups) {
        DetectionPattern dp;
        dp.plus = pat.first;
        dp.minus = pat.second;
        for (const auto &[rest, v] : rests) {
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 4; ++j) dp.rho[i][j] += v[i] * std::conj(v[j]);
            }
        }
        for (int i = 0; i < 4; ++i) dp.probability += dp.rho[i][i].real();
        if (dp.probability > 0.0) {
            for (auto &row : dp.rho) {
                for (auto &x : row) x /= dp.probability;
            }
        }
        res.total_probability += dp.probability;
        if (dp.single_click()) {
            res.p_herald += dp.probability;
            if (dp.probability > 0.0) fsum += dp.probability * bell_fidelity(dp.rho, dp.minus == 1);
        }
        res.patterns.push_back(dp);
    }
    if (res.p_herald > 0.0) res.f_herald = fsum / res.p_herald;
    return res;
}

/// Simulated EGT attempt.
struct AttemptResult {
    bool heralded = false;
    std::optional<double> fidelity;
    double latency_us = 0.0;
};

inline AttemptResult egt_attempt(const TransducerParams &s, const TransducerParams &d, const LinkBudget &lb, Rng &rng) {
    const auto st = egt_herald(s, d, lb);
    AttemptResult r;
    r.latency_us = lb.attempt_period_us();
    r.heralded = rng.uniform() < st.p_herald;
    if (r.heralded) r.fidelity = st.f_herald;
    return r;
}

/// Re-generation until success, optionally capped.
struct RegenerationPolicy {
    std::optional<std::uint64_t> max_attempts;
    double attempt_period_us = 1.0;
};

struct AttemptStats {
    double p = 0.0;
    double mean = 0.0;
    std::uint64_t median = 0;
    std::uint64_t q90 = 0;
    std::uint64_t q99 = 0;
    double mean_latency_us = 0.0;
    double success_within_cap = 1.0;  // 1 when uncapped

    /// P(attempts <= k).
    double cdf(std::uint64_t k) const { return 1.0 - std::pow(1.0 - p, static_cast<double>(k)); }

    /// Smallest k with P(attempts <= k) >= q.
    std::uint64_t quantile(double q) const {
        if (p >= 1.0 || q <= 0.0) return 1;
        const double k = std::ceil(std::log1p(-q) / std::log1p(-p) - 1e-12);
        return static_cast<std::uint64_t>(std::max(1.0, k));
    }
};

/// Geometric number of attempts; nullopt marks an unreachable link (p = 0).
inline std::optional<AttemptStats> try_attempts_until_success(double p, const RegenerationPolicy &policy = {}) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::InvalidParams, "probability outside [0, 1]");
    if (p == 0.0) return std::nullopt;
    AttemptStats s;
    s.p = p;
    s.mean = 1.0 / p;
    s.median = s.quantile(0.5);
    s.q90 = s.quantile(0.9);
    s.q99 = s.quantile(0.99);
    s.mean_latency_us = s.mean * policy.attempt_period_us;
    if (policy.max_attempts) s.success_within_cap = s.cdf(*policy.max_attempts);
    return s;
}

inline AttemptStats attempts_until_success(double p, const RegenerationPolicy &policy = {}) {
    auto s = try_attempts_until_success(p, policy);
    if (!s) throw Error(Errc::ZeroProbability, "link never succeeds");
    return *s;
}

struct SweepRow {
    double eta_s = 0.0, eta_d = 0.0;
    double p_dqt = 0.0, rate_factor = 0.0;
    double p_herald = 0.0;
    std::optional<double> f_herald;
};

/// eta_s, eta_d over {i/n : i = 1..n}; amplitudes taken from the templates.
inline std::vector<SweepRow> transduction_grid(std::size_t n, const TransducerParams &s, const TransducerParams &d, const LinkBudget &lb) {
    if (n == 0) throw Error(Errc::InvalidParams, "grid needs at least one point per axis");
    std::vector<SweepRow> rows;
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= n; ++j) {
            TransducerParams ps = s, pd = d;
            ps.eta = static_cast<double>(i) / static_cast<double>(n);
            pd.eta = static_cast<double>(j) / static_cast<double>(n);
            const auto q = dqt_epr_rate(ps, pd, lb);
            const auto e = egt_herald(ps, pd, lb);
            rows.push_back({ps.eta, pd.eta, q.per_attempt_success, q.ebit_rate_factor, e.p_herald, e.f_herald});
        }
    }
    return rows;
}

inline std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline std::string sweep_csv(const std::vector<SweepRow> &rows) {
    std::string out = "eta_s,eta_d,p_dqt,rate_factor,p_herald,F_herald\n";
    for (const auto &r : rows) {
        out += format_number(r.eta_s) + ',' + format_number(r.eta_d) + ',' + format_number(r.p_dqt) + ',' + format_number(r.rate_factor) + ',' +
               format_number(r.p_herald) + ',' + (r.f_herald ? format_number(*r.f_herald) : std::string()) + '\n';
    }
    return out;
}

}  // namespace qlan
