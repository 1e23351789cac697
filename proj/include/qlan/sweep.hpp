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

#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "qlan/scenario.hpp"

namespace qlan {

/// One swept key and its values, e.g. params.length_km = 0, 10, 20.
struct SweepAxis {
    std::string key;
    std::vector<Json> values;
};

/// "key=v1,v2,..." or "key=start:stop:step" (inclusive numeric range).
inline SweepAxis parse_axis_spec(const std::string &spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) throw Error(Errc::ConfigError, "axis '" + spec + "': expected key=values");
    SweepAxis ax{spec.substr(0, eq), {}};
    const std::string vals = spec.substr(eq + 1);
    if (std::count(vals.begin(), vals.end(), ':') == 2 && vals.find(',') == std::string::npos) {
        double a = 0, b = 0, step = 0;
        char c1 = 0, c2 = 0;
        std::istringstream in(vals);
        if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0.0) || b < a) {
            throw Error(Errc::ConfigError, "axis '" + ax.key + "': bad range " + vals);
        }
        const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
        if (count > 100000) throw Error(Errc::ConfigError, "axis '" + ax.key + "': too many points");
        for (std::size_t i = 0; i < count; ++i) ax.values.emplace_back(std::stod(format_number(a + static_cast<double>(i) * step)));
        return ax;
    }
    std::size_t start = 0;
    while (start <= vals.size()) {
        const auto comma = vals.find(',', start);
        const std::string v = vals.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (v.empty()) throw Error(Errc::ConfigError, "axis '" + ax.key + "': empty value");
        ax.values.push_back(parse_value(v));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return ax;
}

struct SweepOptions {
    std::filesystem::path out;
    std::size_t workers = 1;
    bool force = false;
    bool resume = false;
};

struct SweepOutcome {
    std::size_t points = 0;
    std::size_t ran = 0;
    std::size_t skipped = 0;  // already complete in the manifest
    std::vector<std::string> violations;
    std::string table;
};

/// Cartesian product of the axes in row-major order (last axis fastest).
inline std::vector<Scenario> sweep_points(const Scenario &tmpl, const std::vector<SweepAxis> &axes) {
    std::size_t total = 1;
    for (const auto &a : axes) {
        if (a.values.empty()) throw Error(Errc::ConfigError, "axis '" + a.key + "' has no values");
        total *= a.values.size();
        if (total > 1000000) throw Error(Errc::ConfigError, "sweep has too many points");
    }
    std::vector<Scenario> out;
    for (std::size_t i = 0; i < total; ++i) {
        Json j = scenario_to_json(tmpl);
        j.erase("output");
        j["seed"] = Rng(tmpl.seed).split(i).next();
        std::size_t rest = i;
        for (std::size_t k = axes.size(); k-- > 0;) {
            set_override(j, axes[k].key, axes[k].values[rest % axes[k].values.size()]);
            rest /= axes[k].values.size();
        }
        out.push_back(parse_scenario(j));
    }
    return out;
}

namespace detail {

inline std::string cell(const Json &v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

inline std::string point_name(std::size_t i) {
    std::string s = std::to_string(i);
    return "point_" + std::string(s.size() < 4 ? 4 - s.size() : 0, '0') + s;
}

inline std::string read_file(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot read " + p.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::vector<std::pair<std::string, std::string>> parse_summary(const std::string &csv) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        const auto c = line.find(',');
        if (c != std::string::npos) out.emplace_back(line.substr(0, c), line.substr(c + 1));
    }
    return out;
}

}  // namespace detail

/// Runs every point on a bounded worker pool. Each point writes into its own
/// directory; the manifest of completed points is replaced atomically so an
/// interrupted sweep can resume. The combined table lists points in order.
inline SweepOutcome run_sweep(const Scenario &tmpl, const std::vector<SweepAxis> &axes, const SweepOptions &opt) {
    namespace fs = std::filesystem;
    const auto points = sweep_points(tmpl, axes);
    Json spec;
    spec["template"] = scenario_to_json(tmpl);
    spec["template"].erase("output");
    spec["axes"] = Json::array();
    for (const auto &a : axes) spec["axes"].push_back({{"key", a.key}, {"values", a.values}});

    const fs::path manifest = opt.out / "manifest.json";
    const fs::path table = opt.out / "sweep.csv";
    std::set<std::size_t> done;
    if (fs::exists(manifest) || fs::exists(table)) {
        if (opt.resume && fs::exists(manifest)) {
            Json m;
            try {
                m = Json::parse(detail::read_file(manifest));
            } catch (const Json::exception &e) {
                throw Error(Errc::IoError, "corrupt manifest: " + std::string(e.what()));
            }
            if (m.at("spec") != spec) throw Error(Errc::ConfigError, "resume: sweep definition differs from " + manifest.string());
            for (const auto &i : m.at("completed")) done.insert(i.get<std::size_t>());
        } else if (!opt.force) {
            throw Error(Errc::IoError, opt.out.string() + " already holds a sweep (use --force or --resume)");
        }
    }
    std::error_code ec;
    fs::create_directories(opt.out, ec);
    if (ec) throw Error(Errc::IoError, "cannot create " + opt.out.string());

    std::mutex mu;
    auto save_manifest = [&]() {
        Json m;
        m["spec"] = spec;
        m["completed"] = std::vector<std::size_t>(done.begin(), done.end());
        write_artifacts(opt.out, {{"manifest.json", m.dump(2) + "\n"}}, true);
    };
    save_manifest();
    const std::set<std::size_t> already = done;

    std::vector<std::vector<std::pair<std::string, std::string>>> summaries(points.size());
    std::vector<std::vector<std::string>> violations(points.size());
    std::vector<std::exception_ptr> errors(points.size());
    SweepOutcome res;
    res.points = points.size();
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            try {
                const fs::path dir = opt.out / detail::point_name(i);
                if (already.count(i)) {
                    summaries[i] = detail::parse_summary(detail::read_file(dir / "summary.csv"));
                    continue;
                }
                auto r = run_scenario(points[i]);
                write_artifacts(dir, r.artifacts, true);
                summaries[i] = r.summary;
                violations[i] = r.violations;
                std::lock_guard lock(mu);
                done.insert(i);
                save_manifest();
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t n = std::max<std::size_t>(1, std::min(opt.workers, points.size()));
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < n; ++w) pool.emplace_back(worker);
    for (auto &t : pool) t.join();
    for (const auto &e : errors) {
        if (e) std::rethrow_exception(e);
    }
    res.skipped = already.size();
    res.ran = points.size() - already.size();

    std::string out = "point";
    for (const auto &a : axes) out += ',' + a.key;
    for (const auto &[k, v] : summaries.front()) out += ',' + k;
    out += '\n';
    for (std::size_t i = 0; i < points.size(); ++i) {
        out += std::to_string(i);
        std::size_t rest = i;
        std::vector<std::string> cells(axes.size());
        for (std::size_t k = axes.size(); k-- > 0;) {
            cells[k] = detail::cell(axes[k].values[rest % axes[k].values.size()]);
            rest /= axes[k].values.size();
        }
        for (const auto &c : cells) out += ',' + c;
        for (const auto &[k, v] : summaries[i]) out += ',' + v;
        out += '\n';
        for (const auto &v : violations[i]) res.violations.push_back(detail::point_name(i) + ": " + v);
    }
    write_artifacts(opt.out, {{"sweep.csv", out}}, true);
    res.table = std::move(out);
    return res;
}

}  // namespace qlan
