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


// qlansim: scenario runner for the QLAN simulator.
//
//   qlansim run CONFIG [--seed N] [--output DIR] [--set key=value]... [--force]
//   qlansim sweep CONFIG --axis key=v1,v2 [--axis ...] [--workers N] [--resume]
//   qlansim export INPUT --format edges|dot|trace [--output FILE] [--force]
//   qlansim audit --seed N [--max-n 6] [--dense-samples 200]
//
// Exit codes: 0 ok, 1 I/O failure, 2 configuration error, 3 invariant violation.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "qlan/graph_io.hpp"
#include "qlan/scenario.hpp"
#include "qlan/sweep.hpp"
#include "qlan/trace_io.hpp"

namespace fs = std::filesystem;
using namespace qlan;

namespace {

constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

fs::path output_root() {
    if (const char *env = std::getenv("QLANSIM_OUTPUT_ROOT"); env && *env) return env;
    return "qlansim-out";
}

Scenario load_with_overrides(const std::string &config, const std::vector<std::string> &sets, std::optional<std::uint64_t> seed,
                             const std::string &output) {
    Scenario base = load_scenario(config);
    Json j = scenario_to_json(base);
    for (const auto &s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) throw Error(Errc::ConfigError, "--set '" + s + "': expected key=value");
        set_override(j, s.substr(0, eq), parse_value(s.substr(eq + 1)));
    }
    if (seed) j["seed"] = *seed;
    if (!output.empty()) j["output"] = output;
    return parse_scenario(j);
}

fs::path default_dir(const Scenario &s) {
    if (!s.output.empty()) return s.output;
    return output_root() / (s.kind + "-seed" + std::to_string(s.seed));
}

int report(const std::vector<std::string> &violations) {
    for (const auto &v : violations) std::cerr << "invariant violation: " << v << "\n";
    return violations.empty() ? 0 : kExitInvariant;
}

int cmd_run(const std::string &config, const std::vector<std::string> &sets, std::optional<std::uint64_t> seed, const std::string &output,
            bool force) {
    const Scenario s = load_with_overrides(config, sets, seed, output);
    const RunResult r = run_scenario(s);
    const fs::path dir = default_dir(s);
    write_artifacts(dir, r.artifacts, force);
    std::cout << s.kind << " seed " << s.seed << " -> " << dir.string() << "\n";
    for (const auto &[k, v] : r.summary) std::cout << "  " << k << " = " << v << "\n";
    return report(r.violations);
}

int cmd_sweep(const std::string &config, const std::vector<std::string> &sets, const std::vector<std::string> &axis_specs,
              std::optional<std::uint64_t> seed, const std::string &output, std::size_t workers, bool force, bool resume) {
    const Scenario s = load_with_overrides(config, sets, seed, output);
    std::vector<SweepAxis> axes;
    for (const auto &a : axis_specs) axes.push_back(parse_axis_spec(a));
    SweepOptions opt;
    opt.out = output.empty() ? output_root() / (s.kind + "-sweep-seed" + std::to_string(s.seed)) : fs::path(output);
    opt.workers = workers;
    opt.force = force;
    opt.resume = resume;
    const auto res = run_sweep(s, axes, opt);
    std::cout << "sweep: " << res.points << " points (" << res.ran << " run, " << res.skipped << " resumed) -> " << (opt.out / "sweep.csv").string()
              << "\n";
    return report(res.violations);
}

std::string slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot read " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int cmd_export(const std::string &input, const std::string &format, const std::string &output, bool force) {
    const std::string text = slurp(input);
    std::string out;
    const bool is_trace = input.size() >= 6 && input.substr(input.size() - 6) == ".jsonl";
    if (format == "trace") {
        if (!is_trace) throw Error(Errc::ConfigError, "format trace needs a .jsonl measurement trace");
        out = trace_to_jsonl(parse_trace(text));
    } else {
        if (is_trace) throw Error(Errc::ConfigError, "a measurement trace exports only as format trace");
        const auto first = text.find_first_not_of(" \t\r\n");
        const bool dot = first != std::string::npos && text.compare(first, 5, "graph") == 0;
        const Graph g = dot ? parse_dot(text) : parse_edge_list(text);
        out = format == "dot" ? to_dot(g) : to_edge_list(g);
    }
    if (output.empty()) {
        std::cout << out;
        return 0;
    }
    const fs::path p(output);
    write_artifacts(p.has_parent_path() ? p.parent_path() : fs::path("."), {{p.filename().string(), out}}, force);
    return 0;
}

int cmd_audit(std::uint64_t seed, std::size_t max_n, std::size_t samples, std::size_t dense_max_n, const std::string &output, bool force) {
    Scenario s;
    s.kind = "oracle_audit";
    s.seed = seed;
    s.params = {{"max_n", max_n}, {"dense_samples", samples}, {"dense_max_n", dense_max_n}};
    const RunResult r = run_scenario(s);
    for (const auto &a : r.artifacts) {
        if (a.name == "audit.txt") std::cout << a.content;
    }
    if (!output.empty()) write_artifacts(output, r.artifacts, force);
    return report(r.violations);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"qlansim: entanglement-based QLAN topology simulator"};
    app.require_subcommand(1);

    std::string config, output, input, format = "edges";
    std::vector<std::string> sets, axes;
    std::optional<std::uint64_t> seed;
    bool force = false, resume = false;
    std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    std::size_t max_n = 6, samples = 200, dense_max_n = 8;
    std::uint64_t audit_seed = 0;

    auto *run = app.add_subcommand("run", "run one scenario config");
    run->add_option("config", config, "scenario JSON file")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", seed, "override the config seed");
    run->add_option("-o,--output", output, "output directory");
    run->add_option("--set", sets, "override a config key, e.g. params.clients=8");
    run->add_flag("--force", force, "overwrite existing outputs");

    auto *sweep = app.add_subcommand("sweep", "run a scenario over a cartesian parameter grid");
    sweep->add_option("config", config, "scenario JSON template")->required()->check(CLI::ExistingFile);
    sweep->add_option("--axis", axes, "key=v1,v2,... or key=start:stop:step");
    sweep->add_option("--seed", seed, "override the template seed");
    sweep->add_option("-o,--output", output, "sweep directory");
    sweep->add_option("--set", sets, "override a template key");
    sweep->add_option("-j,--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    sweep->add_flag("--force", force, "discard an existing sweep");
    sweep->add_flag("--resume", resume, "skip points listed in the manifest");

    auto *exp = app.add_subcommand("export", "re-emit a graph or trace in canonical form");
    exp->add_option("input", input, "edge list, DOT file, or .jsonl trace")->required()->check(CLI::ExistingFile);
    exp->add_option("-f,--format", format, "edges | dot | trace")->check(CLI::IsMember({"edges", "dot", "trace"}));
    exp->add_option("-o,--output", output, "output file (default stdout)");
    exp->add_flag("--force", force, "overwrite an existing file");

    auto *audit = app.add_subcommand("audit", "check the measurement rules against the oracles");
    audit->add_option("--seed", audit_seed, "seed for frames and samples")->required();
    audit->add_option("--max-n", max_n, "exhaustive graph size bound")->check(CLI::Range(1, 7));
    audit->add_option("--dense-samples", samples, "random dense-simulator cases");
    audit->add_option("--dense-max-n", dense_max_n, "largest sampled graph")->check(CLI::Range(2, 12));
    audit->add_option("-o,--output", output, "write audit artifacts here");
    audit->add_flag("--force", force, "overwrite existing outputs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run) return cmd_run(config, sets, seed, output, force);
        if (*sweep) return cmd_sweep(config, sets, axes, seed, output, workers, force, resume);
        if (*exp) return cmd_export(input, format, output, force);
        return cmd_audit(audit_seed, max_n, samples, dense_max_n, output, force);
    } catch (const Error &e) {
        std::cerr << "qlansim: " << e.what() << "\n";
        switch (e.code()) {
            case Errc::ConfigError:
            case Errc::ParseError:
                return kExitConfig;
            case Errc::InvariantViolation:
                return kExitInvariant;
            default:
                return kExitIo;
        }
    } catch (const std::exception &e) {
        std::cerr << "qlansim: " << e.what() << "\n";
        return kExitIo;
    }
}
