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
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qlan/audit.hpp"
#include "qlan/error.hpp"
#include "qlan/graph_io.hpp"
#include "qlan/inter_qlan.hpp"
#include "qlan/qlan.hpp"
#include "qlan/trace_io.hpp"
#include "qlan/transduction.hpp"

namespace qlan {

using Json = nlohmann::json;

inline const std::vector<std::string> &scenario_kinds() {
    static const std::vector<std::string> kinds{"topology_demo", "transduction_sweep", "inter_qlan_demo", "oracle_audit"};
    return kinds;
}

namespace detail {

inline bool is_non_negative_integer(const Json &v) { return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0); }

}  // namespace detail

/// A named experiment. `params` holds the kind-specific keys.
struct Scenario {
    std::string kind;
    std::uint64_t seed = 0;
    std::string output;
    Json params = Json::object();
};

/// Reads one JSON object, rejecting unknown keys and ill-typed values with a
/// message naming the offending key.
class ParamReader {
  public:
    ParamReader(const Json &obj, std::string path, std::set<std::string> allowed) : obj_(obj), path_(std::move(path)) {
        if (obj_.is_null()) return;
        if (!obj_.is_object()) throw Error(Errc::ConfigError, path_ + ": expected an object");
        for (const auto &[k, v] : obj_.items()) {
            if (!allowed.count(k)) throw Error(Errc::ConfigError, key(k) + ": unknown key");
        }
    }

    bool has(const std::string &k) const { return obj_.is_object() && obj_.contains(k) && !obj_.at(k).is_null(); }
    const Json &raw(const std::string &k) const { return obj_.at(k); }
    std::string key(const std::string &k) const { return path_.empty() ? k : path_ + "." + k; }

    std::int64_t integer(const std::string &k, std::int64_t def, std::int64_t lo, std::int64_t hi) const {
        if (!has(k)) return def;
        const Json &v = obj_.at(k);
        if (!v.is_number_integer()) throw Error(Errc::ConfigError, key(k) + ": expected an integer");
        const auto x = v.get<std::int64_t>();
        if (x < lo || x > hi) throw Error(Errc::ConfigError, key(k) + ": must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return x;
    }

    double number(const std::string &k, double def, double lo, double hi) const {
        if (!has(k)) return def;
        const Json &v = obj_.at(k);
        if (!v.is_number()) throw Error(Errc::ConfigError, key(k) + ": expected a number");
        const double x = v.get<double>();
        if (!(x >= lo && x <= hi)) throw Error(Errc::ConfigError, key(k) + ": must lie in [" + format_number(lo) + ", " + format_number(hi) + "]");
        return x;
    }

    std::string string(const std::string &k, const std::string &def, const std::set<std::string> &choices = {}) const {
        if (!has(k)) return def;
        const Json &v = obj_.at(k);
        if (!v.is_string()) throw Error(Errc::ConfigError, key(k) + ": expected a string");
        auto s = v.get<std::string>();
        if (!choices.empty() && !choices.count(s)) throw Error(Errc::ConfigError, key(k) + ": unsupported value '" + s + "'");
        return s;
    }

    bool boolean(const std::string &k, bool def) const {
        if (!has(k)) return def;
        const Json &v = obj_.at(k);
        if (!v.is_boolean()) throw Error(Errc::ConfigError, key(k) + ": expected true or false");
        return v.get<bool>();
    }

    const Json &array(const std::string &k) const {
        const Json &v = obj_.at(k);
        if (!v.is_array()) throw Error(Errc::ConfigError, key(k) + ": expected an array");
        return v;
    }

  private:
    const Json &obj_;
    std::string path_;
};

inline Scenario parse_scenario(const Json &j) {
    ParamReader top(j, "", {"kind", "seed", "output", "params"});
    if (!top.has("kind")) throw Error(Errc::ConfigError, "kind: missing");
    if (!top.has("seed")) throw Error(Errc::ConfigError, "seed: missing (every scenario needs an explicit seed)");
    Scenario s;
    s.kind = top.string("kind", "", {scenario_kinds().begin(), scenario_kinds().end()});
    if (!detail::is_non_negative_integer(j.at("seed"))) throw Error(Errc::ConfigError, "seed: expected a non-negative integer");
    s.seed = j.at("seed").get<std::uint64_t>();
    s.output = top.string("output", "");
    if (top.has("params")) {
        if (!j.at("params").is_object()) throw Error(Errc::ConfigError, "params: expected an object");
        s.params = j.at("params");
    }
    return s;
}

inline Json scenario_to_json(const Scenario &s) {
    Json j;
    j["kind"] = s.kind;
    j["seed"] = s.seed;
    if (!s.output.empty()) j["output"] = s.output;
    j["params"] = s.params;
    return j;
}

inline Scenario load_scenario(const std::filesystem::path &file) {
    std::ifstream in(file);
    if (!in) throw Error(Errc::ConfigError, "cannot read " + file.string());
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::exception &e) {
        throw Error(Errc::ConfigError, file.string() + ": " + e.what());
    }
    return parse_scenario(j);
}

/// Sets a dotted key such as "params.timing.latency_us" to a JSON value.
inline void set_override(Json &j, const std::string &dotted, const Json &value) {
    if (dotted.empty()) throw Error(Errc::ConfigError, "empty override key");
    Json *cur = &j;
    std::size_t start = 0;
    while (true) {
        const auto dot = dotted.find('.', start);
        const std::string part = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw Error(Errc::ConfigError, dotted + ": malformed key");
        if (!cur->is_object()) *cur = Json::object();
        if (dot == std::string::npos) {
            (*cur)[part] = value;
            return;
        }
        cur = &(*cur)[part];
        start = dot + 1;
    }
}

/// Parses an override value: JSON if it parses, otherwise a plain string.
inline Json parse_value(const std::string &text) {
    try {
        return Json::parse(text);
    } catch (const Json::exception &) {
        return Json(text);
    }
}

/// One output file, relative to the scenario directory.
struct Artifact {
    std::string name;
    std::string content;
};

struct RunResult {
    std::vector<Artifact> artifacts;
    std::vector<std::pair<std::string, std::string>> summary;  // headline metrics, in order
    std::vector<std::string> violations;

    void add(std::string name, std::string content) { artifacts.push_back({std::move(name), std::move(content)}); }
    void metric(std::string key, std::string value) { summary.emplace_back(std::move(key), std::move(value)); }

    std::string summary_csv() const {
        std::string out = "metric,value\n";
        for (const auto &[k, v] : summary) out += k + ',' + v + '\n';
        return out;
    }
};

namespace detail {

inline void add_graph(RunResult &r, const std::string &stem, const Graph &g) {
    r.add(stem + ".edges", to_edge_list(g));
    r.add(stem + ".dot", to_dot(g, stem));
}

inline Timing parse_timing(const ParamReader &p) {
    Timing t;
    if (!p.has("timing")) return t;
    ParamReader tr(p.raw("timing"), p.key("timing"), {"latency_us", "coherence_us", "base_fidelity"});
    t.latency_us = tr.number("latency_us", t.latency_us, 1e-9, 1e12);
    t.coherence_us = tr.number("coherence_us", t.coherence_us, 1e-9, 1e15);
    t.base_fidelity = tr.number("base_fidelity", t.base_fidelity, 0.25, 1.0);
    if (t.base_fidelity <= 0.25) throw Error(Errc::ConfigError, tr.key("base_fidelity") + ": must exceed 0.25");
    return t;
}

inline RetentionPlan parse_plan(const Json &arr, const std::string &where) {
    if (!arr.is_array()) throw Error(Errc::ConfigError, where + ": expected an array of node labels");
    RetentionPlan plan;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_string()) throw Error(Errc::ConfigError, where + "[" + std::to_string(i) + "]: expected a node label");
        try {
            plan.push_back(NodeId::from_label(arr[i].get<std::string>()));
        } catch (const Error &e) {
            throw Error(Errc::ConfigError, where + "[" + std::to_string(i) + "]: " + e.what());
        }
    }
    return plan;
}

inline TrafficRequest parse_request(const Json &j, const std::string &where) {
    ParamReader r(j, where, {"type", "a", "b", "client", "target"});
    const auto type = r.string("type", "", {"pair", "disconnect", "topology"});
    if (type == "pair") {
        if (!r.has("a") || !r.has("b")) throw Error(Errc::ConfigError, where + ": pair requests need 'a' and 'b'");
        return PairRequest{r.string("a", ""), r.string("b", "")};
    }
    if (type == "disconnect") {
        if (!r.has("client")) throw Error(Errc::ConfigError, where + ": disconnect requests need 'client'");
        return DisconnectRequest{r.string("client", "")};
    }
    if (type == "topology") {
        const auto target = r.string("target", "bus", {"bus", "proximity"});
        TopologyChangeRequest t;
        t.target = target == "bus" ? TopologyTarget::Bus : TopologyTarget::Proximity;
        if (t.target == TopologyTarget::Proximity) {
            if (!r.has("a") || !r.has("b")) throw Error(Errc::ConfigError, where + ": proximity requests need 'a' and 'b'");
            t.a = r.string("a", "");
            t.b = r.string("b", "");
        }
        return t;
    }
    throw Error(Errc::ConfigError, where + ".type: missing");
}

inline std::string request_type(const TrafficRequest &r) {
    if (std::holds_alternative<PairRequest>(r)) return "pair";
    if (std::holds_alternative<DisconnectRequest>(r)) return "disconnect";
    return std::get<TopologyChangeRequest>(r).target == TopologyTarget::Bus ? "bus" : "proximity";
}

inline bool is_path_over(const Graph &g, std::size_t n) {
    if (g.num_vertices() != n || !is_connected(g) || g.num_edges() + 1 != n) return false;
    for (VertexId v : g.vertices()) {
        if (g.degree(v) > 2) return false;
    }
    return true;
}

inline RunResult run_topology_demo(const Scenario &s) {
    ParamReader p(s.params, "params", {"clients", "orchestrator", "k", "retention", "timing", "policy", "requests", "dense"});
    QlanConfig cfg = QlanConfig::with_clients(static_cast<std::size_t>(p.integer("clients", 6, 1, 120)), p.string("orchestrator", "o"));
    cfg.timing = parse_timing(p);
    const Policy policy = p.string("policy", "centralized", {"centralized", "permissive"}) == "centralized" ? Policy::Centralized : Policy::Permissive;
    RetentionPlan plan = alternating_plan(cfg);
    if (p.has("retention")) {
        const Json &ret = p.raw("retention");
        if (ret.is_string()) {
            if (ret.get<std::string>() != "alternating") throw Error(Errc::ConfigError, p.key("retention") + ": expected \"alternating\" or a list of node labels");
        } else {
            plan = parse_plan(ret, p.key("retention"));
        }
    }
    const auto k = static_cast<std::size_t>(p.integer("k", static_cast<std::int64_t>(plan.size()), 1, 250));
    std::vector<TrafficRequest> requests;
    if (p.has("requests")) {
        const Json &arr = p.array("requests");
        for (std::size_t i = 0; i < arr.size(); ++i) requests.push_back(parse_request(arr[i], p.key("requests") + "[" + std::to_string(i) + "]"));
    } else {
        requests.push_back(TopologyChangeRequest{TopologyTarget::Bus, {}, {}});
    }

    RunResult r;
    Rng rng(s.seed);
    Rng outcomes = rng.split(1);
    const OutcomePolicy sampled = OutcomePolicy::sample(outcomes);
    add_graph(r, "physical_star", cfg.physical_topology());
    GraphState state = distribute_linear(cfg, k, plan, policy);
    add_graph(r, "linear", artificial_topology(state, true));

    Clock clock;
    std::vector<MeasurementRecord> trace;
    std::string metrics = "request_id,type,rounds,elapsed_us,fidelity\n";
    std::size_t served = 0;
    for (std::size_t i = 0; i < requests.size(); ++i) {
        const auto &req = requests[i];
        const std::string type = request_type(req);
        ServeResult out;
        try {
            out = serve_request(cfg, state, req, clock, sampled);
        } catch (const Error &e) {
            if (e.code() != Errc::Unservable) throw;
            metrics += std::to_string(i + 1) + ',' + type + ",0,0,\n";
            r.metric("request_" + std::to_string(i + 1), "unservable");
            continue;
        }
        if (type == "bus" && !is_path_over(artificial_topology(out.state), cfg.clients.size())) {
            r.violations.push_back("request " + std::to_string(i + 1) + ": bus topology is not a path over the clients");
        }
        if (out.link) {
            ++served;
            if (!(out.link->fidelity > 0.25 && out.link->fidelity <= cfg.timing.base_fidelity + 1e-15)) {
                r.violations.push_back("request " + std::to_string(i + 1) + ": fidelity out of range");
            }
            if (!out.state.graph.has_edge(out.link->u, out.link->v) || out.state.graph.degree(out.link->u) != 1 ||
                out.state.graph.degree(out.link->v) != 1) {
                r.violations.push_back("request " + std::to_string(i + 1) + ": extracted pair is not an isolated edge");
            }
        }
        metrics += std::to_string(i + 1) + ',' + type + ',' + std::to_string(out.rounds) + ',' + format_number(out.elapsed_us) + ',' +
                   (out.link ? format_number(out.link->fidelity) : std::string()) + '\n';
        trace.insert(trace.end(), out.trace.begin(), out.trace.end());
        state = std::move(out.state);
        add_graph(r, "step_" + std::to_string(i + 1) + "_" + type, artificial_topology(state, true));
    }
    r.add("metrics.csv", metrics);
    r.add("trace.jsonl", trace_to_jsonl(trace));

    if (p.has("dense")) {
        ParamReader d(p.raw("dense"), p.key("dense"), {"chains", "merges", "collapse"});
        std::vector<GraphState> chains;
        const Json &cs = d.array("chains");
        for (std::size_t i = 0; i < cs.size(); ++i) {
            const auto cp = parse_plan(cs[i], d.key("chains") + "[" + std::to_string(i) + "]");
            chains.push_back(distribute_linear(cfg, cp.size(), cp, Policy::Permissive));
        }
        std::vector<MergePair> merges;
        if (d.has("merges")) {
            const Json &ms = d.array("merges");
            for (std::size_t i = 0; i < ms.size(); ++i) {
                const Json &m = ms[i];
                if (!m.is_array() || m.size() != 4 || !std::all_of(m.begin(), m.end(), [](const Json &x) { return is_non_negative_integer(x); })) {
                    throw Error(Errc::ConfigError, d.key("merges") + "[" + std::to_string(i) + "]: expected [chain_a, vertex_a, chain_b, vertex_b]");
                }
                merges.push_back({m[0].get<std::size_t>(), m[1].get<VertexId>(), m[2].get<std::size_t>(), m[3].get<VertexId>()});
            }
        }
        const auto collapse = d.string("collapse", "Y", {"X", "Y", "Z", "none"});
        std::optional<Axis> axis;
        if (collapse != "none") axis = axis_from_char(collapse[0]);
        Rng dense_rng = rng.split(2);
        const auto built = build_dense(cfg, chains, merges, axis, OutcomePolicy::sample(dense_rng));
        add_graph(r, "dense", built.topology);
        r.add("dense_trace.jsonl", trace_to_jsonl(built.trace));
        r.metric("dense_edges", std::to_string(built.topology.num_edges()));
    }

    r.metric("clients", std::to_string(cfg.clients.size()));
    r.metric("requests", std::to_string(requests.size()));
    r.metric("served_links", std::to_string(served));
    r.metric("measurements", std::to_string(trace.size()));
    r.metric("rounds", std::to_string(clock.round));
    r.metric("elapsed_us", format_number(clock.now_us));
    r.metric("final_edges", std::to_string(state.graph.num_edges()));
    return r;
}

inline RunResult run_transduction_sweep(const Scenario &s) {
    ParamReader p(s.params, "params",
                  {"grid", "eta", "alpha_sq_s", "alpha_sq_d", "length_km", "attenuation_db_per_km", "detector_efficiency", "detector", "oracle_check",
                   "attempt_overhead_us"});
    const auto grid = static_cast<std::size_t>(p.integer("grid", 20, 1, 1000));
    const TransducerParams ts = TransducerParams::with(1.0, p.number("alpha_sq_s", 0.5, 0.0, 1.0));
    const TransducerParams td = TransducerParams::with(1.0, p.number("alpha_sq_d", 0.5, 0.0, 1.0));
    LinkBudget lb;
    lb.length_km = p.number("length_km", 0.0, 0.0, 1e5);
    lb.attenuation_db_per_km = p.number("attenuation_db_per_km", 0.2, 0.0, 100.0);
    lb.detector_efficiency = p.number("detector_efficiency", 1.0, 0.0, 1.0);
    lb.detector = p.string("detector", "pnr", {"pnr", "threshold"}) == "pnr" ? DetectorType::PhotonNumberResolving : DetectorType::Threshold;
    lb.attempt_overhead_us = p.number("attempt_overhead_us", 1.0, 0.0, 1e12);
    const bool oracle = p.boolean("oracle_check", true);
    lb.validate();

    std::vector<SweepRow> rows;
    if (p.has("eta")) {
        const double eta = p.number("eta", 1.0, 0.0, 1.0);
        TransducerParams a = ts, b = td;
        a.eta = b.eta = eta;
        const auto q = dqt_epr_rate(a, b, lb);
        const auto e = egt_herald(a, b, lb);
        rows.push_back({eta, eta, q.per_attempt_success, q.ebit_rate_factor, e.p_herald, e.f_herald});
    } else {
        rows = transduction_grid(grid, ts, td, lb);
    }

    RunResult r;
    double max_dev = 0.0, min_p = 1.0, max_rate = 0.0;
    std::size_t dqt_null = 0;
    std::string attempts = "eta_s,eta_d,dqt_mean_attempts,egt_mean_attempts,egt_q90_attempts,egt_mean_latency_us\n";
    for (const auto &row : rows) {
        TransducerParams a = ts, b = td;
        a.eta = row.eta_s;
        b.eta = row.eta_d;
        if (oracle) {
            const auto o = fock_oracle(a, b, lb);
            max_dev = std::max({max_dev, std::abs(o.p_herald - row.p_herald), std::abs(o.total_probability - 1.0)});
            if (o.f_herald.has_value() != row.f_herald.has_value()) {
                max_dev = 1.0;
            } else if (o.f_herald) {
                max_dev = std::max(max_dev, std::abs(*o.f_herald - *row.f_herald));
            }
        }
        if (row.rate_factor == 0.0) ++dqt_null;
        min_p = std::min(min_p, row.p_herald);
        max_rate = std::max(max_rate, row.rate_factor);
        if (row.eta_s > 0.0 && row.eta_d > 0.0 && lb.detector_efficiency > 0.0 && row.p_herald <= 0.0 && std::norm(a.alpha) > 0.0 &&
            std::norm(b.alpha) > 0.0) {
            r.violations.push_back("EGT heralding probability vanished at eta_s=" + format_number(row.eta_s) + " eta_d=" + format_number(row.eta_d));
        }
        const RegenerationPolicy regen{std::nullopt, lb.attempt_period_us()};
        const auto dq = try_attempts_until_success(row.p_dqt, regen);
        const auto eg = try_attempts_until_success(row.p_herald, regen);
        attempts += format_number(row.eta_s) + ',' + format_number(row.eta_d) + ',' + (dq ? format_number(dq->mean) : std::string()) + ',' +
                    (eg ? format_number(eg->mean) : std::string()) + ',' + (eg ? std::to_string(eg->q90) : std::string()) + ',' +
                    (eg ? format_number(eg->mean_latency_us) : std::string()) + '\n';
    }
    if (oracle && max_dev > 1e-9) r.violations.push_back("closed form deviates from the Fock oracle by " + format_number(max_dev));
    r.add("sweep.csv", sweep_csv(rows));
    r.add("attempts.csv", attempts);
    r.metric("points", std::to_string(rows.size()));
    r.metric("dqt_null_points", std::to_string(dqt_null));
    r.metric("max_rate_factor", format_number(max_rate));
    r.metric("min_p_herald", format_number(min_p));
    if (oracle) r.metric("max_oracle_deviation", format_number(max_dev));
    return r;
}

inline PrototypeKind parse_prototype(const Json &j, const std::string &where) {
    ParamReader p(j, where, {"kind", "pure", "delegate", "from", "to", "pairs"});
    const auto kind = p.string("kind", "", {"peer_to_peer", "role_delegation", "clients_handover", "extranet"});
    if (kind == "peer_to_peer") return PeerToPeer{p.boolean("pure", false)};
    if (kind == "role_delegation") {
        if (!p.has("delegate")) throw Error(Errc::ConfigError, where + ": role delegation needs 'delegate'");
        return RoleDelegation{p.string("delegate", "")};
    }
    if (kind == "clients_handover") {
        return ClientsHandover{static_cast<std::size_t>(p.integer("from", 0, 0, 1000)), static_cast<std::size_t>(p.integer("to", 1, 0, 1000))};
    }
    if (kind == "extranet") {
        Extranet e;
        const Json &pairs = p.array("pairs");
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const Json &pr = pairs[i];
            if (!pr.is_array() || pr.size() != 2 || !pr[0].is_string() || !pr[1].is_string()) {
                throw Error(Errc::ConfigError, p.key("pairs") + "[" + std::to_string(i) + "]: expected [client, client]");
            }
            e.pairs.emplace_back(pr[0].get<std::string>(), pr[1].get<std::string>());
        }
        return e;
    }
    throw Error(Errc::ConfigError, where + ".kind: missing");
}

inline std::vector<PrototypeKind> default_prototypes(const MultiQlanNetwork &net) {
    std::vector<PrototypeKind> out{PeerToPeer{false}, PeerToPeer{true}};
    const auto &c0 = net.qlans[0].clients;
    out.push_back(RoleDelegation{c0.size() > 1 ? c0[1] : c0[0]});
    if (net.qlans.size() > 1) {
        out.push_back(ClientsHandover{0, 1});
        out.push_back(Extranet{{{c0[0], net.qlans[1].clients[0]}}});
    }
    return out;
}

inline std::string log_csv(const OperationLog &log) {
    std::string out = "round,actor,kind,vertex,vertex_owner\n";
    for (const auto &e : log.entries()) {
        out += std::to_string(e.round) + ',' + e.actor.label() + ',' + (e.kind == OpKind::Measurement ? "measurement" : "classical_correction") + ',' +
               std::to_string(e.vertex) + ',' + e.vertex_owner.label() + '\n';
    }
    return out;
}

inline RunResult run_inter_qlan_demo(const Scenario &s) {
    ParamReader p(s.params, "params", {"qlans", "clients_per_qlan", "max_depth", "prototypes"});
    const auto n = static_cast<std::size_t>(p.integer("qlans", 2, 1, 8));
    const auto per = static_cast<std::size_t>(p.integer("clients_per_qlan", 3, 1, 16));
    const auto depth = static_cast<std::size_t>(p.integer("max_depth", 6, 0, 12));
    const MultiQlanNetwork net = MultiQlanNetwork::uniform(n, per);
    std::vector<PrototypeKind> kinds;
    if (p.has("prototypes")) {
        const Json &arr = p.array("prototypes");
        for (std::size_t i = 0; i < arr.size(); ++i) kinds.push_back(parse_prototype(arr[i], p.key("prototypes") + "[" + std::to_string(i) + "]"));
    } else {
        kinds = default_prototypes(net);
    }
    const GraphState resource = build_resource(net, n == 2 ? ResourceKind::BiStar : ResourceKind::NStar, n);
    RunResult r;
    add_graph(r, "resource", resource.graph);
    Rng rng(s.seed);
    std::string reports = report_csv_header();
    std::size_t feasible = 0;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        const std::string stem = "p" + std::to_string(i + 1) + "_" + prototype_name(kinds[i]);
        FeasibilityReport rep;
        try {
            rep = feasibility_report(net, resource, kinds[i], depth);
        } catch (const Error &e) {
            throw Error(Errc::ConfigError, p.key("prototypes") + "[" + std::to_string(i) + "]: " + e.what());
        }
        reports += report_csv_row(rep);
        add_graph(r, stem + "_target", target_adjacency(net, resource, kinds[i]));
        if (!rep.feasible) continue;
        ++feasible;
        Rng outcomes = rng.split(i + 1);
        const auto real = realize_prototype(net, resource, kinds[i], OutcomePolicy::sample(outcomes), depth);
        if (!verify_locality(real.log)) r.violations.push_back(stem + ": non-local operation in log");
        add_graph(r, stem, real.topology);
        r.add(stem + ".recipe", recipe_to_text(real.recipe));
        r.add(stem + ".trace.jsonl", trace_to_jsonl(real.trace));
        r.add(stem + ".log.csv", log_csv(real.log));
    }
    r.add("reports.csv", reports);
    r.metric("qlans", std::to_string(n));
    r.metric("resource_vertices", std::to_string(resource.graph.num_vertices()));
    r.metric("prototypes", std::to_string(kinds.size()));
    r.metric("feasible", std::to_string(feasible));
    return r;
}

inline RunResult run_oracle_audit(const Scenario &s) {
    ParamReader p(s.params, "params", {"max_n", "dense_samples", "dense_max_n"});
    AuditOptions opt;
    opt.max_n = static_cast<std::size_t>(p.integer("max_n", 6, 1, 7));
    opt.dense_samples = static_cast<std::size_t>(p.integer("dense_samples", 200, 0, 100000));
    opt.dense_max_n = static_cast<std::size_t>(p.integer("dense_max_n", 8, 2, 12));
    const auto a = audit_measurement_calculus(opt, s.seed);
    RunResult r;
    const std::uint64_t bad = a.mismatches + a.dense_mismatches;
    std::string text = std::to_string(a.graphs) + " graphs, " + std::to_string(a.cases) + " tableau cases, " + std::to_string(a.dense_cases) +
                       " dense cases: " + std::to_string(bad) + " mismatches\n";
    if (!a.first_failure.empty()) text += "first failure: " + a.first_failure + "\n";
    r.add("audit.txt", text);
    r.metric("graphs", std::to_string(a.graphs));
    r.metric("tableau_cases", std::to_string(a.cases));
    r.metric("tableau_mismatches", std::to_string(a.mismatches));
    r.metric("dense_cases", std::to_string(a.dense_cases));
    r.metric("dense_mismatches", std::to_string(a.dense_mismatches));
    r.metric("max_dense_error", format_number(a.max_dense_error));
    if (!a.ok()) r.violations.push_back("measurement rules disagree with the oracles: " + a.first_failure);
    return r;
}

}  // namespace detail

/// Executes a scenario in memory. Library errors caused by the configuration
/// surface as ConfigError.
inline RunResult run_scenario(const Scenario &s) {
    RunResult r;
    try {
        if (s.kind == "topology_demo") {
            r = detail::run_topology_demo(s);
        } else if (s.kind == "transduction_sweep") {
            r = detail::run_transduction_sweep(s);
        } else if (s.kind == "inter_qlan_demo") {
            r = detail::run_inter_qlan_demo(s);
        } else if (s.kind == "oracle_audit") {
            r = detail::run_oracle_audit(s);
        } else {
            throw Error(Errc::ConfigError, "kind: unsupported value '" + s.kind + "'");
        }
    } catch (const Error &e) {
        if (e.code() == Errc::ConfigError || e.code() == Errc::InvariantViolation || e.code() == Errc::IoError) throw;
        throw Error(Errc::ConfigError, std::string("params: ") + e.what());
    }
    r.add("summary.csv", r.summary_csv());
    r.add("scenario.json", scenario_to_json(s).dump(2) + "\n");
    return r;
}

/// Writes every artifact under `dir`. Refuses to replace existing files
/// unless `force` is set; files are written to a temporary name and renamed.
inline void write_artifacts(const std::filesystem::path &dir, const std::vector<Artifact> &artifacts, bool force) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(Errc::IoError, "cannot create " + dir.string() + ": " + ec.message());
    if (!force) {
        for (const auto &a : artifacts) {
            if (fs::exists(dir / a.name)) throw Error(Errc::IoError, (dir / a.name).string() + " exists (use --force to overwrite)");
        }
    }
    for (const auto &a : artifacts) {
        const fs::path target = dir / a.name;
        const fs::path tmp = dir / (a.name + ".tmp");
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw Error(Errc::IoError, "cannot write " + tmp.string());
            out << a.content;
            if (!out) throw Error(Errc::IoError, "short write to " + tmp.string());
        }
        fs::rename(tmp, target, ec);
        if (ec) throw Error(Errc::IoError, "cannot rename to " + target.string() + ": " + ec.message());
    }
}

}  // namespace qlan
