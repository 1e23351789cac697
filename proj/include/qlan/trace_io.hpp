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

#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qlan/error.hpp"
#include "qlan/graph_state.hpp"

namespace qlan {

/// One JSON object per line. Corrections carry the Clifford table index so a
/// trace reads back to identical records; `name` is for humans.
inline nlohmann::ordered_json record_to_json(const MeasurementRecord &r) {
    nlohmann::ordered_json j;
    j["tick"] = r.tick;
    j["vertex"] = r.vertex;
    j["owner"] = r.owner.label();
    j["basis"] = std::string(1, axis_char(r.axis));
    j["graph_basis"] = std::string(1, axis_char(r.effective_axis));
    j["outcome"] = r.outcome;
    j["probability"] = r.probability;
    j["b0"] = r.b0 ? nlohmann::ordered_json(*r.b0) : nlohmann::ordered_json(nullptr);
    auto corr = nlohmann::ordered_json::array();
    for (const auto &c : r.corrections) {
        corr.push_back({{"vertex", c.vertex}, {"clifford", c.op.index()}, {"name", c.op.name()}});
    }
    j["corrections"] = std::move(corr);
    return j;
}

inline MeasurementRecord record_from_json(const nlohmann::json &j) {
    try {
        MeasurementRecord r;
        r.tick = j.at("tick").get<std::uint64_t>();
        r.vertex = j.at("vertex").get<VertexId>();
        r.owner = NodeId::from_label(j.at("owner").get<std::string>());
        auto axis = [](const std::string &s) {
            if (s.size() != 1) throw Error(Errc::ParseError, "bad basis " + s);
            return axis_from_char(s[0]);
        };
        r.axis = axis(j.at("basis").get<std::string>());
        r.effective_axis = axis(j.at("graph_basis").get<std::string>());
        r.outcome = j.at("outcome").get<int>();
        r.probability = j.at("probability").get<double>();
        if (!j.at("b0").is_null()) r.b0 = j.at("b0").get<VertexId>();
        for (const auto &c : j.at("corrections")) {
            r.corrections.push_back({c.at("vertex").get<VertexId>(), Clifford::from_index(c.at("clifford").get<int>())});
        }
        return r;
    } catch (const nlohmann::json::exception &e) {
        throw Error(Errc::ParseError, std::string("trace record: ") + e.what());
    }
}

inline std::string trace_to_jsonl(const std::vector<MeasurementRecord> &trace) {
    std::string out;
    for (const auto &r : trace) out += record_to_json(r).dump() + '\n';
    return out;
}

inline std::vector<MeasurementRecord> parse_trace(std::istream &in) {
    std::vector<MeasurementRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception &e) {
            throw Error(Errc::ParseError, std::string("trace line: ") + e.what());
        }
        out.push_back(record_from_json(j));
    }
    return out;
}

inline std::vector<MeasurementRecord> parse_trace(const std::string &text) {
    std::istringstream in(text);
    return parse_trace(in);
}

}  // namespace qlan
