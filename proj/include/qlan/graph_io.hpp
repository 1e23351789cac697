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
#include <regex>
#include <sstream>
#include <string>

#include "qlan/error.hpp"
#include "qlan/graph.hpp"

namespace qlan {

inline constexpr const char *kEdgeListHeader = "# qlan-graph v1";

/// Plain-text edge list: a header comment, one `# vertex <id> [label]` line
/// per vertex (so isolated vertices survive), then one `u v` line per edge.
/// Output order is sorted, so identical graphs give identical bytes.
inline std::string to_edge_list(const Graph &g) {
    std::ostringstream os;
    os << kEdgeListHeader << '\n';
    for (VertexId v : g.vertices()) {
        os << "# vertex " << v;
        if (!g.label(v).empty()) os << ' ' << g.label(v);
        os << '\n';
    }
    for (auto [u, v] : g.edges()) os << u << ' ' << v << '\n';
    return os.str();
}

inline Graph parse_edge_list(std::istream &in) {
    Graph g;
    std::string line;
    std::size_t lineno = 0;
    auto ensure = [&g](VertexId v) {
        if (!g.has_vertex(v)) g.add_vertex(v);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (line[0] == '#') {
            std::istringstream ls(line.substr(1));
            std::string key;
            ls >> key;
            if (key != "vertex") continue;
            long long id = -1;
            if (!(ls >> id) || id < 0) throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": bad vertex id");
            std::string label;
            std::getline(ls >> std::ws, label);
            g.add_vertex(static_cast<VertexId>(id), label);
            continue;
        }
        std::istringstream ls(line);
        long long u = -1, v = -1;
        std::string rest;
        if (!(ls >> u >> v) || u < 0 || v < 0 || (ls >> rest)) {
            throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": expected 'u v'");
        }
        ensure(static_cast<VertexId>(u));
        ensure(static_cast<VertexId>(v));
        g.add_edge(static_cast<VertexId>(u), static_cast<VertexId>(v));
    }
    return g;
}

inline Graph parse_edge_list(const std::string &text) {
    std::istringstream in(text);
    return parse_edge_list(in);
}

inline std::string dot_escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

/// Graphviz output. Vertex ids are node names; labels go into `label=`.
inline std::string to_dot(const Graph &g, const std::string &name = "G") {
    std::ostringstream os;
    os << "graph " << name << " {\n";
    for (VertexId v : g.vertices()) {
        os << "  " << v;
        if (!g.label(v).empty()) os << " [label=\"" << dot_escape(g.label(v)) << "\"]";
        os << ";\n";
    }
    for (auto [u, v] : g.edges()) os << "  " << u << " -- " << v << ";\n";
    os << "}\n";
    return os.str();
}

/// Reads back the subset of DOT that `to_dot` writes.
inline Graph parse_dot(const std::string &text) {
    static const std::regex node_re(R"re(^\s*(\d+)\s*(?:\[label="((?:[^"\\]|\\.)*)"\])?\s*;\s*$)re");
    static const std::regex edge_re(R"(^\s*(\d+)\s*--\s*(\d+)\s*;\s*$)");
    static const std::regex head_re(R"(^\s*graph\s+\w*\s*\{\s*$)");
    Graph g;
    std::istringstream in(text);
    std::string line;
    bool open = false, closed = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::smatch m;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (!open) {
            if (!std::regex_match(line, head_re)) throw Error(Errc::ParseError, "dot: missing graph header");
            open = true;
        } else if (line.find_first_not_of(" \t\r") == line.find('}') && line.find_last_not_of(" \t\r") == line.find('}')) {
            closed = true;
            break;
        } else if (std::regex_match(line, m, edge_re)) {
            const auto u = static_cast<VertexId>(std::stoul(m[1]));
            const auto v = static_cast<VertexId>(std::stoul(m[2]));
            if (!g.has_vertex(u)) g.add_vertex(u);
            if (!g.has_vertex(v)) g.add_vertex(v);
            g.add_edge(u, v);
        } else if (std::regex_match(line, m, node_re)) {
            std::string label;
            const std::string raw = m[2];
            for (std::size_t i = 0; i < raw.size(); ++i) {
                if (raw[i] == '\\' && i + 1 < raw.size()) ++i;
                label.push_back(raw[i]);
            }
            g.add_vertex(static_cast<VertexId>(std::stoul(m[1])), label);
        } else {
            throw Error(Errc::ParseError, "dot line " + std::to_string(lineno) + ": unsupported statement");
        }
    }
    if (!closed) throw Error(Errc::ParseError, "dot: unterminated graph");
    return g;
}

}  // namespace qlan
