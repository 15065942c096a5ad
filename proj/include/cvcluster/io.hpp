// Copyright 2026 The cvcluster Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON, DOT and CSV encodings. JSON objects use sorted keys, so equal inputs
// give byte-identical documents. Every document carries "schema": 1.

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "cvcluster/builders.hpp"
#include "cvcluster/error_prop.hpp"
#include "cvcluster/nullifier.hpp"

namespace cvcluster::io {

using nlohmann::json;

inline constexpr int kSchema = 1;

// ---------------------------------------------------------------------------
// Scalars and expressions

inline json to_json(const RingCoeff& c) {
    return {{"a_num", c.rational_part().num()},
            {"a_exp", c.rational_part().exp()},
            {"b_num", c.sqrt2_part().num()},
            {"b_exp", c.sqrt2_part().exp()}};
}

inline RingCoeff ring_from_json(const json& j) {
    return RingCoeff(Dyadic(j.at("a_num").get<std::int64_t>(), j.at("a_exp").get<int>()),
                     Dyadic(j.at("b_num").get<std::int64_t>(), j.at("b_exp").get<int>()));
}

inline QuadLabel parse_label(const std::string& s) {
    if (s.size() < 3 || (s[0] != 'q' && s[0] != 'p') || s[1] != '_') throw std::invalid_argument("bad quadrature label '" + s + "'");
    return {ModeId::parse(s.substr(2)), s[0] == 'q' ? Axis::Q : Axis::P};
}

inline json to_json(const QuadExpr& e) {
    json j = json::object();
    for (const auto& [l, c] : e.terms()) j[l.to_string()] = to_json(c);
    return j;
}

inline QuadExpr expr_from_json(const json& j) {
    QuadExpr e;
    for (const auto& [k, v] : j.items()) e.add(parse_label(k), ring_from_json(v));
    return e;
}

inline json to_json(const QuadPair& p) { return {{"q", to_json(p.q)}, {"p", to_json(p.p)}}; }

inline QuadPair pair_from_json(const json& j) { return {expr_from_json(j.at("q")), expr_from_json(j.at("p"))}; }

inline json to_json(const Nullifier& n) {
    return {{"anchor", n.anchor.to_string()}, {"axis", std::string(1, to_char(n.axis))}, {"expr", to_json(n.expr)}};
}

// ---------------------------------------------------------------------------
// Gates and states

inline json to_json(const Gate& g) {
    json j;
    switch (g.kind) {
        case Gate::Kind::BeamSplitter:
            j = {{"kind", to_string(g.variant)}, {"x", g.x.to_string()}, {"y", g.y.to_string()}};
            break;
        case Gate::Kind::Fourier:
            j = {{"kind", "F"}, {"x", g.x.to_string()}};
            break;
        case Gate::Kind::Delay:
            j = {{"kind", "D"}, {"stream", std::string(1, to_char(g.stream))}, {"site", g.site}, {"shift", g.shift}};
            break;
        case Gate::Kind::MeasureQ:
            j = {{"kind", "MQ"}, {"x", g.x.to_string()}};
            break;
        case Gate::Kind::MeasureP:
            j = {{"kind", "MP"}, {"x", g.x.to_string()}};
            break;
    }
    return j;
}

inline Stream stream_from(const std::string& s) {
    if (s == "A") return Stream::A;
    if (s == "B") return Stream::B;
    throw std::invalid_argument("bad stream '" + s + "'");
}

inline Axis axis_from(const std::string& s) {
    if (s == "q" || s == "Q") return Axis::Q;
    if (s == "p" || s == "P") return Axis::P;
    throw std::invalid_argument("bad axis '" + s + "'");
}

inline Gate gate_from_json(const json& j) {
    const std::string k = j.at("kind").get<std::string>();
    auto mode = [&](const char* key) { return ModeId::parse(j.at(key).get<std::string>()); };
    if (k == "BS1") return Gate::beamsplitter(BeamSplitterVariant::BS1, mode("x"), mode("y"));
    if (k == "BS2") return Gate::beamsplitter(BeamSplitterVariant::BS2, mode("x"), mode("y"));
    if (k == "F") return Gate::fourier(mode("x"));
    if (k == "D") return Gate::delay(stream_from(j.at("stream").get<std::string>()), j.at("site").get<int>(), j.at("shift").get<int>());
    if (k == "MQ") return Gate::measure_q(mode("x"));
    if (k == "MP") return Gate::measure_p(mode("x"));
    throw std::invalid_argument("unknown gate kind '" + k + "'");
}

inline json to_json(const StateDescriptor& s) {
    json j = {{"kind", to_string(s.kind)}};
    switch (s.kind) {
        case StateKind::Epr1d:
            j["K"] = s.K;
            j["r_a"] = s.r_a;
            j["r_b"] = s.r_b;
            break;
        case StateKind::Hexagonal:
            j["k"] = s.hex_k;
            j["stream"] = std::string(1, to_char(s.hex_stream));
            j["r"] = s.r;
            break;
        case StateKind::Topological:
            j["N"] = s.lattice.N;
            j["M"] = s.lattice.M;
            j["T"] = s.lattice.T;
            j["V"] = s.lattice.V();
            j["K"] = s.K;
            j["r"] = s.r;
            break;
    }
    return j;
}

inline StateDescriptor descriptor_from_json(const json& j) {
    StateDescriptor s;
    s.kind = parse_state_kind(j.at("kind").get<std::string>());
    switch (s.kind) {
        case StateKind::Epr1d:
            s.K = j.at("K").get<int>();
            s.r_a = j.at("r_a").get<double>();
            s.r_b = j.at("r_b").get<double>();
            break;
        case StateKind::Hexagonal:
            s.hex_k = j.at("k").get<int>();
            s.hex_stream = stream_from(j.at("stream").get<std::string>());
            s.r = j.at("r").get<double>();
            break;
        case StateKind::Topological:
            s.lattice = {j.at("N").get<int>(), j.at("M").get<int>(), j.at("T").get<int>(), j.at("r").get<double>()};
            s.K = j.at("K").get<int>();
            s.r = s.lattice.r;
            break;
    }
    return s;
}

inline json mode_list(const std::set<ModeId>& s) {
    json a = json::array();
    for (const ModeId& m : s) a.push_back(m.to_string());
    return a;
}

/// BS2 partners as (A mode, B source mode).
inline json pairings(const BuiltState& st) {
    json a = json::array();
    if (st.spec.kind != StateKind::Topological) return a;
    const auto d = st.spec.lattice.delays();
    for (const Gate& g : st.program.gates)
        if (g.kind == Gate::Kind::BeamSplitter && g.variant == BeamSplitterVariant::BS2)
            a.push_back({{"A", g.x.to_string()},
                         {"B", ModeId(Stream::B, g.y.site, g.y.temporal - d[g.y.site]).to_string()}});
    return a;
}

inline json to_json(const BuiltState& st) {
    json gates = json::array();
    for (const Gate& g : st.program.gates) gates.push_back(to_json(g));
    json sources = json::array();
    for (const ModeId& m : st.program.sources) sources.push_back(m.to_string());
    json outputs = json::object();
    for (const auto& [m, p] : st.outputs) outputs[m.to_string()] = to_json(p);
    json measured = json::object();
    for (const auto& [m, p] : st.measured) measured[m.to_string()] = to_json(p);
    json profile = json::object();
    for (const auto& [m, s] : st.profile.entries())
        profile[m.to_string()] = {{"axis", std::string(1, to_char(s.axis))}, {"r", s.r}};
    return {{"schema", kSchema},
            {"spec", to_json(st.spec)},
            {"sources", sources},
            {"gates", gates},
            {"stage_boundaries", st.program.stage_boundaries},
            {"outputs", outputs},
            {"measured", measured},
            {"erased", mode_list(st.erased)},
            {"trimmed", mode_list(st.trimmed)},
            {"profile", profile},
            {"pairings", pairings(st)}};
}

inline void check_schema(const json& j) {
    if (!j.is_object() || !j.contains("schema") || j.at("schema") != kSchema)
        throw std::invalid_argument("document lacks \"schema\": 1");
}

inline BuiltState state_from_json(const json& j) {
    check_schema(j);
    BuiltState st;
    st.spec = descriptor_from_json(j.at("spec"));
    for (const auto& s : j.at("sources")) st.program.sources.push_back(ModeId::parse(s.get<std::string>()));
    for (const auto& g : j.at("gates")) st.program.gates.push_back(gate_from_json(g));
    st.program.stage_boundaries = j.at("stage_boundaries").get<std::vector<std::size_t>>();
    for (const auto& [k, v] : j.at("outputs").items()) st.outputs.emplace(ModeId::parse(k), pair_from_json(v));
    for (const auto& [k, v] : j.at("measured").items()) st.measured.emplace(ModeId::parse(k), pair_from_json(v));
    for (const auto& m : j.at("erased")) st.erased.insert(ModeId::parse(m.get<std::string>()));
    for (const auto& m : j.at("trimmed")) st.trimmed.insert(ModeId::parse(m.get<std::string>()));
    for (const auto& [k, v] : j.at("profile").items())
        st.profile.set(ModeId::parse(k), axis_from(v.at("axis").get<std::string>()), v.at("r").get<double>());
    return st;
}

// ---------------------------------------------------------------------------
// Graphs and reports

inline std::string sign_of(const RingCoeff& w) { return w.sign() >= 0 ? "+" : "-"; }

inline json to_json(const ClusterGraph& g) {
    json nodes = json::array();
    for (const ModeId& n : g.nodes()) nodes.push_back(n.to_string());
    json edges = json::array();
    for (const auto& [e, w] : g.edges())
        edges.push_back({{"i", e.first.to_string()},
                         {"j", e.second.to_string()},
                         {"w", w.to_double()},
                         {"weight", to_json(w)},
                         {"sign", sign_of(w)}});
    return {{"schema", kSchema}, {"nodes", nodes}, {"edges", edges}};
}

/// Signed edges, + blue and − yellow.
inline std::string to_dot(const ClusterGraph& g, const std::string& name = "cluster") {
    std::ostringstream os;
    os << "graph " << name << " {\n";
    for (const ModeId& n : g.nodes()) os << "  \"" << n.to_string() << "\";\n";
    for (const auto& [e, w] : g.edges()) {
        const std::string s = sign_of(w);
        os << "  \"" << e.first.to_string() << "\" -- \"" << e.second.to_string() << "\" [sign=\"" << s
           << "\", weight=\"" << w.to_string() << "\", color=" << (s == "+" ? "blue" : "yellow") << "];\n";
    }
    os << "}\n";
    return os.str();
}

inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// One row per nullifier, one column per quadrature that appears anywhere.
inline std::string nullifiers_csv(const std::vector<Nullifier>& nulls) {
    std::set<QuadLabel> cols;
    for (const Nullifier& n : nulls)
        for (const auto& [l, c] : n.expr.terms()) cols.insert(l);
    std::ostringstream os;
    os << "anchor,axis";
    for (const QuadLabel& l : cols) os << ',' << l.to_string();
    os << '\n';
    for (const Nullifier& n : nulls) {
        os << n.anchor.to_string() << ',' << to_char(n.axis);
        for (const QuadLabel& l : cols) os << ',' << format_double(n.expr.coeff(l).to_double());
        os << '\n';
    }
    return os.str();
}

template <class Cov>
std::string covariance_csv(const Cov& st) {
    std::ostringstream os;
    bool first = true;
    for (const ModeId& m : st.modes())
        for (Axis a : {Axis::Q, Axis::P}) {
            os << (first ? "" : ",") << QuadLabel{m, a}.to_string();
            first = false;
        }
    os << '\n';
    const auto& v = st.matrix();
    for (long i = 0; i < v.rows(); ++i) {
        for (long j = 0; j < v.cols(); ++j) os << (j ? "," : "") << format_double(v(i, j));
        os << '\n';
    }
    return os.str();
}

inline json to_json(const LatticeReport& r) {
    json edges = json::array();
    for (const EdgeReport& e : r.edges)
        edges.push_back({{"i", e.i.to_string()},
                         {"j", e.j.to_string()},
                         {"rail", std::string(1, to_char(e.rail))},
                         {"weight", e.weight.to_double()},
                         {"lhs", e.verdict.lhs},
                         {"rhs", e.verdict.rhs},
                         {"satisfied", e.verdict.satisfied}});
    return {{"edges", edges},
            {"global",
             {{"all_satisfied", r.all_satisfied},
              {"threshold_r", r.threshold_r},
              {"threshold_e2r", r.threshold_e2r},
              {"threshold_db", r.threshold_db}}}};
}

// ---------------------------------------------------------------------------
// Error-propagation scenarios

struct Scenario {
    ErrorGraph<std::string> graph;
    std::optional<Injection<std::string>> inject;
    FlowPlan<std::string> plan;
    std::vector<std::string> expect_zero;
};

inline ErrorGraph<std::string> error_graph_from_json(const json& j) {
    ErrorGraph<std::string> g;
    if (j.contains("nodes"))
        for (const auto& n : j.at("nodes")) g.add_node(n.get<std::string>());
    for (const auto& e : j.at("edges")) g.set_edge(e.at("i").get<std::string>(), e.at("j").get<std::string>(), e.at("w").get<double>());
    return g;
}

inline json read_json_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw std::invalid_argument("cannot open " + p.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(p.string() + ": " + e.what());
    }
}

/// `base` resolves a relative graph_ref.
inline Scenario scenario_from_json(const json& j, const std::filesystem::path& base = {}) {
    try {
        check_schema(j);
        Scenario s;
        if (j.contains("graph_ref")) {
            const std::filesystem::path ref = j.at("graph_ref").get<std::string>();
            s.graph = error_graph_from_json(read_json_file(ref.is_absolute() ? ref : base / ref));
        } else {
            s.graph = error_graph_from_json(j);
        }
        if (j.contains("inject") && !j.at("inject").is_null()) {
            const json& in = j.at("inject");
            s.inject = Injection<std::string>{in.at("node").get<std::string>(), axis_from(in.value("axis", "q")),
                                              in.at("value").get<double>()};
        }
        if (j.contains("plan"))
            for (const auto& st : j.at("plan")) {
                FlowStep<std::string> f{st.at("node").get<std::string>(), axis_from(st.value("basis", "p")), std::nullopt};
                if (st.contains("successor") && !st.at("successor").is_null()) f.successor = st.at("successor").get<std::string>();
                s.plan.push_back(f);
            }
        if (j.contains("expect_zero")) s.expect_zero = j.at("expect_zero").get<std::vector<std::string>>();
        return s;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("scenario: ") + e.what());
    }
}

inline json to_json(const ErrorState<std::string>& st) {
    json nodes = json::object();
    for (const auto& [n, d] : st.errors) nodes[n] = {{"dq", d.dq}, {"dp", d.dp}};
    json measured = json::object();
    for (const auto& [n, a] : st.measured) measured[n] = std::string(1, to_char(a));
    return {{"nodes", nodes}, {"measured", measured}};
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
    if (!out) throw std::runtime_error("cannot write " + p.string());
}

}  // namespace cvcluster::io
