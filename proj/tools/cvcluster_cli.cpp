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

// Command-line front end.
//
// Exit codes: 0 pass, 1 verification failed, 2 input error,
// 3 symbolic and covariance routes disagree.

#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "cvcluster/cvcluster.hpp"

namespace {

using namespace cvcluster;
using cvcluster::io::json;

enum Exit : int { kPass = 0, kFail = 1, kInput = 2, kOracle = 3 };

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string state = "topological";
    int n = 2;
    int m = 2;
    int layers = 1;
    std::optional<double> squeeze_db;
    std::optional<double> squeeze_r;
    bool no_trim = false;
    std::string input;
    std::string out;
    std::string format = "json";
    bool covariance = false;
    std::string scenario;
    bool cz_minus = false;
};

void add_state_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--state", cfg.state, "epr1d, hexagonal or topological")
        ->check(CLI::IsMember({"epr1d", "hexagonal", "topological"}));
    cmd->add_option("--n", cfg.n, "basal-plane width N; the number of slots K for epr1d");
    cmd->add_option("--m", cfg.m, "basal-plane height M");
    cmd->add_option("--layers", cfg.layers, "temporal layers T");
    auto* db = cmd->add_option("--squeeze-db", cfg.squeeze_db,
                               "squeezing level in dB; the magnitude is used, so 5 and -5 both mean -5 dB");
    auto* r = cmd->add_option("--squeeze-r", cfg.squeeze_r, "squeezing parameter r >= 0");
    db->excludes(r);
    r->excludes(db);
    cmd->add_flag("--no-trim", cfg.no_trim, "keep the topological lattice untrimmed");
    cmd->add_option("--input", cfg.input, "load a state written by 'build' instead of building one");
}

double squeeze_r(const RunConfig& cfg) {
    if (cfg.squeeze_r) {
        if (!(*cfg.squeeze_r >= 0.0) || !std::isfinite(*cfg.squeeze_r)) throw InputError("--squeeze-r must be a finite r >= 0");
        return *cfg.squeeze_r;
    }
    if (cfg.squeeze_db) {
        if (!std::isfinite(*cfg.squeeze_db)) throw InputError("--squeeze-db must be finite");
        return r_from_db(*cfg.squeeze_db);
    }
    throw InputError("exactly one of --squeeze-db and --squeeze-r is required");
}

BuiltState make_state(const RunConfig& cfg) {
    if (!cfg.input.empty()) return io::state_from_json(io::read_json_file(cfg.input));
    const double r = squeeze_r(cfg);
    switch (parse_state_kind(cfg.state)) {
        case StateKind::Epr1d:
            return build_epr1d(cfg.n, r, r);
        case StateKind::Hexagonal:
            return build_hexagonal(0, r, Stream::A);
        case StateKind::Topological: {
            const LatticeSpec spec{cfg.n, cfg.m, cfg.layers, r};
            BuiltState st = build_topological(spec);
            return cfg.no_trim ? st : trim_boundary(std::move(st), spec);
        }
    }
    throw InputError("unknown state");
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-")
        std::cout << text;
    else
        try {
            io::write_text(path, text);
        } catch (const std::runtime_error& e) {
            throw InputError(e.what());
        }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

const ClusterGraph& primary_graph(const VerificationInput& in) { return in.graphs.front(); }

int cmd_build(const RunConfig& cfg) {
    const BuiltState st = make_state(cfg);
    const VerificationInput in = verification_input(st);
    emit(cfg.out, dump(io::to_json(st)));
    std::ostream& log = (cfg.out.empty() || cfg.out == "-") ? std::cerr : std::cout;
    log << to_string(st.spec.kind) << ": " << st.window().size() << " modes, " << st.outputs.size() << " retained, "
        << st.erased.size() << " erased, " << st.trimmed.size() << " trimmed, " << primary_graph(in).edge_count()
        << " edges\n";
    return kPass;
}

int cmd_verify(const RunConfig& cfg) {
    const BuiltState st = make_state(cfg);
    const VerificationInput in = verification_input(st);
    const LatticeReport rep = full_lattice_verify(st, in);
    const CrossCheck cc = oracle_cross_check(st, in.canonical);

    json doc = io::to_json(rep);
    doc["schema"] = io::kSchema;
    doc["state"] = io::to_json(st.spec);
    doc["oracle"] = {{"max_rel_error_pre", cc.max_rel_pre},
                     {"max_rel_error_post", cc.max_rel_post},
                     {"compared", cc.compared},
                     {"tolerance", kOracleTolerance},
                     {"agree", cc.ok()}};
    emit(cfg.out, dump(doc));

    std::ostream& log = (cfg.out.empty() || cfg.out == "-") ? std::cerr : std::cout;
    std::size_t passed = 0;
    for (const auto& e : rep.edges) passed += e.verdict.satisfied ? 1 : 0;
    char line[256];
    std::snprintf(line, sizeof line, "%s: %zu/%zu edges satisfied; minimal squeezing %.4f dB (e^-2r = %.6f); oracle %s\n",
                  to_string(st.spec.kind).c_str(), passed, rep.edges.size(), rep.threshold_db, rep.threshold_e2r,
                  cc.ok() ? "agrees" : "DISAGREES");
    log << line;
    if (!cc.ok()) return kOracle;
    return rep.all_satisfied ? kPass : kFail;
}

int cmd_export(const RunConfig& cfg) {
    const BuiltState st = make_state(cfg);
    if (cfg.covariance) {
        if (cfg.format != "csv") throw InputError("--covariance needs --format csv");
        emit(cfg.out, io::covariance_csv(run_numeric(st.program, st.profile)));
        return kPass;
    }
    const VerificationInput in = verification_input(st);
    if (cfg.format == "dot") {
        emit(cfg.out, io::to_dot(primary_graph(in)));
    } else if (cfg.format == "csv") {
        const auto nulls = st.spec.kind == StateKind::Topological ? retained_nullifiers(in.canonical, st) : in.canonical;
        emit(cfg.out, io::nullifiers_csv(nulls));
    } else {
        emit(cfg.out, dump(io::to_json(primary_graph(in))));
    }
    return kPass;
}

int cmd_errorprop(const RunConfig& cfg) {
    if (cfg.scenario.empty()) throw InputError("--scenario is required");
    const std::filesystem::path path = cfg.scenario;
    const io::Scenario sc = io::scenario_from_json(io::read_json_file(path), path.parent_path());
    const auto conv = cfg.cz_minus ? CzConvention::kMinus : CzConvention::kPlus;
    const ErrorState<std::string> res = run_cancellation_scenario(sc.graph, sc.inject, sc.plan, conv);
    bool ok = true;
    json zero = json::object();
    for (const std::string& n : sc.expect_zero) {
        if (!sc.graph.contains(n)) throw InputError("expect_zero names unknown node '" + n + "'");
        const Displacement d = res.get(n);
        const bool z = d.dq == 0.0 && d.dp == 0.0;
        zero[n] = z;
        ok = ok && z;
    }
    json doc = io::to_json(res);
    doc["schema"] = io::kSchema;
    doc["expect_zero"] = zero;
    doc["pass"] = ok;
    emit(cfg.out, dump(doc));
    return ok ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Continuous-variable cluster-state builder and verifier"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* build = app.add_subcommand("build", "build a state and write it as JSON");
    add_state_options(build, cfg);
    build->add_option("--out", cfg.out, "output path (default stdout)");

    auto* verify = app.add_subcommand("verify", "check every nearest-neighbor inseparability inequality");
    add_state_options(verify, cfg);
    verify->add_option("--out", cfg.out, "report path (default stdout)");

    auto* exp = app.add_subcommand("export", "write the graph or nullifiers");
    add_state_options(exp, cfg);
    exp->add_option("--out", cfg.out, "output path (default stdout)");
    exp->add_option("--format", cfg.format, "json, dot or csv")->check(CLI::IsMember({"json", "dot", "csv"}));
    exp->add_flag("--covariance", cfg.covariance, "with --format csv, dump the covariance matrix instead");

    auto* ep = app.add_subcommand("errorprop", "run a displacement-error scenario");
    ep->add_option("--scenario", cfg.scenario, "scenario JSON")->required();
    ep->add_option("--out", cfg.out, "result path (default stdout)");
    ep->add_flag("--cz-minus", cfg.cz_minus, "use the dp -= w*dq reading of the CZ update");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInput;
    }

    try {
        if (*build) return cmd_build(cfg);
        if (*verify) return cmd_verify(cfg);
        if (*exp) return cmd_export(cfg);
        if (*ep) return cmd_errorprop(cfg);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kOracle;
    }
    return kInput;
}
