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

// Optical circuits for the 1-D extended EPR chain, the hexagonal cluster and
// the time-multiplexed topological cluster, written as gate programs.
//
// Mode labels always denote the *current* temporal slot. A delay by s slots
// turns (B, site, k) into (B, site, k + s). Heisenberg images, on the other
// hand, are written over the initial quadratures of the source modes, which
// keep the label they were created with.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cvcluster/quad_algebra.hpp"

namespace cvcluster {

struct Gate {
    enum class Kind : unsigned char { BeamSplitter, Fourier, Delay, MeasureQ, MeasureP };

    Kind kind = Kind::Fourier;
    BeamSplitterVariant variant = BeamSplitterVariant::BS1;
    ModeId x;  // first port, or the single target
    ModeId y;  // second port
    Stream stream = Stream::A;
    int site = 0;
    int shift = 0;

    static Gate beamsplitter(BeamSplitterVariant v, const ModeId& x, const ModeId& y) {
        if (x == y) throw std::invalid_argument("Gate: beam splitter needs two distinct modes");
        Gate g;
        g.kind = Kind::BeamSplitter;
        g.variant = v;
        g.x = x;
        g.y = y;
        return g;
    }
    static Gate fourier(const ModeId& m) {
        Gate g;
        g.kind = Kind::Fourier;
        g.x = m;
        return g;
    }
    static Gate delay(Stream s, int site, int shift) {
        if (shift < 0) throw std::invalid_argument("Gate: negative delay");
        Gate g;
        g.kind = Kind::Delay;
        g.stream = s;
        g.site = site;
        g.shift = shift;
        return g;
    }
    static Gate measure_q(const ModeId& m) {
        Gate g;
        g.kind = Kind::MeasureQ;
        g.x = m;
        return g;
    }
    static Gate measure_p(const ModeId& m) {
        Gate g;
        g.kind = Kind::MeasureP;
        g.x = m;
        return g;
    }

    bool is_measurement() const { return kind == Kind::MeasureQ || kind == Kind::MeasureP; }

    std::string to_string() const {
        switch (kind) {
            case Kind::BeamSplitter:
                return cvcluster::to_string(variant) + "(" + x.to_string() + "," + y.to_string() + ")";
            case Kind::Fourier:
                return "F(" + x.to_string() + ")";
            case Kind::Delay:
                return "D(" + std::string(1, to_char(stream)) + std::to_string(site) + "," + std::to_string(shift) + ")";
            case Kind::MeasureQ:
                return "MQ(" + x.to_string() + ")";
            case Kind::MeasureP:
                return "MP(" + x.to_string() + ")";
        }
        return {};
    }

    friend bool operator==(const Gate&, const Gate&) = default;
};

/**
 * Sources are created before the first gate. A stage boundary b means that
 * gates [.., b) form one stage and [b, ..) the next; the nullifier engine
 * re-canonicalizes at each boundary.
 */
struct GateProgram {
    std::vector<ModeId> sources;
    std::vector<Gate> gates;
    std::vector<std::size_t> stage_boundaries;
};

struct LatticeSpec {
    int N = 2;
    int M = 2;
    int T = 1;
    double r = 0.0;

    int V() const { return N * M; }

    /// Slots needed so every delayed partner of layers 0..T-1 exists.
    int min_window() const { return V() * T + N + V() + 1; }

    void validate() const {
        if (N < 2 || M < 2) throw std::invalid_argument("LatticeSpec: N and M must be at least 2");
        if (T < 1) throw std::invalid_argument("LatticeSpec: T must be at least 1");
        if (!(r >= 0.0)) throw std::invalid_argument("LatticeSpec: r must be non-negative");
    }

    /// Row, column and layer of temporal slot k.
    struct Slot {
        int row;
        int col;
        int layer;
    };
    Slot slot(int k) const {
        const int in_plane = k % V();
        return {in_plane / M, in_plane % M, k / V()};
    }

    /// Delays of B sites 1..6 (index 0 unused).
    std::array<int, 7> delays() const { return {0, 0, 1, N + 1, N + V() + 1, N + V(), V()}; }

    friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;
};

enum class StateKind : unsigned char { Epr1d, Hexagonal, Topological };

inline std::string to_string(StateKind k) {
    switch (k) {
        case StateKind::Epr1d:
            return "epr1d";
        case StateKind::Hexagonal:
            return "hexagonal";
        case StateKind::Topological:
            return "topological";
    }
    return {};
}

inline StateKind parse_state_kind(const std::string& s) {
    if (s == "epr1d") return StateKind::Epr1d;
    if (s == "hexagonal") return StateKind::Hexagonal;
    if (s == "topological") return StateKind::Topological;
    throw std::invalid_argument("unknown state kind '" + s + "'");
}

/// Builder arguments, kept so a state can be rebuilt or re-verified.
struct StateDescriptor {
    StateKind kind = StateKind::Hexagonal;
    int K = 0;          // epr1d slots, or topological window
    double r_a = 0.0;   // epr1d stream A
    double r_b = 0.0;   // epr1d stream B
    int hex_k = 0;      // hexagonal slot
    Stream hex_stream = Stream::A;
    LatticeSpec lattice;  // topological
    double r = 0.0;       // hexagonal and topological

    friend bool operator==(const StateDescriptor&, const StateDescriptor&) = default;
};

struct BuiltState {
    StateDescriptor spec;
    GateProgram program;
    std::map<ModeId, QuadPair> outputs;
    /// Images of measured modes just before their measurement.
    std::map<ModeId, QuadPair> measured;
    SqueezeProfile profile;
    std::set<ModeId> erased;
    std::set<ModeId> trimmed;

    /// Image of any window mode, measured or not.
    const QuadPair& image(const ModeId& m) const {
        if (auto it = outputs.find(m); it != outputs.end()) return it->second;
        if (auto it = measured.find(m); it != measured.end()) return it->second;
        throw std::out_of_range("BuiltState: mode " + m.to_string() + " is not in the window");
    }

    std::set<ModeId> window() const {
        std::set<ModeId> w;
        for (const auto& [m, v] : outputs) w.insert(m);
        for (const auto& [m, v] : measured) w.insert(m);
        return w;
    }

    std::set<ModeId> removed() const {
        std::set<ModeId> r = erased;
        r.insert(trimmed.begin(), trimmed.end());
        return r;
    }
};

// ---------------------------------------------------------------------------
// Program execution on Heisenberg images

struct Execution {
    std::map<ModeId, QuadPair> images;
    std::map<ModeId, QuadPair> measured;  // frozen at measurement time
    std::map<ModeId, Axis> basis;
};

namespace detail {

inline void rekey_delay(std::map<ModeId, QuadPair>& images, Stream s, int site, int shift) {
    if (shift == 0) return;
    std::map<ModeId, QuadPair> out;
    for (auto& [m, v] : images) out.emplace(delayed(m, s, site, shift), std::move(v));
    images = std::move(out);
}

}  // namespace detail

inline void apply_gate(Execution& ex, const Gate& g) {
    auto find = [&](const ModeId& m) -> QuadPair& {
        auto it = ex.images.find(m);
        if (it == ex.images.end()) throw std::invalid_argument("gate " + g.to_string() + ": unknown mode " + m.to_string());
        return it->second;
    };
    switch (g.kind) {
        case Gate::Kind::BeamSplitter: {
            QuadPair& x = find(g.x);
            QuadPair& y = find(g.y);
            auto [nx, ny] = apply_beamsplitter(g.variant, x, y);
            x = std::move(nx);
            y = std::move(ny);
            break;
        }
        case Gate::Kind::Fourier: {
            QuadPair& x = find(g.x);
            x = apply_fourier(x);
            break;
        }
        case Gate::Kind::Delay:
            detail::rekey_delay(ex.images, g.stream, g.site, g.shift);
            break;
        case Gate::Kind::MeasureQ:
        case Gate::Kind::MeasureP: {
            auto it = ex.images.find(g.x);
            if (it == ex.images.end()) throw std::invalid_argument("gate " + g.to_string() + ": unknown mode");
            ex.basis[g.x] = g.kind == Gate::Kind::MeasureQ ? Axis::Q : Axis::P;
            ex.measured.insert(ex.images.extract(it));
            break;
        }
    }
}

/// Runs gates [0, upto) of a program from fresh sources.
inline Execution execute(const GateProgram& program, std::size_t upto = static_cast<std::size_t>(-1)) {
    Execution ex;
    for (const ModeId& m : program.sources)
        if (!ex.images.emplace(m, initial_quadratures_pair(m)).second)
            throw std::invalid_argument("GateProgram: source " + m.to_string() + " created twice");
    const std::size_t n = std::min(upto, program.gates.size());
    for (std::size_t i = 0; i < n; ++i) apply_gate(ex, program.gates[i]);
    return ex;
}

// ---------------------------------------------------------------------------
// Builders

namespace detail {

inline BuiltState finish(StateDescriptor spec, GateProgram program, SqueezeProfile profile) {
    BuiltState st;
    st.spec = std::move(spec);
    st.profile = std::move(profile);
    Execution ex = execute(program);
    st.outputs = std::move(ex.images);
    st.measured = std::move(ex.measured);
    for (const auto& [m, b] : ex.basis) st.erased.insert(m);
    st.program = std::move(program);
    return st;
}

inline void append_hexagon(GateProgram& prog, SqueezeProfile& profile, Stream s, int k, double r) {
    for (int site = 1; site <= 6; ++site) {
        const ModeId m(s, site, k);
        prog.sources.push_back(m);
        profile.set(m, site % 2 == 1 ? Axis::P : Axis::Q, r);
    }
    auto mode = [&](int site) { return ModeId(s, site, k); };
    constexpr std::pair<int, int> round1[] = {{1, 6}, {5, 4}, {3, 2}};
    constexpr std::pair<int, int> round2[] = {{1, 4}, {5, 2}, {3, 6}};
    for (auto [i, j] : round1) prog.gates.push_back(Gate::beamsplitter(BeamSplitterVariant::BS1, mode(i), mode(j)));
    for (auto [i, j] : round2) prog.gates.push_back(Gate::beamsplitter(BeamSplitterVariant::BS1, mode(i), mode(j)));
    for (int site : {1, 3, 5}) prog.gates.push_back(Gate::fourier(mode(site)));
}

}  // namespace detail

/**
 * Two-stream chain over K slots. A is q-squeezed, B p-squeezed. After the
 * second coupling the end modes A@0 and B@K have no partner; they are kept as
 * the chain ends rather than erased.
 */
inline BuiltState build_epr1d(int K, double r_a, double r_b) {
    if (K < 2) throw std::invalid_argument("build_epr1d: K must be at least 2");
    GateProgram prog;
    SqueezeProfile profile;
    for (int k = 0; k < K; ++k) {
        prog.sources.emplace_back(Stream::A, 0, k);
        prog.sources.emplace_back(Stream::B, 0, k);
        profile.set(ModeId(Stream::A, 0, k), Axis::Q, r_a);
        profile.set(ModeId(Stream::B, 0, k), Axis::P, r_b);
    }
    for (int k = 0; k < K; ++k)
        prog.gates.push_back(
            Gate::beamsplitter(BeamSplitterVariant::BS1, ModeId(Stream::A, 0, k), ModeId(Stream::B, 0, k)));
    prog.gates.push_back(Gate::delay(Stream::B, 0, 1));
    for (int k = 1; k < K; ++k)
        prog.gates.push_back(
            Gate::beamsplitter(BeamSplitterVariant::BS1, ModeId(Stream::A, 0, k), ModeId(Stream::B, 0, k)));
    StateDescriptor spec;
    spec.kind = StateKind::Epr1d;
    spec.K = K;
    spec.r_a = r_a;
    spec.r_b = r_b;
    return detail::finish(spec, std::move(prog), std::move(profile));
}

/// Six-mode hexagonal cluster of one stream at slot k.
inline BuiltState build_hexagonal(int k, double r, Stream stream) {
    if (k < 0) throw std::invalid_argument("build_hexagonal: negative slot");
    GateProgram prog;
    SqueezeProfile profile;
    detail::append_hexagon(prog, profile, stream, k, r);
    StateDescriptor spec;
    spec.kind = StateKind::Hexagonal;
    spec.hex_k = k;
    spec.hex_stream = stream;
    spec.r = r;
    return detail::finish(spec, std::move(prog), std::move(profile));
}

/**
 * Time-multiplexed lattice. For every slot a hexagon pair A_k, B_k is built,
 * the B sites are delayed, and (A, s, t) is coupled to (B, s, t) by BS2
 * whenever both exist. Every B mode is then measured in q, as is every A mode
 * left without a partner (t < delay of its site).
 */
inline BuiltState build_topological(const LatticeSpec& spec, std::optional<int> window = std::nullopt) {
    spec.validate();
    const int K = window.value_or(spec.min_window());
    if (K < spec.min_window())
        throw std::invalid_argument("build_topological: window of " + std::to_string(K) + " slots is below the required " +
                                    std::to_string(spec.min_window()));
    GateProgram prog;
    SqueezeProfile profile;
    for (int k = 0; k < K; ++k) {
        detail::append_hexagon(prog, profile, Stream::A, k, spec.r);
        detail::append_hexagon(prog, profile, Stream::B, k, spec.r);
    }
    prog.stage_boundaries.push_back(prog.gates.size());
    const auto d = spec.delays();
    for (int site = 2; site <= 6; ++site) prog.gates.push_back(Gate::delay(Stream::B, site, d[site]));
    for (int t = 0; t < K; ++t)
        for (int site = 1; site <= 6; ++site)
            if (t >= d[site])
                prog.gates.push_back(Gate::beamsplitter(BeamSplitterVariant::BS2, ModeId(Stream::A, site, t),
                                                        ModeId(Stream::B, site, t)));
    for (int site = 1; site <= 6; ++site)
        for (int t = d[site]; t < K + d[site]; ++t) prog.gates.push_back(Gate::measure_q(ModeId(Stream::B, site, t)));
    for (int site = 1; site <= 6; ++site)
        for (int t = 0; t < std::min(d[site], K); ++t) prog.gates.push_back(Gate::measure_q(ModeId(Stream::A, site, t)));

    StateDescriptor desc;
    desc.kind = StateKind::Topological;
    desc.K = K;
    desc.lattice = spec;
    desc.r = spec.r;
    return detail::finish(desc, std::move(prog), std::move(profile));
}

/// The A modes of one layer removed to cut the lattice to a surface-code plane.
inline std::set<ModeId> boundary_modes(const LatticeSpec& spec, int layer) {
    std::set<ModeId> out;
    const int base = layer * spec.V();
    for (int nu = 1; nu <= spec.N; ++nu) {
        const int k = base + nu * spec.M - 1;
        out.emplace(Stream::A, 2, k);
        out.emplace(Stream::A, 3, k);
    }
    for (int up = 0; up < spec.M; ++up) {
        const int k = base + spec.M * (spec.N - 1) + up;
        out.emplace(Stream::A, 1, k);
        out.emplace(Stream::A, 2, k);
    }
    return out;
}

/**
 * Measures the boundary A modes of layers 0..T-1 in q. A mode already erased
 * as an orphan moves to the trimmed set, so erased and trimmed stay disjoint.
 */
inline BuiltState trim_boundary(BuiltState state, const LatticeSpec& spec) {
    if (state.spec.kind != StateKind::Topological || !(state.spec.lattice == spec))
        throw std::invalid_argument("trim_boundary: lattice does not match the state");
    for (int layer = 0; layer < spec.T; ++layer) {
        for (const ModeId& m : boundary_modes(spec, layer)) {
            if (state.trimmed.contains(m)) continue;
            if (state.erased.erase(m) == 0) {
                auto it = state.outputs.find(m);
                if (it == state.outputs.end()) throw std::logic_error("trim_boundary: mode " + m.to_string() + " missing");
                state.measured.insert(state.outputs.extract(it));
                state.program.gates.push_back(Gate::measure_q(m));
            }
            state.trimmed.insert(m);
        }
    }
    return state;
}

/// Whether (A, s, t) took part in a BS2 coupling.
inline bool is_coupled(const BuiltState& st, const ModeId& m) {
    if (st.spec.kind != StateKind::Topological || m.site < 1) return false;
    const int d = st.spec.lattice.delays()[m.site];
    return m.temporal >= d && m.temporal < st.spec.K;
}

}  // namespace cvcluster
