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

// Nullifier derivation, canonical reduction, adjacency extraction and the
// pairwise van Loock-Furusawa inseparability test.
//
// Nullifiers are written over the quadratures of the *current* modes. To get
// a variance they are first expanded over the initial squeezed quadratures
// with expand(); variance(QuadExpr, SqueezeProfile) expects such an expanded
// expression.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cvcluster/builders.hpp"
#include "cvcluster/graph.hpp"
#include "cvcluster/quad_algebra.hpp"

namespace cvcluster {

struct Nullifier {
    QuadExpr expr;
    ModeId anchor;
    Axis axis = Axis::P;  // quadrature of the anchor carrying the unit coefficient

    friend bool operator==(const Nullifier&, const Nullifier&) = default;
};

using ClusterGraph = WeightedGraph<ModeId, RingCoeff>;

// ---------------------------------------------------------------------------
// Squeezing units

/// Squeezing level in dB, 10·log10 e^{-2r}. Negative means squeezed.
inline double squeezing_db(double r) { return -20.0 * r / std::numbers::ln10; }

/// Inverse of squeezing_db. The sign of `db` is ignored.
inline double r_from_db(double db) { return std::abs(db) * std::numbers::ln10 / 20.0; }

// ---------------------------------------------------------------------------
// Transport through a program

inline QuadExpr transport(const QuadExpr& e, const Gate& g) {
    switch (g.kind) {
        case Gate::Kind::BeamSplitter:
            return transport_beamsplitter(e, g.variant, g.x, g.y);
        case Gate::Kind::Fourier:
            return transport_fourier(e, g.x);
        case Gate::Kind::Delay:
            return relabel_delay(e, g.stream, g.site, g.shift);
        case Gate::Kind::MeasureQ:
        case Gate::Kind::MeasureP:
            return e;
    }
    return e;
}

inline Nullifier transport(const Nullifier& n, const Gate& g) {
    Nullifier out{transport(n.expr, g), n.anchor, n.axis};
    if (g.kind == Gate::Kind::Delay) out.anchor = delayed(n.anchor, g.stream, g.site, g.shift);
    return out;
}

/// The squeezed quadrature of every source.
inline std::vector<Nullifier> initial_nullifiers(const GateProgram& program, const SqueezeProfile& profile) {
    std::vector<Nullifier> out;
    out.reserve(program.sources.size());
    for (const ModeId& m : program.sources) {
        const Axis a = profile.at(m).axis;
        out.push_back({QuadExpr::of({m, a}), m, a});
    }
    return out;
}

inline std::vector<Nullifier> reduce_to_canonical(const std::vector<Nullifier>& nulls);

/**
 * Initial nullifiers pushed through gates [0, upto). At every stage boundary
 * crossed the set is brought to canonical form first.
 */
inline std::vector<Nullifier> nullifiers_after(const BuiltState& state, std::size_t upto) {
    std::vector<Nullifier> nulls = initial_nullifiers(state.program, state.profile);
    const auto& gates = state.program.gates;
    const std::size_t n = std::min(upto, gates.size());
    const auto& bounds = state.program.stage_boundaries;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::find(bounds.begin(), bounds.end(), i) != bounds.end()) nulls = reduce_to_canonical(nulls);
        for (Nullifier& x : nulls) x = transport(x, gates[i]);
    }
    return nulls;
}

/// One nullifier per source mode, transported through the whole program.
inline std::vector<Nullifier> derive_nullifiers(const BuiltState& state) {
    if (state.program.sources.empty()) throw std::invalid_argument("derive_nullifiers: state has no sources");
    return nullifiers_after(state, state.program.gates.size());
}

// ---------------------------------------------------------------------------
// Canonical reduction

namespace detail {

/// Pivot order: (temporal, stream, site).
struct PivotOrder {
    bool operator()(const ModeId& a, const ModeId& b) const {
        return std::tie(a.temporal, a.stream, a.site) < std::tie(b.temporal, b.stream, b.site);
    }
};

}  // namespace detail

/**
 * Gauss-Jordan elimination on the p columns over ℤ[1/√2]. Each result has a
 * unit p on its anchor and no other p term. The pivot for a mode is the first
 * remaining row whose p coefficient is a unit of the ring.
 */
inline std::vector<Nullifier> reduce_to_canonical(const std::vector<Nullifier>& nulls) {
    std::vector<QuadExpr> rows;
    rows.reserve(nulls.size());
    std::set<ModeId, detail::PivotOrder> modes;
    for (const Nullifier& n : nulls) {
        rows.push_back(n.expr);
        for (const auto& [l, c] : n.expr.terms()) modes.insert(l.mode);
    }
    if (rows.size() != modes.size())
        throw std::invalid_argument("reduce_to_canonical: " + std::to_string(rows.size()) + " nullifiers for " +
                                    std::to_string(modes.size()) + " modes");

    std::vector<bool> used(rows.size(), false);
    std::vector<Nullifier> out;
    out.reserve(rows.size());
    std::vector<std::size_t> pivot_row;
    for (const ModeId& m : modes) {
        const QuadLabel col = p_of(m);
        std::optional<std::size_t> pick;
        std::optional<RingCoeff> inv;
        for (std::size_t i = 0; i < rows.size() && !pick; ++i) {
            if (used[i]) continue;
            const RingCoeff c = rows[i].coeff(col);
            if (c.is_zero()) continue;
            if (auto v = c.inverse()) {
                pick = i;
                inv = v;
            }
        }
        if (!pick) throw std::runtime_error("reduce_to_canonical: rank deficiency at p of " + m.to_string());
        used[*pick] = true;
        rows[*pick] *= *inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == *pick) continue;
            const RingCoeff c = rows[i].coeff(col);
            if (!c.is_zero()) rows[i] -= c * rows[*pick];
        }
        pivot_row.push_back(*pick);
    }
    std::size_t k = 0;
    for (const ModeId& m : modes) out.push_back({std::move(rows[pivot_row[k++]]), m, Axis::P});
    std::sort(out.begin(), out.end(), [](const Nullifier& a, const Nullifier& b) { return a.anchor < b.anchor; });
    return out;
}

/**
 * Local reduction for the two-rail chain, whose p block is singular so no
 * p − Cq form exists. For each rail (all-q or all-p rows) and each label t
 * touched by exactly two rows, the combination with unit coefficient on the
 * anchor and zero on the other stream at t is returned.
 */
inline std::vector<Nullifier> reduce_dual_rail(const std::vector<Nullifier>& nulls) {
    std::vector<Nullifier> out;
    for (Axis rail : {Axis::Q, Axis::P}) {
        std::map<int, std::vector<const QuadExpr*>> by_label;
        std::set<ModeId> present;
        for (const Nullifier& n : nulls) {
            if (n.expr.empty()) continue;
            const bool on_rail = std::all_of(n.expr.terms().begin(), n.expr.terms().end(),
                                             [&](const auto& t) { return t.first.axis == rail; });
            if (!on_rail) continue;
            std::set<int> labels;
            for (const auto& [l, c] : n.expr.terms()) {
                labels.insert(l.mode.temporal);
                present.insert(l.mode);
            }
            for (int t : labels) by_label[t].push_back(&n.expr);
        }
        for (const auto& [t, rows] : by_label) {
            if (rows.size() < 2) continue;
            if (rows.size() > 2) throw std::runtime_error("reduce_dual_rail: label " + std::to_string(t) + " on three rows");
            for (Stream s : {Stream::A, Stream::B}) {
                const ModeId anchor(s, 0, t);
                const ModeId other(s == Stream::A ? Stream::B : Stream::A, 0, t);
                if (!present.contains(anchor)) continue;
                const RingCoeff a1 = rows[0]->coeff({anchor, rail}), a2 = rows[1]->coeff({anchor, rail});
                const RingCoeff o1 = rows[0]->coeff({other, rail}), o2 = rows[1]->coeff({other, rail});
                const auto inv = (a1 * o2 - a2 * o1).inverse();
                if (!inv) throw std::runtime_error("reduce_dual_rail: singular pair at " + anchor.to_string());
                QuadExpr e = (o2 * *inv) * *rows[0] + (-(o1 * *inv)) * *rows[1];
                out.push_back({std::move(e), anchor, rail});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Nullifier& a, const Nullifier& b) {
        return std::tie(a.axis, a.anchor) < std::tie(b.axis, b.anchor);
    });
    return out;
}

/// Canonical nullifiers of a built state (dual-rail for the chain).
inline std::vector<Nullifier> canonical_nullifiers(const BuiltState& state) {
    const auto raw = derive_nullifiers(state);
    if (state.spec.kind == StateKind::Epr1d) return reduce_dual_rail(raw);
    return reduce_to_canonical(raw);
}

/**
 * Nullifiers of the retained modes after erasure. Measured-out q terms are
 * removed by feed-forward, so they are dropped; anchors on removed modes go.
 */
inline std::vector<Nullifier> retained_nullifiers(const std::vector<Nullifier>& canonical, const BuiltState& state) {
    const std::set<ModeId> removed = state.removed();
    std::vector<Nullifier> out;
    for (const Nullifier& n : canonical) {
        if (removed.contains(n.anchor)) continue;
        for (const auto& [l, c] : n.expr.terms())
            if (removed.contains(l.mode) && l.axis != Axis::Q)
                throw std::runtime_error("retained_nullifiers: p term on measured mode " + l.mode.to_string());
        out.push_back({n.expr.without_modes(removed), n.anchor, n.axis});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Adjacency

/**
 * Weighted adjacency from canonical nullifiers anchored on `anchor_axis`.
 * C_ij is −(coefficient of q_j) and +(coefficient of p_j), so the forms read
 * p_i − Σ C_ij q_j, and q_i − Σ C_ij q_j or p_i + Σ C_ij p_j on the chain
 * rails. Only edges between anchors are kept; asymmetry throws.
 */
inline ClusterGraph extract_adjacency(const std::vector<Nullifier>& nulls, Axis anchor_axis = Axis::P) {
    ClusterGraph g;
    std::map<std::pair<ModeId, ModeId>, RingCoeff> directed;
    std::set<ModeId> anchors;
    for (const Nullifier& n : nulls) {
        if (n.axis != anchor_axis) continue;
        if (!anchors.insert(n.anchor).second)
            throw std::invalid_argument("extract_adjacency: two nullifiers anchored at " + n.anchor.to_string());
        if (n.expr.coeff({n.anchor, n.axis}) != RingCoeff::one())
            throw std::invalid_argument("extract_adjacency: nullifier at " + n.anchor.to_string() + " is not canonical");
    }
    for (const Nullifier& n : nulls) {
        if (n.axis != anchor_axis) continue;
        g.add_node(n.anchor);
        std::set<ModeId> seen;
        for (const auto& [l, c] : n.expr.terms()) {
            if (l.mode == n.anchor) {
                if (l.axis != n.axis)
                    throw std::invalid_argument("extract_adjacency: self term at " + n.anchor.to_string());
                continue;
            }
            if (!seen.insert(l.mode).second)
                throw std::invalid_argument("extract_adjacency: both quadratures of " + l.mode.to_string() + " appear");
            if (!anchors.contains(l.mode)) continue;
            directed[{n.anchor, l.mode}] = l.axis == Axis::Q ? -c : c;
        }
    }
    for (const auto& [e, w] : directed) {
        const auto back = directed.find({e.second, e.first});
        if (back == directed.end() || back->second != w)
            throw std::runtime_error("extract_adjacency: asymmetric weight between " + e.first.to_string() + " and " +
                                     e.second.to_string());
        if (e.first < e.second) g.set_edge(e.first, e.second, w);
    }
    return g;
}

// ---------------------------------------------------------------------------
// Variances

/// Rewrites a current-mode expression over the initial quadratures.
inline QuadExpr expand(const QuadExpr& e, const BuiltState& state) {
    QuadExpr out;
    for (const auto& [l, c] : e.terms()) {
        const QuadPair& img = state.image(l.mode);
        out += c * (l.axis == Axis::Q ? img.q : img.p);
    }
    return out;
}

/// Σ c²·v over an expression in initial quadratures; modes are independent.
inline double variance(const QuadExpr& initial_expr, const SqueezeProfile& profile) {
    double v = 0.0;
    for (const auto& [l, c] : initial_expr.terms()) {
        const double x = c.to_double();
        v += x * x * profile.variance(l);
    }
    return v;
}

inline double variance(const Nullifier& n, const BuiltState& state) { return variance(expand(n.expr, state), state.profile); }

inline double variance(const Nullifier& n, const BuiltState& state, const SqueezeProfile& profile) {
    return variance(expand(n.expr, state), profile);
}

/// Squared norms on the squeezed and anti-squeezed quadratures, exact.
struct VarianceSplit {
    RingCoeff squeezed;
    RingCoeff anti;

    /// Variance when every source has squeezing r.
    double at(double r) const { return 0.5 * (squeezed.to_double() * std::exp(-2 * r) + anti.to_double() * std::exp(2 * r)); }
};

inline VarianceSplit variance_split(const QuadExpr& initial_expr, const SqueezeProfile& profile) {
    VarianceSplit s;
    for (const auto& [l, c] : initial_expr.terms()) (profile.at(l.mode).axis == l.axis ? s.squeezed : s.anti) += c * c;
    return s;
}

struct VlfVerdict {
    bool satisfied = false;
    double lhs = 0.0;
    double rhs = 0.0;
};

/// ⟨Δ²δ_i⟩ + ⟨Δ²δ_j⟩ < 2ħ|C_ij| with ħ = 1.
inline VlfVerdict vlf_check(const Nullifier& ni, const Nullifier& nj, const ClusterGraph& graph, const BuiltState& state,
                            const SqueezeProfile& profile) {
    const auto w = graph.weight(ni.anchor, nj.anchor);
    if (!w) throw std::invalid_argument("vlf_check: " + ni.anchor.to_string() + " and " + nj.anchor.to_string() + " are not adjacent");
    VlfVerdict v;
    v.lhs = variance(ni, state, profile) + variance(nj, state, profile);
    v.rhs = 2.0 * std::abs(w->to_double());
    v.satisfied = v.lhs < v.rhs;
    return v;
}

inline VlfVerdict vlf_check(const Nullifier& ni, const Nullifier& nj, const ClusterGraph& graph, const BuiltState& state) {
    return vlf_check(ni, nj, graph, state, state.profile);
}

// ---------------------------------------------------------------------------
// Whole-lattice verification

struct EdgeReport {
    ModeId i;
    ModeId j;
    Axis rail = Axis::P;
    RingCoeff weight;
    VlfVerdict verdict;
};

struct LatticeReport {
    std::vector<EdgeReport> edges;
    bool all_satisfied = true;
    double threshold_r = 0.0;
    double threshold_e2r = 1.0;
    double threshold_db = 0.0;
};

/// Nullifiers and graph that the checks run on, per state kind.
struct VerificationInput {
    std::vector<Nullifier> canonical;  // variance source for each anchor
    std::vector<ClusterGraph> graphs;  // one per rail
    std::vector<Axis> rails;
};

/**
 * Chain: both rails of the dual-rail forms. Hexagon: the p − Cq forms.
 * Lattice: the graph of the retained A modes after erasure, with the
 * variances of the full canonical nullifiers.
 */
inline VerificationInput verification_input(const BuiltState& state) {
    VerificationInput in;
    in.canonical = canonical_nullifiers(state);
    switch (state.spec.kind) {
        case StateKind::Epr1d:
            for (Axis rail : {Axis::Q, Axis::P}) {
                in.graphs.push_back(extract_adjacency(in.canonical, rail));
                in.rails.push_back(rail);
            }
            break;
        case StateKind::Hexagonal:
            in.graphs.push_back(extract_adjacency(in.canonical));
            in.rails.push_back(Axis::P);
            break;
        case StateKind::Topological:
            in.graphs.push_back(extract_adjacency(retained_nullifiers(in.canonical, state)));
            in.rails.push_back(Axis::P);
            break;
    }
    return in;
}

inline LatticeReport full_lattice_verify(const BuiltState& state, const VerificationInput& in) {
    std::map<std::pair<Axis, ModeId>, const Nullifier*> by_anchor;
    for (const Nullifier& n : in.canonical) by_anchor[{n.axis, n.anchor}] = &n;
    auto lookup = [&](Axis rail, const ModeId& m) -> const Nullifier& {
        const auto it = by_anchor.find({rail, m});
        if (it == by_anchor.end()) throw std::logic_error("full_lattice_verify: no nullifier at " + m.to_string());
        return *it->second;
    };

    LatticeReport rep;
    std::map<std::pair<Axis, ModeId>, VarianceSplit> splits;
    struct Term {
        VarianceSplit a, b;
        double rhs;
    };
    std::vector<Term> terms;
    for (std::size_t g = 0; g < in.graphs.size(); ++g) {
        const Axis rail = in.rails[g];
        for (const auto& [e, w] : in.graphs[g].edges()) {
            const Nullifier& ni = lookup(rail, e.first);
            const Nullifier& nj = lookup(rail, e.second);
            EdgeReport er{e.first, e.second, rail, w, vlf_check(ni, nj, in.graphs[g], state)};
            rep.all_satisfied = rep.all_satisfied && er.verdict.satisfied;
            rep.edges.push_back(er);
            auto split = [&](const Nullifier& n) {
                auto [it, fresh] = splits.try_emplace({rail, n.anchor});
                if (fresh) it->second = variance_split(expand(n.expr, state), state.profile);
                return it->second;
            };
            terms.push_back({split(ni), split(nj), er.verdict.rhs});
        }
    }

    auto passes = [&](double r) {
        return std::all_of(terms.begin(), terms.end(), [&](const Term& t) { return t.a.at(r) + t.b.at(r) < t.rhs; });
    };
    double lo = 0.0;
    double hi = 1.0;
    if (terms.empty() || passes(lo)) {
        hi = 0.0;
    } else {
        while (!passes(hi) && hi < 64.0) hi *= 2.0;
        if (!passes(hi)) {
            hi = std::numeric_limits<double>::infinity();
        } else {
            while (hi - lo > 1e-9) {
                const double mid = 0.5 * (lo + hi);
                (passes(mid) ? hi : lo) = mid;
            }
        }
    }
    rep.threshold_r = hi;
    rep.threshold_e2r = std::exp(-2.0 * hi);
    rep.threshold_db = squeezing_db(hi);
    return rep;
}

inline LatticeReport full_lattice_verify(const BuiltState& state) { return full_lattice_verify(state, verification_input(state)); }

// ---------------------------------------------------------------------------
// Comparison helpers

/// x = λ·y for some nonzero λ in the ring (λ is returned).
inline std::optional<RingCoeff> proportional(const QuadExpr& x, const QuadExpr& y) {
    if (x.size() != y.size() || x.empty()) return std::nullopt;
    const auto& [l0, c0] = *y.terms().begin();
    const auto inv = c0.inverse();
    if (!inv) return std::nullopt;
    const RingCoeff lambda = x.coeff(l0) * *inv;
    if (lambda.is_zero()) return std::nullopt;
    if (lambda * y == x) return lambda;
    return std::nullopt;
}

}  // namespace cvcluster
