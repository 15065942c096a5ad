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

// Displacement-error bookkeeping for CZ gates and p-basis teleportation on a
// signed cluster graph.

#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvcluster/graph.hpp"
#include "cvcluster/quad_algebra.hpp"

namespace cvcluster {

struct Displacement {
    double dq = 0.0;
    double dp = 0.0;

    friend bool operator==(const Displacement&, const Displacement&) = default;
};

template <class Node>
struct ErrorState {
    std::map<Node, Displacement> errors;
    std::map<Node, Axis> measured;

    Displacement get(const Node& n) const {
        const auto it = errors.find(n);
        return it == errors.end() ? Displacement{} : it->second;
    }
    bool is_measured(const Node& n) const { return measured.contains(n); }
};

template <class Node>
struct FlowStep {
    Node node;
    Axis basis = Axis::P;
    std::optional<Node> successor;
};

template <class Node>
using FlowPlan = std::vector<FlowStep<Node>>;

template <class Node>
struct Injection {
    Node node;
    Axis axis = Axis::Q;
    double value = 0.0;
};

/**
 * Sign of the CZ update. The default +1 gives Δp_j += w·Δq_k, so a +g edge
 * passes +g. The other reading, Δp_j −= w·Δq_k, is kMinus.
 */
enum class CzConvention : int { kPlus = 1, kMinus = -1 };

template <class Node>
using ErrorGraph = WeightedGraph<Node, double>;

/// Δp_j += s·w·Δq_k and Δp_k += s·w·Δq_j; measured nodes are frozen.
template <class Node>
void apply_cz_error(ErrorState<Node>& st, const ErrorGraph<Node>& g, const Node& j, const Node& k,
                    CzConvention conv = CzConvention::kPlus) {
    const auto w = g.weight(j, k);
    if (!w) throw std::invalid_argument("apply_cz_error: no edge");
    const double sw = static_cast<int>(conv) * *w;
    const double qj = st.get(j).dq;
    const double qk = st.get(k).dq;
    if (!st.is_measured(j)) st.errors[j].dp += sw * qk;
    if (!st.is_measured(k)) st.errors[k].dp += sw * qj;
}

/// Δq_s += Δp_m / w(m, s); m is frozen. Returns the increment on s.
template <class Node>
double measure_p_teleport(ErrorState<Node>& st, const ErrorGraph<Node>& g, const Node& m, const Node& s) {
    if (st.is_measured(m)) throw std::invalid_argument("measure_p_teleport: node measured twice");
    if (st.is_measured(s)) throw std::invalid_argument("measure_p_teleport: successor already measured");
    const auto w = g.weight(m, s);
    if (!w) throw std::invalid_argument("measure_p_teleport: successor is not a neighbor");
    if (*w == 0.0) throw std::invalid_argument("measure_p_teleport: zero weight");
    const double inc = st.get(m).dp / *w;
    st.measured[m] = Axis::P;
    if (inc != 0.0) st.errors[s].dq += inc;
    return inc;
}

template <class Node>
void validate_plan(const ErrorGraph<Node>& g, const FlowPlan<Node>& plan) {
    std::map<Node, bool> done;
    for (const auto& step : plan) {
        if (!g.contains(step.node)) throw std::invalid_argument("plan: unknown node");
        if (done[step.node]) throw std::invalid_argument("plan: node measured twice");
        done[step.node] = true;
        if (step.successor) {
            if (step.basis != Axis::P) throw std::invalid_argument("plan: only p measurements teleport");
            if (!g.has_edge(step.node, *step.successor)) throw std::invalid_argument("plan: successor is not a neighbor");
            if (done[*step.successor]) throw std::invalid_argument("plan: successor already measured");
        }
    }
}

/**
 * One CZ per edge on the injected errors, then the plan in order: each p
 * measurement teleports onto its successor, and the successor's q increment
 * reaches its unmeasured neighbors through their CZs.
 */
template <class Node>
ErrorState<Node> run_cancellation_scenario(const ErrorGraph<Node>& g, const std::optional<Injection<Node>>& inject,
                                           const FlowPlan<Node>& plan, CzConvention conv = CzConvention::kPlus) {
    validate_plan(g, plan);
    ErrorState<Node> st;
    for (const Node& n : g.nodes()) st.errors[n];
    if (inject) {
        if (!g.contains(inject->node)) throw std::invalid_argument("scenario: injection on unknown node");
        (inject->axis == Axis::Q ? st.errors[inject->node].dq : st.errors[inject->node].dp) += inject->value;
    }
    for (const auto& [e, w] : g.edges()) apply_cz_error(st, g, e.first, e.second, conv);
    const double sign = static_cast<int>(conv);
    for (const auto& step : plan) {
        if (!step.successor) {
            st.measured[step.node] = step.basis;
            continue;
        }
        const Node& s = *step.successor;
        const double inc = measure_p_teleport(st, g, step.node, s);
        if (inc == 0.0) continue;
        for (const Node& n : g.neighbors(s))
            if (!st.is_measured(n)) st.errors[n].dp += sign * g.at(s, n) * inc;
    }
    return st;
}

}  // namespace cvcluster
