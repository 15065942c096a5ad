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

// Covariance-matrix simulation of the same circuits, with q homodyne
// measurements as Gaussian conditioning. Quadrature order is
// q_1, p_1, ..., q_n, p_n over the state's mode order.

#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvcluster/builders.hpp"
#include "cvcluster/quad_algebra.hpp"

namespace cvcluster {

class CovarianceState {
public:
    CovarianceState() = default;

    CovarianceState(std::vector<ModeId> modes, Eigen::MatrixXd v) : modes_(std::move(modes)), v_(std::move(v)) {
        if (v_.rows() != v_.cols() || v_.rows() != 2 * static_cast<Eigen::Index>(modes_.size()))
            throw std::invalid_argument("CovarianceState: matrix size does not match the mode list");
        mean_ = Eigen::VectorXd::Zero(v_.rows());
        reindex();
    }

    const std::vector<ModeId>& modes() const noexcept { return modes_; }
    const Eigen::MatrixXd& matrix() const noexcept { return v_; }
    const Eigen::VectorXd& mean() const noexcept { return mean_; }
    std::size_t size() const noexcept { return modes_.size(); }
    bool contains(const ModeId& m) const { return index_.contains(m); }

    Eigen::Index index(const QuadLabel& l) const {
        const auto it = index_.find(l.mode);
        if (it == index_.end()) throw std::out_of_range("CovarianceState: unknown mode " + l.mode.to_string());
        return 2 * it->second + (l.axis == Axis::P ? 1 : 0);
    }

    /// Conjugates the rows and columns `idx` by the local block `s`.
    void apply_local(const std::vector<Eigen::Index>& idx, const Eigen::MatrixXd& s) {
        const auto k = static_cast<Eigen::Index>(idx.size());
        Eigen::MatrixXd rows(k, v_.cols());
        for (Eigen::Index a = 0; a < k; ++a) rows.row(a) = v_.row(idx[a]);
        rows = s * rows;
        for (Eigen::Index a = 0; a < k; ++a) v_.row(idx[a]) = rows.row(a);
        Eigen::MatrixXd cols(v_.rows(), k);
        for (Eigen::Index a = 0; a < k; ++a) cols.col(a) = v_.col(idx[a]);
        cols = cols * s.transpose();
        for (Eigen::Index a = 0; a < k; ++a) v_.col(idx[a]) = cols.col(a);
        Eigen::VectorXd mu(k);
        for (Eigen::Index a = 0; a < k; ++a) mu(a) = mean_(idx[a]);
        mu = s * mu;
        for (Eigen::Index a = 0; a < k; ++a) mean_(idx[a]) = mu(a);
    }

    void relabel(Stream s, int site, int shift) {
        for (ModeId& m : modes_) m = delayed(m, s, site, shift);
        reindex();
    }

    /**
     * Conditions on a homodyne outcome of one quadrature and drops the mode:
     * V ← V_rest − V_cross (π V_meas π)⁺ V_crossᵀ. Feed-forward is ideal, so the
     * mean stays zero.
     */
    void condition(const QuadLabel& l) {
        const Eigen::Index j = index(l);
        const double s = v_(j, j);
        const double scale = std::max(1.0, v_.diagonal().cwiseAbs().maxCoeff());
        if (!(s > 1e-12 * scale)) throw std::runtime_error("CovarianceState: singular measured variance");
        const Eigen::VectorXd c = v_.col(j);
        v_ -= c * c.transpose() / s;
        const Eigen::Index mi = j / 2;
        std::vector<Eigen::Index> keep;
        keep.reserve(v_.rows() - 2);
        for (Eigen::Index i = 0; i < v_.rows(); ++i)
            if (i / 2 != mi) keep.push_back(i);
        Eigen::MatrixXd nv(keep.size(), keep.size());
        for (std::size_t a = 0; a < keep.size(); ++a)
            for (std::size_t b = 0; b < keep.size(); ++b) nv(a, b) = v_(keep[a], keep[b]);
        v_ = std::move(nv);
        mean_ = Eigen::VectorXd::Zero(v_.rows());
        modes_.erase(modes_.begin() + mi);
        reindex();
    }

    /// Coefficient vector of an expression in this state's quadrature order.
    Eigen::VectorXd vector_of(const QuadExpr& e) const {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(v_.rows());
        for (const auto& [l, c] : e.terms()) v(index(l)) = c.to_double();
        return v;
    }

private:
    void reindex() {
        index_.clear();
        for (std::size_t i = 0; i < modes_.size(); ++i)
            if (!index_.emplace(modes_[i], static_cast<Eigen::Index>(i)).second)
                throw std::invalid_argument("CovarianceState: duplicate mode " + modes_[i].to_string());
    }

    std::vector<ModeId> modes_;
    std::map<ModeId, Eigen::Index> index_;
    Eigen::MatrixXd v_;
    Eigen::VectorXd mean_;
};

/// Block-diagonal squeezed vacua.
inline CovarianceState init_covariance(const SqueezeProfile& profile) {
    std::vector<ModeId> modes;
    for (const auto& [m, s] : profile.entries()) modes.push_back(m);
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2 * modes.size(), 2 * modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        v(2 * i, 2 * i) = profile.variance(q_of(modes[i]));
        v(2 * i + 1, 2 * i + 1) = profile.variance(p_of(modes[i]));
    }
    return CovarianceState(std::move(modes), std::move(v));
}

inline Eigen::MatrixXd to_eigen(const RingMatrix<4>& m) {
    Eigen::MatrixXd out(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out(i, j) = m[i][j].to_double();
    return out;
}

inline Eigen::MatrixXd to_eigen(const RingMatrix<2>& m) {
    Eigen::MatrixXd out(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out(i, j) = m[i][j].to_double();
    return out;
}

/// The numeric symplectic block of a gate, order (q_x, p_x[, q_y, p_y]).
inline Eigen::MatrixXd gate_symplectic(const Gate& g) {
    switch (g.kind) {
        case Gate::Kind::BeamSplitter:
            return to_eigen(beamsplitter_symplectic(g.variant));
        case Gate::Kind::Fourier:
            return to_eigen(fourier_symplectic());
        default:
            throw std::invalid_argument("gate_symplectic: gate has no symplectic block");
    }
}

inline void homodyne_erase_q(CovarianceState& st, const ModeId& m) { st.condition(q_of(m)); }

inline void apply_gate_numeric(CovarianceState& st, const Gate& g) {
    switch (g.kind) {
        case Gate::Kind::BeamSplitter:
            st.apply_local({st.index(q_of(g.x)), st.index(p_of(g.x)), st.index(q_of(g.y)), st.index(p_of(g.y))},
                           gate_symplectic(g));
            break;
        case Gate::Kind::Fourier:
            st.apply_local({st.index(q_of(g.x)), st.index(p_of(g.x))}, gate_symplectic(g));
            break;
        case Gate::Kind::Delay:
            st.relabel(g.stream, g.site, g.shift);
            break;
        case Gate::Kind::MeasureQ:
            homodyne_erase_q(st, g.x);
            break;
        case Gate::Kind::MeasureP:
            st.condition(p_of(g.x));
            break;
    }
}

/// vᵀVv for an expression over the state's current modes.
inline double quadratic_form_variance(const CovarianceState& st, const QuadExpr& e) {
    if (e.empty()) return 0.0;
    std::vector<Eigen::Index> idx;
    std::vector<double> c;
    for (const auto& [l, k] : e.terms()) {
        idx.push_back(st.index(l));
        c.push_back(k.to_double());
    }
    double v = 0.0;
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = 0; b < idx.size(); ++b) v += c[a] * c[b] * st.matrix()(idx[a], idx[b]);
    return v;
}

/**
 * Runs gates [0, upto) numerically. `after_gate` is called with the state and
 * the gate just applied.
 */
inline CovarianceState run_numeric(const GateProgram& program, const SqueezeProfile& profile,
                                   std::size_t upto = static_cast<std::size_t>(-1),
                                   const std::function<void(const CovarianceState&, const Gate&)>& after_gate = {}) {
    CovarianceState st = init_covariance(profile);
    const std::size_t n = std::min(upto, program.gates.size());
    for (std::size_t i = 0; i < n; ++i) {
        apply_gate_numeric(st, program.gates[i]);
        if (after_gate) after_gate(st, program.gates[i]);
    }
    return st;
}

/// Index of the first measurement gate, i.e. the end of the unitary part.
inline std::size_t first_measurement(const GateProgram& program) {
    for (std::size_t i = 0; i < program.gates.size(); ++i)
        if (program.gates[i].is_measurement()) return i;
    return program.gates.size();
}

// ---------------------------------------------------------------------------
// Symbolic side

/// Covariance of Heisenberg images: entries Σ_l a_l b_l v_l over initial quadratures.
inline double gram(const QuadExpr& x, const QuadExpr& y, const SqueezeProfile& profile) {
    double s = 0.0;
    const auto& small = x.size() <= y.size() ? x : y;
    const auto& large = x.size() <= y.size() ? y : x;
    for (const auto& [l, c] : small.terms()) {
        const RingCoeff d = large.coeff(l);
        if (!d.is_zero()) s += (c * d).to_double() * profile.variance(l);
    }
    return s;
}

inline CovarianceState gram_covariance(const std::map<ModeId, QuadPair>& images, const SqueezeProfile& profile) {
    std::vector<ModeId> modes;
    std::vector<const QuadExpr*> quads;
    for (const auto& [m, pr] : images) {
        modes.push_back(m);
        quads.push_back(&pr.q);
        quads.push_back(&pr.p);
    }
    const auto n = static_cast<Eigen::Index>(quads.size());
    Eigen::MatrixXd v(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) v(i, j) = v(j, i) = gram(*quads[i], *quads[j], profile);
    return CovarianceState(std::move(modes), std::move(v));
}

/**
 * Variance of `e` (over retained current modes) conditioned on the q values
 * of all removed modes, from the symbolic images: Var(e) − cᵀ Σ⁻¹ c.
 */
inline double conditional_variance(const QuadExpr& e, const BuiltState& state) {
    QuadExpr xe;
    for (const auto& [l, c] : e.terms()) {
        const QuadPair& img = state.image(l.mode);
        xe += c * (l.axis == Axis::Q ? img.q : img.p);
    }
    std::vector<const QuadExpr*> meas;
    for (const ModeId& m : state.removed()) meas.push_back(&state.image(m).q);
    const double base = gram(xe, xe, state.profile);
    if (meas.empty()) return base;
    const auto k = static_cast<Eigen::Index>(meas.size());
    Eigen::MatrixXd sigma(k, k);
    Eigen::VectorXd c(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        c(i) = gram(xe, *meas[i], state.profile);
        for (Eigen::Index j = i; j < k; ++j) sigma(i, j) = sigma(j, i) = gram(*meas[i], *meas[j], state.profile);
    }
    const Eigen::VectorXd x = sigma.ldlt().solve(c);
    return base - c.dot(x);
}

// ---------------------------------------------------------------------------
// Physicality

/**
 * Smallest symplectic eigenvalue: with V = LLᵀ, the eigenvalues of
 * Lᵀ Ωᵀ V Ω L are the squared symplectic eigenvalues.
 */
inline double min_symplectic_eigenvalue(const Eigen::MatrixXd& v) {
    const Eigen::Index n = v.rows();
    if (n == 0) return std::numeric_limits<double>::infinity();
    Eigen::LLT<Eigen::MatrixXd> llt(v);
    if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
    const Eigen::MatrixXd l = llt.matrixL();
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; i += 2) {
        omega(i, i + 1) = 1.0;
        omega(i + 1, i) = -1.0;
    }
    const Eigen::MatrixXd a = l.transpose() * omega * l;
    const Eigen::MatrixXd m = a.transpose() * a;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().minCoeff()));
}

/// Restriction of V to the connected block containing the given modes.
inline Eigen::MatrixXd component_block(const CovarianceState& st, const std::vector<ModeId>& seeds) {
    const Eigen::MatrixXd& v = st.matrix();
    const std::size_t n = st.size();
    std::vector<bool> seen(n, false);
    std::queue<std::size_t> todo;
    for (const ModeId& m : seeds) {
        if (!st.contains(m)) continue;
        const auto i = static_cast<std::size_t>(st.index(q_of(m)) / 2);
        if (!seen[i]) {
            seen[i] = true;
            todo.push(i);
        }
    }
    while (!todo.empty()) {
        const std::size_t i = todo.front();
        todo.pop();
        for (std::size_t j = 0; j < n; ++j) {
            if (seen[j]) continue;
            const bool linked = v.block(2 * i, 2 * j, 2, 2).cwiseAbs().maxCoeff() > 0.0;
            if (linked) {
                seen[j] = true;
                todo.push(j);
            }
        }
    }
    std::vector<Eigen::Index> idx;
    for (std::size_t i = 0; i < n; ++i)
        if (seen[i]) {
            idx.push_back(static_cast<Eigen::Index>(2 * i));
            idx.push_back(static_cast<Eigen::Index>(2 * i + 1));
        }
    Eigen::MatrixXd b(idx.size(), idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t c = 0; c < idx.size(); ++c) b(a, c) = v(idx[a], idx[c]);
    return b;
}

}  // namespace cvcluster
