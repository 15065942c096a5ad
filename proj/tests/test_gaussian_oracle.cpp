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

#include <gtest/gtest.h>

#include <cmath>

#include "cvcluster/crosscheck.hpp"
#include "cvcluster/gaussian_oracle.hpp"
#include "cvcluster/nullifier.hpp"

using namespace cvcluster;

namespace {

constexpr double kFloor = 0.5 - 1e-10;

ModeId A(int site, int t) { return ModeId(Stream::A, site, t); }

Eigen::MatrixXd omega(Eigen::Index n) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; i += 2) {
        w(i, i + 1) = 1.0;
        w(i + 1, i) = -1.0;
    }
    return w;
}

// Largest entry difference between two states, matched by quadrature label.
double max_diff(const CovarianceState& x, const CovarianceState& y) {
    EXPECT_EQ(x.size(), y.size());
    double d = 0.0;
    for (const ModeId& m : x.modes())
        for (const ModeId& n : x.modes())
            for (Axis a : {Axis::Q, Axis::P})
                for (Axis b : {Axis::Q, Axis::P})
                    d = std::max(d, std::abs(x.matrix()(x.index({m, a}), x.index({n, b})) -
                                             y.matrix()(y.index({m, a}), y.index({n, b}))));
    return d;
}

SqueezeProfile pair_profile(double r) {
    SqueezeProfile p;
    p.set(ModeId(Stream::A, 0, 0), Axis::Q, r);
    p.set(ModeId(Stream::B, 0, 0), Axis::P, r);
    return p;
}

}  // namespace

TEST(InitCovariance, VacuumAndSqueezed) {
    SqueezeProfile p;
    p.set(A(1, 0), Axis::Q, 0.0);
    p.set(A(2, 0), Axis::P, 0.0);
    EXPECT_TRUE(init_covariance(p).matrix().isApprox(0.5 * Eigen::MatrixXd::Identity(4, 4), 0.0));

    SqueezeProfile s;
    s.set(A(1, 0), Axis::Q, 1.0);
    s.set(A(2, 0), Axis::P, 0.7);
    const CovarianceState st = init_covariance(s);
    EXPECT_NEAR(st.matrix()(0, 0), 0.0677, 1e-4);
    EXPECT_NEAR(st.matrix()(1, 1), 3.694, 1e-3);
    EXPECT_DOUBLE_EQ(st.matrix()(0, 0), std::exp(-2.0) / 2);
    EXPECT_GT(st.matrix()(2, 2), st.matrix()(3, 3));
    for (int i = 0; i < 2; ++i) EXPECT_NEAR(st.matrix()(2 * i, 2 * i) * st.matrix()(2 * i + 1, 2 * i + 1), 0.25, 1e-15);
    EXPECT_TRUE(st.mean().isZero());
    EXPECT_NEAR(min_symplectic_eigenvalue(st.matrix()), 0.5, 1e-12);
}

TEST(GateBlocks, SymplecticNumerically) {
    const std::vector<Gate> gates = {Gate::beamsplitter(BeamSplitterVariant::BS1, A(1, 0), A(2, 0)),
                                     Gate::beamsplitter(BeamSplitterVariant::BS2, A(1, 0), A(2, 0)),
                                     Gate::fourier(A(1, 0))};
    for (const Gate& g : gates) {
        const Eigen::MatrixXd s = gate_symplectic(g);
        const Eigen::MatrixXd w = omega(s.rows());
        EXPECT_LT((s * w * s.transpose() - w).cwiseAbs().maxCoeff(), 1e-12) << g.to_string();
    }
    EXPECT_THROW(gate_symplectic(Gate::delay(Stream::B, 1, 1)), std::invalid_argument);
}

TEST(ApplyGate, PassiveOpticsKeepVacuum) {
    SqueezeProfile p;
    p.set(A(1, 0), Axis::Q, 0.0);
    p.set(A(2, 0), Axis::Q, 0.0);
    CovarianceState st = init_covariance(p);
    apply_gate_numeric(st, Gate::beamsplitter(BeamSplitterVariant::BS1, A(1, 0), A(2, 0)));
    apply_gate_numeric(st, Gate::fourier(A(2, 0)));
    EXPECT_LT((st.matrix() - 0.5 * Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_THROW(apply_gate_numeric(st, Gate::fourier(A(3, 0))), std::out_of_range);
}

TEST(ApplyGate, MatchesGramOfSymbolicImages) {
    const LatticeSpec spec{2, 2, 1, 0.6};
    for (const BuiltState& st :
         {build_hexagonal(0, 0.8, Stream::A), build_epr1d(5, 0.4, 0.9), build_topological(spec)}) {
        const std::size_t end = first_measurement(st.program);
        const CovarianceState numeric = run_numeric(st.program, st.profile, end);
        const CovarianceState symbolic = gram_covariance(execute(st.program, end).images, st.profile);
        EXPECT_LT(max_diff(numeric, symbolic), 1e-12) << to_string(st.spec.kind);
    }
}

TEST(QuadraticForm, Basics) {
    const BuiltState hex = build_hexagonal(0, 0.5, Stream::A);
    const CovarianceState st = run_numeric(hex.program, hex.profile);
    EXPECT_EQ(quadratic_form_variance(st, QuadExpr()), 0.0);
    // Independent modes: variances add.
    SqueezeProfile p;
    p.set(A(1, 0), Axis::Q, 0.3);
    p.set(A(2, 0), Axis::P, 0.9);
    const CovarianceState prod = init_covariance(p);
    const QuadExpr x = QuadExpr::of(q_of(A(1, 0))) + QuadExpr::of(p_of(A(1, 0)));
    const QuadExpr y = RingCoeff(3) * QuadExpr::of(q_of(A(2, 0)));
    EXPECT_NEAR(quadratic_form_variance(prod, x + y), quadratic_form_variance(prod, x) + quadratic_form_variance(prod, y),
                1e-14);
    EXPECT_THROW(quadratic_form_variance(prod, QuadExpr::of(q_of(A(5, 0)))), std::out_of_range);
}

TEST(QuadraticForm, TopologicalNullifiersBeforeErasure) {
    for (double r : {0.25, 0.5, 1.0}) {
        const BuiltState st = build_topological({2, 2, 1, r});
        const CovarianceState pre = run_numeric(st.program, st.profile, first_measurement(st.program));
        for (const Nullifier& n : canonical_nullifiers(st))
            EXPECT_NEAR(quadratic_form_variance(pre, n.expr) / (1.5 * std::exp(-2 * r)), 1.0, 1e-12);
    }
}

TEST(Erasure, OneArmOfEntangledPairStaysPhysical) {
    const SqueezeProfile p = pair_profile(0.8);
    CovarianceState st = init_covariance(p);
    const ModeId a(Stream::A, 0, 0), b(Stream::B, 0, 0);
    apply_gate_numeric(st, Gate::beamsplitter(BeamSplitterVariant::BS1, a, b));
    homodyne_erase_q(st, b);
    ASSERT_EQ(st.size(), 1u);
    const double det = st.matrix().determinant();
    const double purity = 1.0 / (2.0 * std::sqrt(det));
    EXPECT_LE(purity, 1.0 + 1e-12);
    EXPECT_GE(min_symplectic_eigenvalue(st.matrix()), kFloor);
    EXPECT_TRUE(st.mean().isZero());
}

TEST(Erasure, UncoupledVacuumLeavesRestUnchanged) {
    SqueezeProfile p = pair_profile(0.5);
    p.set(A(3, 0), Axis::Q, 0.0);
    CovarianceState st = init_covariance(p);
    apply_gate_numeric(st, Gate::beamsplitter(BeamSplitterVariant::BS1, ModeId(Stream::A, 0, 0), ModeId(Stream::B, 0, 0)));
    CovarianceState before = st;
    homodyne_erase_q(st, A(3, 0));
    EXPECT_FALSE(st.contains(A(3, 0)));
    for (const ModeId& m : st.modes())
        for (const ModeId& n : st.modes())
            for (Axis x : {Axis::Q, Axis::P})
                for (Axis y : {Axis::Q, Axis::P})
                    EXPECT_EQ(st.matrix()(st.index({m, x}), st.index({n, y})),
                              before.matrix()(before.index({m, x}), before.index({n, y})));
}

TEST(Erasure, ConditioningNeverIncreasesRetainedVariance) {
    const LatticeSpec spec{2, 2, 1, 0.5};
    const BuiltState st = trim_boundary(build_topological(spec), spec);
    const auto kept = retained_nullifiers(canonical_nullifiers(st), st);
    const CovarianceState pre = run_numeric(st.program, st.profile, first_measurement(st.program));
    const CovarianceState post = run_numeric(st.program, st.profile);
    ASSERT_FALSE(kept.empty());
    for (const Nullifier& n : kept)
        EXPECT_LE(quadratic_form_variance(post, n.expr), quadratic_form_variance(pre, n.expr) + 1e-12);
}

TEST(Erasure, SymbolicConditioningMatchesSchurUpdate) {
    const LatticeSpec spec{2, 2, 1, 0.5};
    for (bool trim : {false, true}) {
        BuiltState st = build_topological(spec);
        if (trim) st = trim_boundary(std::move(st), spec);
        const CrossCheck cc = oracle_cross_check(st, canonical_nullifiers(st));
        EXPECT_TRUE(cc.ok()) << cc.max_rel_pre << " " << cc.max_rel_post;
        EXPECT_LT(cc.max_rel_post, kOracleTolerance);
        EXPECT_GT(cc.compared, st.window().size());
    }
}

TEST(Physicality, FloorAfterEveryGateAndErasure) {
    // The update only touches the component of the modes it acts on, so the
    // floor is checked on that block.
    const LatticeSpec spec{2, 2, 1, 0.5};
    for (const BuiltState& st : {build_hexagonal(0, 0.9, Stream::B), build_epr1d(4, 0.5, 0.7),
                                 trim_boundary(build_topological(spec), spec)}) {
        CovarianceState cs = init_covariance(st.profile);
        double worst = min_symplectic_eigenvalue(cs.matrix());
        for (const Gate& g : st.program.gates) {
            std::vector<ModeId> seeds;
            if (g.kind == Gate::Kind::BeamSplitter) seeds = {g.x, g.y};
            if (g.kind == Gate::Kind::Fourier) seeds = {g.x};
            if (g.is_measurement()) {
                // Modes correlated with the measured one seed its old block.
                const auto j = cs.index(q_of(g.x));
                for (const ModeId& m : cs.modes())
                    if (m != g.x && cs.matrix().block(cs.index(q_of(m)), j, 2, 2).cwiseAbs().maxCoeff() > 0.0)
                        seeds.push_back(m);
            }
            apply_gate_numeric(cs, g);
            if (seeds.empty()) continue;
            worst = std::min(worst, min_symplectic_eigenvalue(component_block(cs, seeds)));
        }
        EXPECT_GE(worst, kFloor) << to_string(st.spec.kind);
    }
}

TEST(Physicality, DetectsUnphysicalMatrix) {
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(2, 2) * 0.4;
    EXPECT_LT(min_symplectic_eigenvalue(v), kFloor);
    EXPECT_NEAR(min_symplectic_eigenvalue(Eigen::MatrixXd::Identity(4, 4)), 1.0, 1e-14);
}
