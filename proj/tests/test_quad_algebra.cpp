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

#include <random>

#include "cvcluster/quad_algebra.hpp"

using namespace cvcluster;

namespace {

const ModeId kX(Stream::A, 1, 0);
const ModeId kY(Stream::B, 1, 0);

QuadPair pair_of(const ModeId& m) { return initial_quadratures_pair(m); }

QuadExpr random_expr(std::mt19937& rng, const std::vector<ModeId>& modes) {
    QuadExpr e;
    for (const ModeId& m : modes)
        for (Axis a : {Axis::Q, Axis::P}) {
            const int k = static_cast<int>(rng() % 7) - 3;
            if (k != 0) e.add({m, a}, RingCoeff(Dyadic(k), Dyadic(static_cast<int>(rng() % 3) - 1, 1)));
        }
    return e;
}

}  // namespace

TEST(ModeId, TextRoundTrip) {
    for (const char* s : {"A1@0", "B6@12", "A@3", "B@0"}) EXPECT_EQ(ModeId::parse(s).to_string(), s);
    EXPECT_THROW(ModeId::parse("C1@0"), std::invalid_argument);
    EXPECT_THROW(ModeId::parse("A1"), std::invalid_argument);
    EXPECT_THROW(ModeId(Stream::A, 7, 0), std::invalid_argument);
    EXPECT_THROW(ModeId(Stream::A, 1, -1), std::invalid_argument);
    EXPECT_EQ(p_of(kX).to_string(), "p_A1@0");
}

TEST(QuadExpr, DropsZeroTerms) {
    QuadExpr e = QuadExpr::of(q_of(kX));
    e.add(q_of(kX), RingCoeff(-1));
    EXPECT_TRUE(e.empty());
    EXPECT_EQ(QuadExpr(), QuadExpr::of(p_of(kY)) - QuadExpr::of(p_of(kY)));
}

TEST(Beamsplitter, Bs1Example) {
    const auto [x, y] = apply_beamsplitter(BeamSplitterVariant::BS1, pair_of(kX), pair_of(kY));
    const RingCoeff h = RingCoeff::inv_sqrt2();
    EXPECT_EQ(x.q, h * QuadExpr::of(q_of(kX)) - h * QuadExpr::of(q_of(kY)));
    EXPECT_EQ(y.q, h * QuadExpr::of(q_of(kX)) + h * QuadExpr::of(q_of(kY)));
    EXPECT_EQ(x.p, h * QuadExpr::of(p_of(kX)) - h * QuadExpr::of(p_of(kY)));
    EXPECT_EQ(y.p, h * QuadExpr::of(p_of(kX)) + h * QuadExpr::of(p_of(kY)));
}

TEST(Beamsplitter, Bs2Example) {
    const auto [x, y] = apply_beamsplitter(BeamSplitterVariant::BS2, pair_of(kX), pair_of(kY));
    const RingCoeff h = RingCoeff::inv_sqrt2();
    EXPECT_EQ(x.q, h * QuadExpr::of(q_of(kX)) + h * QuadExpr::of(q_of(kY)));
    EXPECT_EQ(y.q, h * QuadExpr::of(q_of(kX)) - h * QuadExpr::of(q_of(kY)));
}

TEST(Beamsplitter, SamePortRejected) {
    EXPECT_THROW(apply_beamsplitter(BeamSplitterVariant::BS1, pair_of(kX), pair_of(kX)), std::invalid_argument);
    EXPECT_THROW(transport_beamsplitter(QuadExpr(), BeamSplitterVariant::BS1, kX, kX), std::invalid_argument);
}

TEST(Beamsplitter, SelfInverseOnlyForBs2) {
    // BS2 is a reflection, BS1 a rotation by π/4; BS1² swaps with a sign.
    auto twice = [](BeamSplitterVariant v) {
        const auto [x1, y1] = apply_beamsplitter(v, pair_of(kX), pair_of(kY));
        return apply_beamsplitter(v, x1, y1);
    };
    const auto [x2, y2] = twice(BeamSplitterVariant::BS2);
    EXPECT_EQ(x2, pair_of(kX));
    EXPECT_EQ(y2, pair_of(kY));
    const auto [x1, y1] = twice(BeamSplitterVariant::BS1);
    EXPECT_EQ(x1.q, -QuadExpr::of(q_of(kY)));
    EXPECT_EQ(y1.q, QuadExpr::of(q_of(kX)));
}

TEST(Fourier, ExampleAndFourthPower) {
    const QuadPair x = pair_of(kX);
    const QuadPair f = apply_fourier(x);
    EXPECT_EQ(f.q, -QuadExpr::of(p_of(kX)));
    EXPECT_EQ(f.p, QuadExpr::of(q_of(kX)));
    EXPECT_EQ(apply_fourier(apply_fourier(f)).q, QuadExpr::of(p_of(kX)));
    EXPECT_EQ(apply_fourier(apply_fourier(apply_fourier(f))), x);
}

TEST(Fourier, TransportExample) {
    // ({q1}, {p1}) → ({p1}, {q1: −1})
    const QuadPair t = transport_fourier(pair_of(kX), kX);
    EXPECT_EQ(t.q, QuadExpr::of(p_of(kX)));
    EXPECT_EQ(t.p, -QuadExpr::of(q_of(kX)));
}

TEST(Fourier, TransportInvertsTheImageMap) {
    // Writing an image (a map of initial quadratures) through the transport
    // rule gives back the initial quadratures.
    const QuadPair f = apply_fourier(pair_of(kX));
    EXPECT_EQ(transport_fourier(f.q, kX), QuadExpr::of(q_of(kX)));
    EXPECT_EQ(transport_fourier(f.p, kX), QuadExpr::of(p_of(kX)));
}

TEST(Commutators, PreservedByEveryGate) {
    std::mt19937 rng(3);
    const RingCoeff one = RingCoeff::one();
    EXPECT_EQ(commutator(QuadExpr::of(q_of(kX)), QuadExpr::of(p_of(kX))), one);
    EXPECT_EQ(commutator(QuadExpr::of(p_of(kX)), QuadExpr::of(q_of(kX))), -one);
    for (auto v : {BeamSplitterVariant::BS1, BeamSplitterVariant::BS2}) {
        const auto [x, y] = apply_beamsplitter(v, pair_of(kX), pair_of(kY));
        EXPECT_EQ(commutator(x.q, x.p), one);
        EXPECT_EQ(commutator(y.q, y.p), one);
        EXPECT_EQ(commutator(x.q, y.p), RingCoeff());
        EXPECT_EQ(commutator(x.q, y.q), RingCoeff());
        EXPECT_EQ(commutator(x.p, y.q), RingCoeff());
    }
    const QuadPair f = apply_fourier(pair_of(kX));
    EXPECT_EQ(commutator(f.q, f.p), one);
    for (int i = 0; i < 50; ++i) {
        const QuadExpr a = random_expr(rng, {kX, kY});
        const QuadExpr b = random_expr(rng, {kX, kY});
        EXPECT_EQ(commutator(a, b), -commutator(b, a));
    }
}

TEST(Transport, LinearInTheExpression) {
    std::mt19937 rng(5);
    const RingCoeff c(Dyadic(3, 1), Dyadic(-1));
    for (int i = 0; i < 100; ++i) {
        const QuadExpr a = random_expr(rng, {kX, kY});
        const QuadExpr b = random_expr(rng, {kX, kY});
        for (auto v : {BeamSplitterVariant::BS1, BeamSplitterVariant::BS2})
            EXPECT_EQ(transport_beamsplitter(a + c * b, v, kX, kY),
                      transport_beamsplitter(a, v, kX, kY) + c * transport_beamsplitter(b, v, kX, kY));
        EXPECT_EQ(transport_fourier(a + c * b, kX), transport_fourier(a, kX) + c * transport_fourier(b, kX));
    }
}

TEST(Transport, BeamsplitterPreservesCommutators) {
    std::mt19937 rng(9);
    for (int i = 0; i < 100; ++i) {
        const QuadExpr a = random_expr(rng, {kX, kY});
        const QuadExpr b = random_expr(rng, {kX, kY});
        for (auto v : {BeamSplitterVariant::BS1, BeamSplitterVariant::BS2})
            EXPECT_EQ(commutator(transport_beamsplitter(a, v, kX, kY), transport_beamsplitter(b, v, kX, kY)),
                      commutator(a, b));
        EXPECT_EQ(commutator(transport_fourier(a, kX), transport_fourier(b, kX)), commutator(a, b));
    }
}

TEST(Delay, RelabelsOnlyTheNamedSite) {
    const ModeId other(Stream::A, 2, 0);
    const QuadExpr e = QuadExpr::of(q_of(kX)) + QuadExpr::of(p_of(other));
    const QuadExpr d = relabel_delay(e, Stream::A, 1, 3);
    EXPECT_EQ(d, QuadExpr::of(q_of(ModeId(Stream::A, 1, 3))) + QuadExpr::of(p_of(other)));
    EXPECT_EQ(relabel_delay(e, Stream::A, 1, 0), e);
    EXPECT_THROW(relabel_delay(e, Stream::A, 1, -1), std::invalid_argument);
    EXPECT_EQ(delayed(kX, Stream::A, 1, 2), ModeId(Stream::A, 1, 2));
    EXPECT_EQ(delayed(kY, Stream::A, 1, 2), kY);
}

TEST(Symplectic, GateMatricesAreExactlySymplectic) {
    for (auto v : {BeamSplitterVariant::BS1, BeamSplitterVariant::BS2}) {
        const auto s = beamsplitter_symplectic(v);
        EXPECT_TRUE(is_symplectic(s)) << to_string(v);
        // Orthogonal as well: SᵀS = I.
        const auto sts = multiply(transpose(s), s);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(sts[i][j], RingCoeff(i == j ? 1 : 0));
    }
    EXPECT_TRUE(is_symplectic(fourier_symplectic()));
    RingMatrix<2> bad{{{RingCoeff(2), RingCoeff()}, {RingCoeff(), RingCoeff(1)}}};
    EXPECT_FALSE(is_symplectic(bad));
}

TEST(Symplectic, MatrixAgreesWithImageMap) {
    for (auto v : {BeamSplitterVariant::BS1, BeamSplitterVariant::BS2}) {
        const auto s = beamsplitter_symplectic(v);
        const auto [x, y] = apply_beamsplitter(v, pair_of(kX), pair_of(kY));
        const QuadLabel in[4] = {q_of(kX), p_of(kX), q_of(kY), p_of(kY)};
        const QuadExpr* out[4] = {&x.q, &x.p, &y.q, &y.p};
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(out[i]->coeff(in[j]), s[i][j]);
    }
}

TEST(SqueezeProfile, Variances) {
    SqueezeProfile p;
    p.set(kX, Axis::Q, 0.5);
    EXPECT_DOUBLE_EQ(p.variance(q_of(kX)), 0.5 * std::exp(-1.0));
    EXPECT_DOUBLE_EQ(p.variance(p_of(kX)), 0.5 * std::exp(1.0));
    EXPECT_DOUBLE_EQ(p.with_uniform_r(0.0).variance(p_of(kX)), 0.5);
    EXPECT_FALSE(p.contains(kY));
}
