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

// Heisenberg-picture quadrature algebra.
//
// A QuadExpr is a sparse linear combination of quadratures with exact
// coefficients in ℤ[1/√2]. The same type is used in two roles:
//
//   * the image of an output quadrature, written over the initial (squeezed
//     vacuum) quadratures q⁰, p⁰ of the source modes; and
//   * a nullifier, written over the quadratures of the current modes.
//
// Passive gates transform the first role with apply_* and the second role
// with transport_*. For the orthogonal beam-splitter matrices both coincide.
// For the Fourier rotation â ↦ iâ the expression map is (q, p) ↦ (−p, q) while
// a combination written in the pre-gate quadratures is rewritten in the
// post-gate ones by q ↦ p, p ↦ −q.

#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cvcluster/ring.hpp"

namespace cvcluster {

enum class Stream : unsigned char { A, B };
enum class Axis : unsigned char { Q, P };

inline char to_char(Stream s) { return s == Stream::A ? 'A' : 'B'; }
inline char to_char(Axis a) { return a == Axis::Q ? 'q' : 'p'; }
inline Axis conjugate(Axis a) { return a == Axis::Q ? Axis::P : Axis::Q; }

/// One qumode: stream, hexagon site (0 for the 1-D chain) and temporal slot.
struct ModeId {
    Stream stream = Stream::A;
    int site = 0;
    int temporal = 0;

    ModeId() = default;
    ModeId(Stream s, int site_index, int k) : stream(s), site(site_index), temporal(k) {
        if (site < 0 || site > 6) throw std::invalid_argument("ModeId: site must lie in 0..6");
        if (temporal < 0) throw std::invalid_argument("ModeId: temporal index must be non-negative");
    }

    friend auto operator<=>(const ModeId&, const ModeId&) = default;

    /// Compact text form, "A3@12" or "B@4" when there is no site.
    std::string to_string() const {
        std::string s(1, to_char(stream));
        if (site != 0) s += std::to_string(site);
        return s + "@" + std::to_string(temporal);
    }

    static ModeId parse(const std::string& text) {
        const auto at = text.find('@');
        if (text.empty() || at == std::string::npos || at + 1 >= text.size())
            throw std::invalid_argument("ModeId: cannot parse '" + text + "'");
        Stream s{};
        if (text[0] == 'A')
            s = Stream::A;
        else if (text[0] == 'B')
            s = Stream::B;
        else
            throw std::invalid_argument("ModeId: bad stream in '" + text + "'");
        try {
            const int site = at > 1 ? std::stoi(text.substr(1, at - 1)) : 0;
            return ModeId(s, site, std::stoi(text.substr(at + 1)));
        } catch (const std::logic_error&) {
            throw std::invalid_argument("ModeId: cannot parse '" + text + "'");
        }
    }
};

struct QuadLabel {
    ModeId mode;
    Axis axis = Axis::Q;

    friend auto operator<=>(const QuadLabel&, const QuadLabel&) = default;

    std::string to_string() const { return std::string(1, to_char(axis)) + "_" + mode.to_string(); }
};

inline QuadLabel q_of(const ModeId& m) { return {m, Axis::Q}; }
inline QuadLabel p_of(const ModeId& m) { return {m, Axis::P}; }

class QuadExpr {
public:
    using Terms = std::map<QuadLabel, RingCoeff>;

    QuadExpr() = default;
    QuadExpr(const QuadLabel& label, const RingCoeff& c) { add(label, c); }

    static QuadExpr of(const QuadLabel& label) { return QuadExpr(label, RingCoeff::one()); }

    const Terms& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool empty() const noexcept { return terms_.empty(); }

    RingCoeff coeff(const QuadLabel& label) const {
        const auto it = terms_.find(label);
        return it == terms_.end() ? RingCoeff{} : it->second;
    }

    /// Adds c·label, dropping the entry if it cancels.
    QuadExpr& add(const QuadLabel& label, const RingCoeff& c) {
        if (c.is_zero()) return *this;
        auto [it, inserted] = terms_.try_emplace(label, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
        return *this;
    }

    QuadExpr& operator+=(const QuadExpr& other) {
        for (const auto& [l, c] : other.terms_) add(l, c);
        return *this;
    }
    QuadExpr& operator-=(const QuadExpr& other) {
        for (const auto& [l, c] : other.terms_) add(l, -c);
        return *this;
    }
    QuadExpr& operator*=(const RingCoeff& c) {
        if (c.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [l, v] : terms_) v *= c;
        return *this;
    }

    friend QuadExpr operator+(QuadExpr x, const QuadExpr& y) { return x += y; }
    friend QuadExpr operator-(QuadExpr x, const QuadExpr& y) { return x -= y; }
    friend QuadExpr operator-(QuadExpr x) { return x *= RingCoeff(-1); }
    friend QuadExpr operator*(const RingCoeff& c, QuadExpr x) { return x *= c; }
    friend QuadExpr operator*(QuadExpr x, const RingCoeff& c) { return x *= c; }

    QuadExpr div_sqrt2() const {
        QuadExpr r = *this;
        for (auto& [l, v] : r.terms_) v = v.div_sqrt2();
        return r;
    }

    /// Drops every term on the given modes.
    QuadExpr without_modes(const std::set<ModeId>& modes) const {
        QuadExpr r;
        for (const auto& [l, c] : terms_)
            if (!modes.contains(l.mode)) r.terms_.emplace(l, c);
        return r;
    }

    std::set<ModeId> modes() const {
        std::set<ModeId> out;
        for (const auto& [l, c] : terms_) out.insert(l.mode);
        return out;
    }

    friend bool operator==(const QuadExpr&, const QuadExpr&) = default;

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [l, c] : terms_) {
            const std::string cs = c.to_string();
            if (!first) s += " + ";
            first = false;
            if (c == RingCoeff::one())
                s += l.to_string();
            else if (c == RingCoeff(-1))
                s += "-" + l.to_string();
            else
                s += "(" + cs + ")" + l.to_string();
        }
        return s;
    }

private:
    Terms terms_;
};

/// Heisenberg image of one mode: the (q, p) expressions.
struct QuadPair {
    QuadExpr q;
    QuadExpr p;

    friend bool operator==(const QuadPair&, const QuadPair&) = default;
};

/// Coefficient of i in [X, Y], with [q, p] = i for each mode (ħ = 1).
inline RingCoeff commutator(const QuadExpr& x, const QuadExpr& y) {
    RingCoeff acc;
    for (const auto& [l, c] : x.terms()) {
        const RingCoeff d = y.coeff({l.mode, conjugate(l.axis)});
        if (d.is_zero()) continue;
        if (l.axis == Axis::Q)
            acc += c * d;
        else
            acc -= c * d;
    }
    return acc;
}

/// Squeezed axis and squeezing parameter r ≥ 0 of each source mode.
struct Squeezing {
    Axis axis = Axis::Q;
    double r = 0.0;
};

class SqueezeProfile {
public:
    void set(const ModeId& m, Axis squeezed, double r) {
        if (!(r >= 0.0)) throw std::invalid_argument("SqueezeProfile: r must be non-negative");
        entries_[m] = {squeezed, r};
    }

    bool contains(const ModeId& m) const { return entries_.contains(m); }

    const Squeezing& at(const ModeId& m) const {
        const auto it = entries_.find(m);
        if (it == entries_.end()) throw std::out_of_range("SqueezeProfile: no entry for mode " + m.to_string());
        return it->second;
    }

    /// Variance of an initial quadrature: e^{−2r}/2 on the squeezed axis, e^{2r}/2 otherwise.
    double variance(const QuadLabel& l) const {
        const Squeezing& s = at(l.mode);
        return 0.5 * std::exp(l.axis == s.axis ? -2.0 * s.r : 2.0 * s.r);
    }

    /// The same squeezed axes with every r replaced by `r`.
    SqueezeProfile with_uniform_r(double r) const {
        SqueezeProfile out = *this;
        for (auto& [m, s] : out.entries_) s.r = r;
        return out;
    }

    const std::map<ModeId, Squeezing>& entries() const noexcept { return entries_; }

private:
    std::map<ModeId, Squeezing> entries_;
};

enum class BeamSplitterVariant : unsigned char {
    BS1,  ///< matrix [[1, −1], [1, 1]]/√2
    BS2,  ///< matrix [[1, 1], [1, −1]]/√2
};

inline std::string to_string(BeamSplitterVariant v) { return v == BeamSplitterVariant::BS1 ? "BS1" : "BS2"; }

// ---------------------------------------------------------------------------
// Gates on Heisenberg images

inline QuadPair initial_quadratures_pair(const ModeId& m) { return {QuadExpr::of(q_of(m)), QuadExpr::of(p_of(m))}; }

inline std::pair<QuadExpr, QuadExpr> initial_quadratures(const ModeId& m) {
    auto pr = initial_quadratures_pair(m);
    return {std::move(pr.q), std::move(pr.p)};
}

namespace detail {

inline std::pair<QuadExpr, QuadExpr> mix(BeamSplitterVariant v, const QuadExpr& x, const QuadExpr& y) {
    QuadExpr sum = (x + y).div_sqrt2();
    QuadExpr diff = (x - y).div_sqrt2();
    if (v == BeamSplitterVariant::BS1) return {std::move(diff), std::move(sum)};
    return {std::move(sum), std::move(diff)};
}

}  // namespace detail

inline std::pair<QuadPair, QuadPair> apply_beamsplitter(BeamSplitterVariant v, const QuadPair& x, const QuadPair& y) {
    if (x == y) throw std::invalid_argument("apply_beamsplitter: both ports carry the same mode");
    auto [xq, yq] = detail::mix(v, x.q, y.q);
    auto [xp, yp] = detail::mix(v, x.p, y.p);
    return {{std::move(xq), std::move(xp)}, {std::move(yq), std::move(yp)}};
}

/// â ↦ iâ, i.e. (q, p) ↦ (−p, q).
inline QuadPair apply_fourier(const QuadPair& x) { return {-x.p, x.q}; }

/// Shifts the temporal index of every term on (stream, site) by `shift`.
inline QuadExpr relabel_delay(const QuadExpr& e, Stream stream, int site, int shift) {
    if (shift < 0) throw std::invalid_argument("relabel_delay: shift must be non-negative");
    if (shift == 0) return e;
    QuadExpr out;
    for (const auto& [l, c] : e.terms()) {
        QuadLabel m = l;
        if (m.mode.stream == stream && m.mode.site == site) m.mode.temporal += shift;
        out.add(m, c);
    }
    return out;
}

inline ModeId delayed(const ModeId& m, Stream stream, int site, int shift) {
    if (m.stream == stream && m.site == site) return ModeId(m.stream, m.site, m.temporal + shift);
    return m;
}

// ---------------------------------------------------------------------------
// Rewriting combinations of current-mode quadratures across a gate

namespace detail {

inline QuadExpr rewrite_pair(const QuadExpr& e, const ModeId& x, const ModeId& y,
                             const std::array<std::array<RingCoeff, 2>, 2>& s) {
    QuadExpr out = e.without_modes({x, y});
    for (Axis a : {Axis::Q, Axis::P}) {
        const RingCoeff cx = e.coeff({x, a});
        const RingCoeff cy = e.coeff({y, a});
        if (cx.is_zero() && cy.is_zero()) continue;
        out.add({x, a}, s[0][0] * cx + s[0][1] * cy);
        out.add({y, a}, s[1][0] * cx + s[1][1] * cy);
    }
    return out;
}

inline std::array<std::array<RingCoeff, 2>, 2> bs_matrix(BeamSplitterVariant v) {
    const RingCoeff h = RingCoeff::inv_sqrt2();
    if (v == BeamSplitterVariant::BS1) return {{{h, -h}, {h, h}}};
    return {{{h, h}, {h, -h}}};
}

}  // namespace detail

/**
 * Rewrites a combination of pre-gate quadratures of modes x, y in terms of the
 * post-gate ones. The beam-splitter matrices are orthogonal, so coefficient
 * vectors transform with the gate matrix itself.
 */
inline QuadExpr transport_beamsplitter(const QuadExpr& e, BeamSplitterVariant v, const ModeId& x, const ModeId& y) {
    if (x == y) throw std::invalid_argument("transport_beamsplitter: both ports carry the same mode");
    return detail::rewrite_pair(e, x, y, detail::bs_matrix(v));
}

/// Across â ↦ iâ the old quadratures read q = p', p = −q'.
inline QuadExpr transport_fourier(const QuadExpr& e, const ModeId& m) {
    QuadExpr out = e.without_modes({m});
    out.add(p_of(m), e.coeff(q_of(m)));
    out.add(q_of(m), -e.coeff(p_of(m)));
    return out;
}

/// Applies the transport rule to each member of a (q, p) pair.
inline QuadPair transport_fourier(const QuadPair& x, const ModeId& m) {
    return {transport_fourier(x.q, m), transport_fourier(x.p, m)};
}

// ---------------------------------------------------------------------------
// Symplectic matrices, ordering (q_x, p_x[, q_y, p_y])

template <std::size_t N>
using RingMatrix = std::array<std::array<RingCoeff, N>, N>;

inline RingMatrix<4> beamsplitter_symplectic(BeamSplitterVariant v) {
    const auto s = detail::bs_matrix(v);
    RingMatrix<4> m{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            m[2 * i][2 * j] = s[i][j];
            m[2 * i + 1][2 * j + 1] = s[i][j];
        }
    return m;
}

inline RingMatrix<2> fourier_symplectic() { return {{{RingCoeff{}, RingCoeff(-1)}, {RingCoeff(1), RingCoeff{}}}}; }

template <std::size_t N>
RingMatrix<N> symplectic_form() {
    static_assert(N % 2 == 0);
    RingMatrix<N> o{};
    for (std::size_t i = 0; i < N; i += 2) {
        o[i][i + 1] = RingCoeff(1);
        o[i + 1][i] = RingCoeff(-1);
    }
    return o;
}

template <std::size_t N>
RingMatrix<N> multiply(const RingMatrix<N>& a, const RingMatrix<N>& b) {
    RingMatrix<N> c{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < N; ++k) {
            if (a[i][k].is_zero()) continue;
            for (std::size_t j = 0; j < N; ++j) c[i][j] += a[i][k] * b[k][j];
        }
    return c;
}

template <std::size_t N>
RingMatrix<N> transpose(const RingMatrix<N>& a) {
    RingMatrix<N> t{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) t[j][i] = a[i][j];
    return t;
}

template <std::size_t N>
bool is_symplectic(const RingMatrix<N>& s) {
    return multiply(multiply(s, symplectic_form<N>()), transpose(s)) == symplectic_form<N>();
}

}  // namespace cvcluster
