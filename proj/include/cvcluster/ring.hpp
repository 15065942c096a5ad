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

#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace cvcluster {

/**
 * Dyadic rational num / 2^exp.
 *
 * Kept normalized: num is odd, or num == 0 and exp == 0. The exponent may be
 * negative, so every integer has a representation as well.
 */
class Dyadic {
public:
    constexpr Dyadic() noexcept = default;
    constexpr Dyadic(std::int64_t num) noexcept : num_(num) { normalize(); }  // NOLINT: implicit by design of the ring
    constexpr Dyadic(std::int64_t num, int exp) noexcept : num_(num), exp_(exp) { normalize(); }

    constexpr std::int64_t num() const noexcept { return num_; }
    constexpr int exp() const noexcept { return exp_; }
    constexpr bool is_zero() const noexcept { return num_ == 0; }
    constexpr int sign() const noexcept { return (num_ > 0) - (num_ < 0); }

    friend constexpr bool operator==(const Dyadic&, const Dyadic&) = default;

    friend constexpr std::strong_ordering operator<=>(const Dyadic& x, const Dyadic& y) {
        if (x.sign() != y.sign()) return x.sign() <=> y.sign();
        const Dyadic d = x - y;
        return d.sign() <=> 0;
    }

    friend constexpr Dyadic operator-(const Dyadic& x) {
        if (x.num_ == std::numeric_limits<std::int64_t>::min()) throw std::overflow_error("Dyadic negation overflow");
        Dyadic r;
        r.num_ = -x.num_;
        r.exp_ = x.exp_;
        return r;
    }

    friend constexpr Dyadic operator+(const Dyadic& x, const Dyadic& y) {
        if (x.is_zero()) return y;
        if (y.is_zero()) return x;
        const int e = x.exp_ > y.exp_ ? x.exp_ : y.exp_;
        return Dyadic(checked_add(shift_up(x.num_, e - x.exp_), shift_up(y.num_, e - y.exp_)), e);
    }

    friend constexpr Dyadic operator-(const Dyadic& x, const Dyadic& y) { return x + (-y); }

    friend constexpr Dyadic operator*(const Dyadic& x, const Dyadic& y) {
        std::int64_t n = 0;
        if (__builtin_mul_overflow(x.num_, y.num_, &n)) throw std::overflow_error("Dyadic multiplication overflow");
        return Dyadic(n, x.exp_ + y.exp_);
    }

    Dyadic& operator+=(const Dyadic& y) { return *this = *this + y; }
    Dyadic& operator-=(const Dyadic& y) { return *this = *this - y; }
    Dyadic& operator*=(const Dyadic& y) { return *this = *this * y; }

    /// Multiplication by 2^k (k may be negative); always exact.
    constexpr Dyadic ldexp(int k) const noexcept {
        Dyadic r = *this;
        if (!r.is_zero()) r.exp_ -= k;
        return r;
    }

    constexpr Dyadic half() const noexcept { return ldexp(-1); }

    /// Inverse when this is ±2^k, the only units of the dyadic rationals.
    constexpr std::optional<Dyadic> unit_inverse() const noexcept {
        if (num_ != 1 && num_ != -1) return std::nullopt;
        Dyadic r;
        r.num_ = num_;
        r.exp_ = -exp_;
        return r;
    }

    long double to_long_double() const noexcept { return std::ldexp(static_cast<long double>(num_), -exp_); }
    double to_double() const noexcept { return std::ldexp(static_cast<double>(num_), -exp_); }

    std::string to_string() const {
        if (exp_ <= 0) {
            if (exp_ > -62 && std::abs(num_) <= (std::numeric_limits<std::int64_t>::max() >> -exp_))
                return std::to_string(num_ * (std::int64_t{1} << -exp_));
            return std::to_string(num_) + "*2^" + std::to_string(-exp_);
        }
        if (exp_ < 63) return std::to_string(num_) + "/" + std::to_string(std::uint64_t{1} << exp_);
        return std::to_string(num_) + "/2^" + std::to_string(exp_);
    }

private:
    static constexpr std::int64_t checked_add(std::int64_t a, std::int64_t b) {
        std::int64_t r = 0;
        if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("Dyadic addition overflow");
        return r;
    }

    static constexpr std::int64_t shift_up(std::int64_t v, int s) {
        if (s == 0 || v == 0) return v;
        if (s >= 63) throw std::overflow_error("Dyadic alignment overflow");
        const std::int64_t limit = std::numeric_limits<std::int64_t>::max() >> s;
        if (v > limit || v < -limit) throw std::overflow_error("Dyadic alignment overflow");
        return v * (std::int64_t{1} << s);
    }

    constexpr void normalize() noexcept {
        if (num_ == 0) {
            exp_ = 0;
            return;
        }
        while ((num_ & 1) == 0) {
            num_ /= 2;
            --exp_;
        }
    }

    std::int64_t num_ = 0;
    int exp_ = 0;
};

/**
 * Exact element a + b·√2 of ℤ[1/√2], with a and b dyadic rationals.
 *
 * Every coefficient produced by 50:50 beam splitters, Fourier rotations and
 * delays lives in this ring, so equality here is exact equality of the
 * underlying real numbers.
 */
class RingCoeff {
public:
    constexpr RingCoeff() noexcept = default;
    constexpr RingCoeff(std::int64_t a) noexcept : a_(a) {}  // NOLINT: integers embed implicitly
    constexpr RingCoeff(Dyadic a, Dyadic b = {}) noexcept : a_(a), b_(b) {}

    static constexpr RingCoeff zero() noexcept { return {}; }
    static constexpr RingCoeff one() noexcept { return RingCoeff(1); }
    static constexpr RingCoeff sqrt2() noexcept { return RingCoeff(Dyadic{}, Dyadic{1}); }
    /// 1/√2 = (1/2)·√2
    static constexpr RingCoeff inv_sqrt2() noexcept { return RingCoeff(Dyadic{}, Dyadic{1, 1}); }
    static constexpr RingCoeff half() noexcept { return RingCoeff(Dyadic{1, 1}); }

    constexpr const Dyadic& rational_part() const noexcept { return a_; }
    constexpr const Dyadic& sqrt2_part() const noexcept { return b_; }
    constexpr bool is_zero() const noexcept { return a_.is_zero() && b_.is_zero(); }

    friend constexpr bool operator==(const RingCoeff&, const RingCoeff&) = default;

    friend constexpr RingCoeff operator-(const RingCoeff& x) { return {-x.a_, -x.b_}; }
    friend constexpr RingCoeff operator+(const RingCoeff& x, const RingCoeff& y) { return {x.a_ + y.a_, x.b_ + y.b_}; }
    friend constexpr RingCoeff operator-(const RingCoeff& x, const RingCoeff& y) { return {x.a_ - y.a_, x.b_ - y.b_}; }
    friend constexpr RingCoeff operator*(const RingCoeff& x, const RingCoeff& y) {
        // (a + b√2)(c + d√2) = (ac + 2bd) + (ad + bc)√2
        return {x.a_ * y.a_ + (x.b_ * y.b_).ldexp(1), x.a_ * y.b_ + x.b_ * y.a_};
    }

    RingCoeff& operator+=(const RingCoeff& y) { return *this = *this + y; }
    RingCoeff& operator-=(const RingCoeff& y) { return *this = *this - y; }
    RingCoeff& operator*=(const RingCoeff& y) { return *this = *this * y; }

    /// (a + b√2)/√2 = b + (a/2)√2
    constexpr RingCoeff div_sqrt2() const noexcept { return {b_, a_.half()}; }
    constexpr RingCoeff mul_sqrt2() const noexcept { return {b_.ldexp(1), a_}; }

    /// Galois conjugate a − b√2.
    constexpr RingCoeff conjugate() const { return {a_, -b_}; }

    /// Field norm a² − 2b², a dyadic rational.
    constexpr Dyadic norm() const { return a_ * a_ - (b_ * b_).ldexp(1); }

    /// Multiplicative inverse when it exists in the ring (norm = ±2^k).
    std::optional<RingCoeff> inverse() const {
        if (is_zero()) return std::nullopt;
        const auto inv_norm = norm().unit_inverse();
        if (!inv_norm) return std::nullopt;
        return conjugate() * RingCoeff(*inv_norm);
    }

    /// Exact sign of a + b√2.
    int sign() const {
        const int sa = a_.sign();
        const int sb = b_.sign();
        if (sb == 0) return sa;
        if (sa == 0 || sa == sb) return sb;
        // opposite signs: compare a² with 2b²
        const int n = norm().sign();
        return n > 0 ? sa : (n < 0 ? sb : 0);
    }

    /**
     * Nearest-double evaluation. When a and b√2 have opposite signs the value
     * is computed as norm / conjugate, which avoids cancellation.
     */
    double to_double() const {
        constexpr long double kSqrt2 = 1.414213562373095048801688724209698079L;
        const long double a = a_.to_long_double();
        const long double b = b_.to_long_double();
        if (b_.is_zero()) return static_cast<double>(a);
        if (a_.is_zero() || a_.sign() == b_.sign()) return static_cast<double>(a + b * kSqrt2);
        long double n = 0;
        try {
            n = norm().to_long_double();
        } catch (const std::overflow_error&) {
            n = a * a - 2.0L * b * b;
        }
        return static_cast<double>(n / (a - b * kSqrt2));
    }

    std::string to_string() const {
        if (b_.is_zero()) return a_.to_string();
        std::string s;
        if (!a_.is_zero()) s = a_.to_string() + (b_.sign() > 0 ? "+" : "");
        if (b_ == Dyadic{1}) return s + "√2";
        if (b_ == Dyadic{-1}) return s + "-√2";
        return s + b_.to_string() + "√2";
    }

    friend std::ostream& operator<<(std::ostream& os, const RingCoeff& c) { return os << c.to_string(); }

private:
    Dyadic a_;
    Dyadic b_;
};

}  // namespace cvcluster
