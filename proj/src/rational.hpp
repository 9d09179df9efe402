#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "errors.hpp"

namespace torex {

/// Exact rational with small numerator/denominator, reduced, denominator > 0.
/// Valuations here are sums of terms v + i/e, so both components stay tiny.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

    long long num() const { return num_; }
    long long den() const { return den_; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rational operator*(long long k, const Rational& a) {
        return Rational(k * a.num_, a.den_);
    }
    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return a.num_ * b.den_ < b.num_ * a.den_;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return a < b || a == b; }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    void normalize() {
        if (den_ == 0) throw Error(ErrorCode::InvalidArgument, "rational with zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
    }

    long long num_;
    long long den_;
};

inline Rational rational_min(const Rational& a, const Rational& b) { return a < b ? a : b; }

/// Valuation of an element, or a certified lower bound when the element is
/// indistinguishable from zero at working precision.
struct Valuation {
    enum class Kind { Exact, AtLeast };

    Kind kind;
    Rational value;

    static Valuation exact(Rational v) { return {Kind::Exact, v}; }
    static Valuation at_least(Rational v) { return {Kind::AtLeast, v}; }

    bool is_exact() const { return kind == Kind::Exact; }

    /// A lower bound valid in either case.
    Rational lower_bound() const { return value; }

    std::string str() const {
        return is_exact() ? value.str() : (">=" + value.str());
    }

    friend bool operator==(const Valuation& a, const Valuation& b) {
        return a.kind == b.kind && a.value == b.value;
    }
};

/// Valuation of a product: exact valuations add, bounds stay bounds.
inline Valuation val_add(const Valuation& a, const Valuation& b) {
    if (a.is_exact() && b.is_exact()) return Valuation::exact(a.value + b.value);
    return Valuation::at_least(a.value + b.value);
}

/// Ultrametric minimum. An exact value strictly below every bound stays exact;
/// otherwise only the combined lower bound survives.
inline Valuation val_min(const Valuation& a, const Valuation& b) {
    if (a.is_exact() && b.is_exact())
        return Valuation::exact(rational_min(a.value, b.value));
    if (a.is_exact() && a.value < b.value) return a;
    if (b.is_exact() && b.value < a.value) return b;
    return Valuation::at_least(rational_min(a.value, b.value));
}

} // namespace torex
