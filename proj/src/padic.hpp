#pragma once

#include <cstdint>
#include <string>

#include "rational.hpp"

namespace torex {

/// Element of Z/p^M with explicit precision M: the scalar type for everything
/// downstream. p = 2 is rejected (the q = 4 normalization is out of scope);
/// p^M must fit in 63 bits so products can be reduced through 128-bit
/// intermediates.
class PadicInt {
public:
    PadicInt(std::int64_t prime, int precision, std::uint64_t residue);

    /// Signed constructor, mapping negative values to their residues.
    static PadicInt from_integer(std::int64_t prime, int precision, long long value);

    std::int64_t prime() const { return prime_; }
    int precision() const { return precision_; }
    std::uint64_t residue() const { return residue_; }
    std::uint64_t modulus() const { return modulus_; }

    bool is_zero() const { return residue_ == 0; }
    bool is_unit() const { return residue_ % static_cast<std::uint64_t>(prime_) != 0; }

    /// Reduce to a lower precision (never raises).
    PadicInt reduced(int new_precision) const;

    PadicInt operator-() const;
    friend PadicInt operator+(const PadicInt& a, const PadicInt& b);
    friend PadicInt operator-(const PadicInt& a, const PadicInt& b);
    friend PadicInt operator*(const PadicInt& a, const PadicInt& b);

    friend bool operator==(const PadicInt& a, const PadicInt& b) {
        return a.prime_ == b.prime_ && a.precision_ == b.precision_ && a.residue_ == b.residue_;
    }

    /// Multiplicative inverse at full precision; throws on non-units.
    PadicInt inverse() const;

    /// Integer power (exponent as plain non-negative integer).
    PadicInt pow(std::uint64_t e) const;

    /// Exact(v) for nonzero residues, AtLeast(M) for residues that vanish at
    /// working precision.
    Valuation valuation() const;

    std::string str() const;

private:
    std::int64_t prime_;
    int precision_;
    std::uint64_t modulus_;
    std::uint64_t residue_;
};

/// p^k as uint64, throwing on overflow past 63 bits.
std::uint64_t pow_u64_checked(std::int64_t p, int k);

/// Largest precision M with p^M < 2^63.
int max_precision(std::int64_t p);

/// v_p of a plain integer (n must be nonzero).
int int_valuation(std::uint64_t n, std::int64_t p);

/// Product with valuation-aware precision: x known mod p^A with residue
/// valuation vx contributes uncertainty of valuation >= A + vy, so the result
/// is determined mod p^min(A + vy, B + vx, A + B). Used internally where the
/// flat min-precision rule of operator* would discard provable digits.
PadicInt mul_sharp(const PadicInt& a, const PadicInt& b);

/// Generalized binomial coefficient C(n, k) for a p-adic integer n: the value
/// n(n-1)...(n-k+1)/k! at precision prec(n) - v_p(k!). Integrality of binomial
/// coefficients makes the division exact; throws PrecisionExhausted when
/// v_p(k!) eats the whole working precision.
PadicInt binom_padic(const PadicInt& n, int k);

/// Teichmuller lift: the unique (p-1)-st root of unity congruent to a mod p.
PadicInt teichmuller(std::int64_t a, std::int64_t p, int precision);

/// u^K for u = 1 mod p and a p-adic exponent K, via the binomial series in
/// (u-1). Each term binom(K,j)(u-1)^j is determined mod p^M because the
/// binomial loses only v_p(j!) < j digits while (u-1)^j contributes j, so the
/// result keeps the full common precision of u and K.
PadicInt unit_power(const PadicInt& u, const PadicInt& K);

} // namespace torex
