#include "padic.hpp"

#include <limits>

namespace torex {

namespace {

bool is_small_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

} // namespace

std::uint64_t pow_u64_checked(std::int64_t p, int k) {
    std::uint64_t r = 1;
    const std::uint64_t limit = (std::uint64_t{1} << 63) - 1;
    for (int i = 0; i < k; ++i) {
        if (r > limit / static_cast<std::uint64_t>(p))
            throw Error(ErrorCode::PrecisionOverflow, "p^M exceeds 63 bits");
        r *= static_cast<std::uint64_t>(p);
    }
    return r;
}

int max_precision(std::int64_t p) {
    const std::uint64_t limit = (std::uint64_t{1} << 63) - 1;
    std::uint64_t r = 1;
    int k = 0;
    while (r <= limit / static_cast<std::uint64_t>(p)) {
        r *= static_cast<std::uint64_t>(p);
        ++k;
    }
    return k;
}

int int_valuation(std::uint64_t n, std::int64_t p) {
    int v = 0;
    while (n % static_cast<std::uint64_t>(p) == 0) {
        n /= static_cast<std::uint64_t>(p);
        ++v;
    }
    return v;
}

PadicInt mul_sharp(const PadicInt& a, const PadicInt& b) {
    if (a.prime() != b.prime())
        throw Error(ErrorCode::PrimeMismatch, "operands live over different primes");
    const std::int64_t p = a.prime();
    int va = a.is_zero() ? a.precision() : int_valuation(a.residue(), p);
    int vb = b.is_zero() ? b.precision() : int_valuation(b.residue(), p);
    int prec = std::min({a.precision() + vb, b.precision() + va,
                         a.precision() + b.precision(), max_precision(p)});
    std::uint64_t m = pow_u64_checked(p, prec);
    std::uint64_t r = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(a.residue()) * b.residue()) % m);
    return PadicInt(p, prec, r);
}

PadicInt::PadicInt(std::int64_t prime, int precision, std::uint64_t residue)
    : prime_(prime), precision_(precision) {
    if (prime == 2)
        throw Error(ErrorCode::InvalidArgument, "p = 2 is not supported");
    if (!is_small_prime(prime))
        throw Error(ErrorCode::InvalidArgument, "modulus base is not prime");
    if (precision < 1)
        throw Error(ErrorCode::InvalidArgument, "precision must be positive");
    modulus_ = pow_u64_checked(prime, precision);
    residue_ = residue % modulus_;
}

PadicInt PadicInt::from_integer(std::int64_t prime, int precision, long long value) {
    std::uint64_t m = pow_u64_checked(prime, precision);
    long long r = value % static_cast<long long>(m);
    if (r < 0) r += static_cast<long long>(m);
    return PadicInt(prime, precision, static_cast<std::uint64_t>(r));
}

PadicInt PadicInt::reduced(int new_precision) const {
    if (new_precision > precision_)
        throw Error(ErrorCode::InvalidArgument, "cannot raise precision");
    return PadicInt(prime_, new_precision, residue_);
}

PadicInt PadicInt::operator-() const {
    return PadicInt(prime_, precision_, residue_ == 0 ? 0 : modulus_ - residue_);
}

namespace {
void check_same_prime(const PadicInt& a, const PadicInt& b) {
    if (a.prime() != b.prime())
        throw Error(ErrorCode::PrimeMismatch, "operands live over different primes");
}
} // namespace

PadicInt operator+(const PadicInt& a, const PadicInt& b) {
    check_same_prime(a, b);
    int prec = std::min(a.precision(), b.precision());
    std::uint64_t m = pow_u64_checked(a.prime(), prec);
    return PadicInt(a.prime(), prec, (a.residue() % m + b.residue() % m) % m);
}

PadicInt operator-(const PadicInt& a, const PadicInt& b) {
    check_same_prime(a, b);
    int prec = std::min(a.precision(), b.precision());
    std::uint64_t m = pow_u64_checked(a.prime(), prec);
    std::uint64_t br = b.residue() % m;
    return PadicInt(a.prime(), prec, (a.residue() % m + (m - br)) % m);
}

PadicInt operator*(const PadicInt& a, const PadicInt& b) {
    check_same_prime(a, b);
    int prec = std::min(a.precision(), b.precision());
    std::uint64_t m = pow_u64_checked(a.prime(), prec);
    return PadicInt(a.prime(), prec, mulmod(a.residue() % m, b.residue() % m, m));
}

PadicInt PadicInt::inverse() const {
    if (!is_unit())
        throw Error(ErrorCode::NonUnit, "inverse of a non-unit");
    // extended Euclid on (residue, p^M); Bezout coefficients are bounded by
    // the modulus but their update products need 128 bits near 2^63
    long long r0 = static_cast<long long>(modulus_), r1 = static_cast<long long>(residue_);
    __int128 t0 = 0, t1 = 1;
    while (r1 != 0) {
        long long q = r0 / r1;
        long long r2 = r0 - q * r1;
        r0 = r1; r1 = r2;
        __int128 t2 = t0 - static_cast<__int128>(q) * t1;
        t0 = t1; t1 = t2;
    }
    __int128 inv = t0 % static_cast<__int128>(modulus_);
    if (inv < 0) inv += static_cast<__int128>(modulus_);
    return PadicInt(prime_, precision_, static_cast<std::uint64_t>(inv));
}

PadicInt PadicInt::pow(std::uint64_t e) const {
    PadicInt result(prime_, precision_, 1);
    PadicInt base = *this;
    while (e > 0) {
        if (e & 1) result = result * base;
        base = base * base;
        e >>= 1;
    }
    return result;
}

Valuation PadicInt::valuation() const {
    if (residue_ == 0) return Valuation::at_least(Rational(precision_));
    return Valuation::exact(Rational(int_valuation(residue_, prime_)));
}

std::string PadicInt::str() const {
    return std::to_string(residue_) + " + O(" + std::to_string(prime_) + "^" +
           std::to_string(precision_) + ")";
}

PadicInt binom_padic(const PadicInt& n, int k) {
    if (k < 0) throw Error(ErrorCode::InvalidArgument, "negative binomial index");
    const std::int64_t p = n.prime();
    const int M = n.precision();
    if (k == 0) return PadicInt(p, M, 1);

    // v_p(k!) and the unit part of k! modulo p^M
    int vk = 0;
    PadicInt unit_fact(p, M, 1);
    for (int i = 1; i <= k; ++i) {
        std::uint64_t f = static_cast<std::uint64_t>(i);
        while (f % static_cast<std::uint64_t>(p) == 0) {
            f /= static_cast<std::uint64_t>(p);
            ++vk;
        }
        unit_fact = unit_fact * PadicInt(p, M, f);
    }
    if (vk >= M)
        throw Error(ErrorCode::PrecisionExhausted, "v_p(k!) consumes the whole precision");

    PadicInt num(p, M, 1);
    for (int i = 0; i < k; ++i)
        num = num * (n - PadicInt(p, M, static_cast<std::uint64_t>(i)));

    // the falling factorial is divisible by p^vk (binomials are integral)
    std::uint64_t pv = pow_u64_checked(p, vk);
    std::uint64_t shifted = num.residue() / pv;
    PadicInt q(p, M - vk, shifted);
    return q * unit_fact.reduced(M - vk).inverse();
}

PadicInt teichmuller(std::int64_t a, std::int64_t p, int precision) {
    PadicInt x = PadicInt::from_integer(p, precision, a);
    if (!x.is_unit())
        throw Error(ErrorCode::NonUnit, "Teichmuller lift of a non-unit");
    // x -> x^p contracts to the unique fixed point above a mod p
    for (int i = 0; i < precision; ++i)
        x = x.pow(static_cast<std::uint64_t>(p));
    return x;
}

PadicInt unit_power(const PadicInt& u, const PadicInt& K) {
    if (u.prime() != K.prime())
        throw Error(ErrorCode::PrimeMismatch, "base and exponent over different primes");
    const std::int64_t p = u.prime();
    const int M = std::min(u.precision(), K.precision());
    PadicInt one(p, M, 1);
    PadicInt t = u.reduced(M) - one;
    if (!t.is_zero() && !(t.valuation().is_exact() && t.valuation().value >= Rational(1)))
        throw Error(ErrorCode::InvalidArgument, "unit_power base must be 1 mod p");

    std::uint64_t m = one.modulus();
    std::uint64_t acc = 0;
    std::uint64_t tpow = 1; // (u-1)^j mod p^M
    PadicInt Km = K.reduced(M);
    for (int j = 0; j <= M; ++j) {
        if (j > 0) {
            tpow = static_cast<std::uint64_t>(
                (static_cast<unsigned __int128>(tpow) * t.residue()) % m);
            if (tpow == 0) break;
        }
        // residues multiplied mod p^M directly; see header note on why the
        // truncated binomial digits suffice here
        PadicInt b = binom_padic(Km, j);
        std::uint64_t br = b.residue() % m;
        acc = static_cast<std::uint64_t>(
            (acc + static_cast<unsigned __int128>(br) * tpow) % m);
    }
    return PadicInt(p, M, acc);
}

} // namespace torex
