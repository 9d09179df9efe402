#pragma once

#include "cyclotomic.hpp"
#include "padic.hpp"

namespace torex {

/// Parametrized one-dimensional subtorus-translate factor:
///   PowerOnW: gamma^A (1+w)^N - xi (1+T)
///   PowerOnT: gamma^A (1+w)   - xi (1+T)^N
/// with N, A p-adic integers and xi a p-power root of unity. The factor is
/// linear (with unit leading coefficient) in one variable, so divisibility is
/// equivalent to vanishing under the corresponding substitution.
struct ToroidalFactor {
    enum class Orientation { PowerOnW, PowerOnT };

    Orientation orientation;
    PadicInt exponent_n;
    PadicInt exponent_a;
    RootOfUnity xi;

    ToroidalFactor(Orientation o, PadicInt n, PadicInt a, RootOfUnity root)
        : orientation(o), exponent_n(std::move(n)), exponent_a(std::move(a)), xi(root) {
        if (exponent_n.prime() != xi.prime || exponent_a.prime() != xi.prime)
            throw Error(ErrorCode::PrimeMismatch, "factor parameters over different primes");
    }

    /// (1+w) - (1+T)^2, the factor forced on self-dual branches with sign -1.
    static ToroidalFactor functional_equation(std::int64_t p, int precision) {
        return ToroidalFactor(Orientation::PowerOnT, PadicInt(p, precision, 2),
                              PadicInt(p, precision, 0), RootOfUnity(p, 0, 0));
    }

    bool is_functional_equation() const {
        return orientation == Orientation::PowerOnT && xi.is_trivial() &&
               exponent_a.is_zero() && (exponent_n - PadicInt(exponent_n.prime(), 1, 2)).is_zero();
    }
};

} // namespace torex
