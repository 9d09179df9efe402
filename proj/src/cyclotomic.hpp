#pragma once

#include <cstdint>
#include <vector>

#include "padic.hpp"

namespace torex {

/// A p-power root of unity zeta_{p^m}^t, kept symbolic.
struct RootOfUnity {
    std::int64_t prime;
    int level;      // m >= 0
    std::int64_t exponent; // t in [0, p^m)

    RootOfUnity(std::int64_t p, int m, std::int64_t t);

    bool is_trivial() const;
    bool is_primitive() const;
    RootOfUnity inverse() const;

    /// Smallest level at which the root is faithful (strips p | t redundancy).
    int reduced_level() const;
};

/// Element of Z_p[zeta_{p^m}] in the power basis of the Eisenstein
/// uniformizer pi = zeta_{p^m} - 1: sum coeffs[i] * pi^i, i < e with
/// e = (p-1)p^{m-1} (e = 1 at level 0). Reduction is always modulo
/// E_m(pi) = Phi_{p^m}(1 + pi).
class CycElt {
public:
    CycElt(std::int64_t prime, int level, std::vector<PadicInt> coeffs);

    static CycElt zero(std::int64_t prime, int level, int precision);
    static CycElt constant(const PadicInt& c, int level);
    static CycElt uniformizer(std::int64_t prime, int level, int precision);

    std::int64_t prime() const { return prime_; }
    int level() const { return level_; }
    int ring_degree() const { return static_cast<int>(coeffs_.size()); }
    const std::vector<PadicInt>& coeffs() const { return coeffs_; }

    /// Minimum coefficient precision; the working precision of the element.
    int min_precision() const;

    bool is_zero_at_precision() const;

    CycElt operator-() const;
    friend CycElt operator+(const CycElt& a, const CycElt& b);
    friend CycElt operator-(const CycElt& a, const CycElt& b);
    friend CycElt operator*(const CycElt& a, const CycElt& b);
    friend CycElt operator*(const PadicInt& s, const CycElt& a);

    CycElt pow(std::uint64_t e) const;
    CycElt reduced(int new_precision) const;

    /// If every coefficient above pi^0 vanishes at precision, the element is
    /// (visibly) rational; returns the constant coordinate.
    bool is_rational_at_precision() const;
    PadicInt rational_part() const { return coeffs_[0]; }

private:
    std::int64_t prime_;
    int level_;
    std::vector<PadicInt> coeffs_;
};

/// Ramification degree (p-1)p^(m-1), with e(0) = 1.
int ramification_degree(std::int64_t p, int level);

/// Exact valuation, normalized so ord(p) = 1. Candidates v_p(c_i) + i/e have
/// pairwise distinct fractional parts, so the ultrametric minimum is attained
/// uniquely; a zero-at-precision coefficient only contributes the bound
/// M_i + i/e, and the result degrades to AtLeast when such a bound undercuts
/// every exact candidate.
Valuation valuation_cyc(const CycElt& a);

/// Embed into the level-m' ring via pi_m -> (1+pi_{m'})^(p^(m'-m)) - 1.
CycElt raise_level(const CycElt& a, int new_level);

/// The root as a ring element at level m' >= level(r).
CycElt as_element(const RootOfUnity& r, int at_level, int precision);

/// Coefficients of E_m = Phi_{p^m}(1+x) reduced mod p^precision
/// (length e+1, monic). Exposed for test oracles.
std::vector<std::uint64_t> eisenstein_coefficients(std::int64_t p, int level, int precision);

} // namespace torex
