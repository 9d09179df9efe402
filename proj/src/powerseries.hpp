#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cyclotomic.hpp"
#include "padic.hpp"
#include "toroidal_factor.hpp"

namespace torex {

enum class Axis { W, T };

/// Truncated element of Z_p[[w,T]]: terms of total degree <= cutoff are
/// stored, the coefficient of total degree d is known mod p^profile[d], and
/// absent exponent pairs are zero at that precision. gamma is the topological
/// generator the coordinates refer to; series with different gamma never mix.
class BivariateSeries {
public:
    BivariateSeries(std::int64_t prime, int cutoff, std::vector<int> profile,
                    std::map<std::pair<int, int>, PadicInt> coeffs, PadicInt gamma);

    std::int64_t prime() const { return prime_; }
    int cutoff() const { return cutoff_; }
    const std::vector<int>& profile() const { return profile_; }
    const std::map<std::pair<int, int>, PadicInt>& coeffs() const { return coeffs_; }
    const PadicInt& gamma() const { return gamma_; }

    /// Stored coefficient, or zero at profile precision when absent.
    PadicInt coeff(int a, int b) const;

    /// Constant and both linear coefficients vanish at precision >= 1.
    bool in_ideal_square_certified() const;

    /// Constant coefficient is a certified unit.
    bool constant_is_unit() const;

private:
    std::int64_t prime_;
    int cutoff_;
    std::vector<int> profile_;
    std::map<std::pair<int, int>, PadicInt> coeffs_;
    PadicInt gamma_;
};

/// One-variable truncation over Z_p. profile[d] is the trust floor of the
/// degree-d coefficient (rational: specializing at fractional-valuation points
/// produces fractional floors).
struct UnivariateSeries {
    std::int64_t prime;
    int cutoff;
    std::vector<Rational> profile;
    std::map<int, PadicInt> coeffs;

    /// Valuation of the degree-d coefficient, clamped by profile[d].
    Valuation coefficient_valuation(int d) const;
};

/// One-variable truncation with coefficients in Z_p[zeta_{p^m}] (level 0 means
/// plain Z_p scalars); produced by torus substitutions.
struct CycUnivariate {
    std::int64_t prime;
    int level;
    int cutoff;
    std::vector<Rational> profile;
    std::map<int, CycElt> coeffs;
};

/// Two-variable truncation over a cyclotomic ring; internal carrier for
/// expansions with a nontrivial root of unity.
struct CycBivariate {
    std::int64_t prime;
    int level;
    int cutoff;
    std::vector<Rational> profile;
    std::map<std::pair<int, int>, CycElt> coeffs;
    PadicInt gamma;

    static CycBivariate from_series(const BivariateSeries& f, int level);
};

CycBivariate cyc_mul(const CycBivariate& f, const CycBivariate& g);

BivariateSeries ps_add(const BivariateSeries& f, const BivariateSeries& g);
BivariateSeries ps_mul(const BivariateSeries& f, const BivariateSeries& g);

/// The valuation below which an evaluation of the truncation at points of
/// valuation >= vx, vy provably agrees with the full series:
///   min( (D+1) * min(vx,vy),  min_d (profile[d] + d * min(vx,vy)) ).
Rational accuracy_bound(const BivariateSeries& f, const Valuation& vx, const Valuation& vy);

struct EvalResult {
    CycElt value;
    Rational accuracy;
};

/// Evaluate at cyclotomic points strictly inside the open unit polydisk.
EvalResult eval_at(const BivariateSeries& f, const CycElt& x, const CycElt& y);

UnivariateSeries specialize(const BivariateSeries& f, Axis axis, const PadicInt& point);
CycUnivariate specialize(const BivariateSeries& f, Axis axis, const CycElt& point);

struct MuLambda {
    Valuation mu;
    std::optional<int> lambda; // nullopt: not certified from the stored window
};

/// Iwasawa invariants of the stored window. mu is exact only when attained by
/// a coefficient certified below every zero-floor; lambda is the first index
/// attaining it (certified global statement when mu = 0).
MuLambda mu_lambda(const UnivariateSeries& g);

/// f with the named factor's substitution applied: PowerOnW sends
/// 1+T -> xi^{-1} gamma^A (1+w)^N, PowerOnT sends 1+w -> xi gamma^{-A} (1+T)^N.
/// Output profile carries the truncation-tail floor (D+1-d) * v, v the
/// valuation of the substitution's constant term; divisibility by the factor
/// forces the output to vanish.
CycUnivariate substitute_torus(const BivariateSeries& f, const ToroidalFactor& factor);
CycUnivariate substitute_torus(const CycBivariate& f, const ToroidalFactor& factor);

/// Divide by (1+w) - (1+T)^2, monic linear in w; throws NonzeroRemainder when
/// the remainder fails to vanish at its carried precision.
BivariateSeries divide_fe(const BivariateSeries& f);

/// f(gamma^K1 (1+w) - 1, gamma^K2 (1+T) - 1) truncated at the same cutoff.
BivariateSeries coordinate_shift(const BivariateSeries& f, const PadicInt& k1,
                                 const PadicInt& k2);

/// Equality of the stored windows at the common trust precision.
bool series_agree(const BivariateSeries& f, const BivariateSeries& g);

} // namespace torex
