#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lfun_model.hpp"
#include "powerseries.hpp"
#include "toroidal_factor.hpp"

namespace torex {

/// Truncated expansion of the factor itself, with coefficients in
/// Z_p[zeta_{p^m}] for the level of xi (level 0 when xi is trivial).
CycBivariate expand_toroidal(const ToroidalFactor& factor, const PadicInt& gamma, int cutoff,
                             std::vector<Rational> profile);

/// Z_p expansion of the product of the factor over the full Galois orbit of
/// xi (the bare factor when xi is trivial): the orbit product collapses to
/// sum_i X^(i p^(n-1)) Y^(phi(p^n) - i p^(n-1)) with X, Y the two sides of the
/// factor, so coefficients stay rational. Any series divisible by the factor
/// over Z_p[xi] can be realized as this product times a cofactor.
BivariateSeries orbit_expand(const ToroidalFactor& factor, const PadicInt& gamma, int cutoff,
                             const std::vector<int>& profile);

struct VanishCheck {
    enum class Kind { CertifiedNonvanishing, ZeroAtPrecision };
    Kind kind;
    Rational floor;              // ZeroAtPrecision: vanishing holds below this
    int witness_degree = -1;     // CertifiedNonvanishing: degree of the witness
    Rational witness_valuation;  // and its exact valuation

    bool zero_at_precision() const { return kind == Kind::ZeroAtPrecision; }
};

/// Substitute the factor into f. A certified nonzero output coefficient
/// refutes divisibility; vanishing can only ever be reported at precision.
VanishCheck vanishes_on_translate(const BivariateSeries& f, const ToroidalFactor& factor);
VanishCheck vanishes_on_translate(const CycBivariate& f, const ToroidalFactor& factor);

struct QuadraticCheck {
    bool passed;
    int failed_condition = 0; // 1, 2 or 3 when failed

    static QuadraticCheck pass() { return {true, 0}; }
    static QuadraticCheck fail(int cond) { return {false, cond}; }
};

/// The low-degree coefficient test: for f in (w,T)^2 with exactly two of the
/// three quadratic coefficients divisible by p and units among the first p
/// pure-w and pure-T coefficients, no toroidal factor with unit congruent to
/// 1 mod p can divide f. Requires cutoff >= p and certified membership in
/// (w,T)^2; every divisibility-by-p decision is certified by profile >= 1.
QuadraticCheck exclude_by_quadratic(const BivariateSeries& f);

/// Smallest m >= 1 with p^m >= lambda * p/(p-1): every admissible xi then
/// lies in mu_{p^m}.
int min_level(int lambda, std::int64_t p);

struct CheckEntry {
    int zeta_prime_exp = 0;
    ToroidalFactor::Orientation orientation = ToroidalFactor::Orientation::PowerOnW;
    Valuation valuation;
    Rational accuracy;
    bool trusted = false;
    std::optional<Valuation> denominator_valuation;
};

enum class SweepOutcome { AllBelowOne, SomeAtLeastOne, Untrusted };

struct CheckReport {
    int branch_i = 0;
    int level = 0;
    bool fe_divided = false;
    std::vector<CheckEntry> entries;
    SweepOutcome outcome = SweepOutcome::Untrusted;
};

/// Fix the canonical primitive zeta = class of (1+pi) in mu_{p^m} and compute
/// the valuations of f(zeta-1, zeta'-1) and f(zeta'-1, zeta-1) for every
/// zeta' in mu_{p^m}; in the functional-equation variant the undivided series
/// is evaluated at the p-shifted points and the exact denominator valuation
/// subtracted. AllBelowOne certifies that no toroidal factor with xi-order
/// <= p^m survives, hence only finitely many interpolated values vanish.
CheckReport modp_sweep(const BivariateSeries& f, int level, bool fe_divide, int jobs = 1);

/// Same sweep with zeta replaced by (1+pi)^a, gcd(a, p) = 1; outcome must not
/// depend on the choice (Galois independence).
CheckReport modp_sweep_with_generator(const BivariateSeries& f, int level, bool fe_divide,
                                      std::int64_t zeta_exponent, int jobs = 1);

struct BranchVerdict {
    enum class Kind {
        UnitBranch,
        ExcludedByQuadratic,
        ExcludedByModP,
        ForcedFEThenExcluded,
        Inconclusive,
    };

    Kind kind = Kind::Inconclusive;
    int level = 0;      // sweep level for the ModP / ForcedFE verdicts
    std::string reason; // Inconclusive only

    bool excluded() const { return kind != Kind::Inconclusive; }
};

struct PipelineResult {
    BranchVerdict verdict;
    std::vector<CheckReport> audit;
    Valuation mu;
    std::optional<int> lambda;
    bool self_dual = false;
    bool fe_divided = false;
    std::vector<std::string> notes;
};

/// The whole per-branch workflow: unit test, mu/lambda certification,
/// functional-equation handling, quadratic test, ascending mod-p sweeps.
/// Every failure mode folds into an Inconclusive verdict; a false exclusion
/// is never produced.
PipelineResult branch_pipeline(const BivariateSeries& f, const BranchMeta& meta, int m_max,
                               int jobs = 1);

const char* orientation_name(ToroidalFactor::Orientation o);
const char* outcome_name(SweepOutcome o);
const char* verdict_name(BranchVerdict::Kind k);

} // namespace torex
