#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "powerseries.hpp"
#include "rigidity.hpp"
#include "toroidal_factor.hpp"

namespace torex {

/// Name of the pinned coefficient generator, recorded in reports so fixture
/// runs reproduce across machines.
inline constexpr const char* kGeneratorName = "splitmix64/v1";

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

enum class CofactorConstraint { Unit, InMaximalIdeal, InSquareOfMaximalIdeal };

/// Deterministic description of a synthetic branch: identical spec, identical
/// series.
struct PlantSpec {
    std::uint64_t seed;
    std::int64_t prime;
    std::int64_t tame_level;
    int component_r;
    int branch_i;
    PadicInt gamma;
    int cutoff;
    std::vector<int> profile;
    std::optional<ToroidalFactor> factor; // absent: plain random series
    CofactorConstraint cofactor_constraint;
};

/// Seeded series with coefficients drawn from splitmix64/v1 in total-degree
/// order. Unit forces a unit constant term; InMaximalIdeal a constant term
/// divisible by p; InSquareOfMaximalIdeal zero constant and linear terms.
BivariateSeries random_series(std::uint64_t seed, std::int64_t prime, int cutoff,
                              const std::vector<int>& profile, CofactorConstraint constraint,
                              const PadicInt& gamma);

/// Orbit expansion of the factor times a seeded cofactor; vanishes on the
/// factor's translate by construction. Without a factor this is just
/// random_series.
BivariateSeries plant(const PlantSpec& spec);

/// Every factor over the finite grid (both orientations, xi in mu_{p^m} for
/// m <= m_max, N mod p^n_exponent, A in a_grid) whose substitution into f is
/// zero at precision. Complete over its grid, ordered by
/// (orientation, xi-level, xi-exponent, N, A).
///
/// A factor's truncation at cutoff D depends on N only through binom(N, k)
/// for k <= D, which is determined by N mod p^(M + v_p(D!)) at working
/// precision M; choosing n_exponent at least ceil(log_p(M + v_p(D!))) + 1
/// digits therefore separates every class the data can distinguish. Cost is
/// O(grid * D^2 * e) substitutions.
std::vector<ToroidalFactor> oracle_scan(const BivariateSeries& f, int m_max, int n_exponent,
                                        const std::vector<long long>& a_grid);

} // namespace torex
