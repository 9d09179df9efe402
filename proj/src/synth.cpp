#include "synth.hpp"

namespace torex {

BivariateSeries random_series(std::uint64_t seed, std::int64_t prime, int cutoff,
                              const std::vector<int>& profile, CofactorConstraint constraint,
                              const PadicInt& gamma) {
    if (static_cast<int>(profile.size()) != cutoff + 1)
        throw Error(ErrorCode::InvalidArgument, "profile length must be cutoff+1");
    SplitMix64 rng(seed);
    std::map<std::pair<int, int>, PadicInt> coeffs;
    for (int d = 0; d <= cutoff; ++d) {
        std::uint64_t mod = pow_u64_checked(prime, profile[d]);
        for (int a = 0; a <= d; ++a) {
            int b = d - a;
            std::uint64_t value = rng.next() % mod;
            if (a == 0 && b == 0) {
                if (constraint == CofactorConstraint::Unit) {
                    while (value % static_cast<std::uint64_t>(prime) == 0)
                        value = rng.next() % mod;
                } else if (constraint == CofactorConstraint::InMaximalIdeal) {
                    value -= value % static_cast<std::uint64_t>(prime);
                } else {
                    value = 0;
                }
            }
            if (constraint == CofactorConstraint::InSquareOfMaximalIdeal && d == 1) value = 0;
            if (value != 0)
                coeffs.emplace(std::make_pair(a, b), PadicInt(prime, profile[d], value));
        }
    }
    return BivariateSeries(prime, cutoff, profile, std::move(coeffs), gamma);
}

BivariateSeries plant(const PlantSpec& spec) {
    BivariateSeries cofactor = random_series(spec.seed, spec.prime, spec.cutoff, spec.profile,
                                             spec.cofactor_constraint, spec.gamma);
    if (!spec.factor) return cofactor;
    BivariateSeries orbit = orbit_expand(*spec.factor, spec.gamma, spec.cutoff, spec.profile);
    return ps_mul(orbit, cofactor);
}

std::vector<ToroidalFactor> oracle_scan(const BivariateSeries& f, int m_max, int n_exponent,
                                        const std::vector<long long>& a_grid) {
    if (m_max < 0 || n_exponent < 0)
        throw Error(ErrorCode::InvalidArgument, "negative grid bounds");
    const std::int64_t p = f.prime();
    const int prec = f.gamma().precision();
    std::uint64_t n_mod = pow_u64_checked(p, n_exponent);

    std::vector<ToroidalFactor> found;
    for (auto orient : {ToroidalFactor::Orientation::PowerOnW,
                        ToroidalFactor::Orientation::PowerOnT}) {
        for (int m = 0; m <= m_max; ++m) {
            std::int64_t order = 1;
            for (int i = 0; i < m; ++i) order *= p;
            for (std::int64_t u = 0; u < order; ++u) {
                if (m == 0 && u != 0) continue;
                if (m >= 1 && u % p == 0) continue; // faithful level only
                for (std::uint64_t n = 0; n < n_mod; ++n) {
                    for (long long a : a_grid) {
                        ToroidalFactor factor(orient, PadicInt(p, prec, n),
                                              PadicInt::from_integer(p, prec, a),
                                              RootOfUnity(p, m, u));
                        if (vanishes_on_translate(f, factor).zero_at_precision())
                            found.push_back(factor);
                    }
                }
            }
        }
    }
    return found;
}

} // namespace torex
