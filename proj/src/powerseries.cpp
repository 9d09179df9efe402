#include "powerseries.hpp"

#include <algorithm>

namespace torex {

namespace {

void check_gamma(const PadicInt& g) {
    if (g.precision() < 2)
        throw Error(ErrorCode::InvalidArgument, "gamma needs precision >= 2");
    std::uint64_t p = static_cast<std::uint64_t>(g.prime());
    if (g.residue() % p != 1)
        throw Error(ErrorCode::InvalidArgument, "gamma must be 1 mod p");
    if (g.residue() % (p * p) == 1)
        throw Error(ErrorCode::InvalidArgument, "gamma must generate 1 + pZ_p");
}

void check_compatible(const BivariateSeries& f, const BivariateSeries& g) {
    if (f.prime() != g.prime())
        throw Error(ErrorCode::PrimeMismatch, "series over different primes");
    int prec = std::min(f.gamma().precision(), g.gamma().precision());
    if (f.gamma().reduced(prec).residue() != g.gamma().reduced(prec).residue())
        throw Error(ErrorCode::GammaMismatch, "series use different topological generators");
}

std::vector<int> validate_profile(std::vector<int> profile, int cutoff) {
    if (static_cast<int>(profile.size()) != cutoff + 1)
        throw Error(ErrorCode::InvalidArgument, "profile length must be cutoff+1");
    for (std::size_t d = 0; d < profile.size(); ++d) {
        if (profile[d] < 1)
            throw Error(ErrorCode::InvalidArgument, "profile entries must be positive");
        if (d > 0 && profile[d] > profile[d - 1])
            throw Error(ErrorCode::InvalidArgument, "profile must be non-increasing");
    }
    return profile;
}

} // namespace

BivariateSeries::BivariateSeries(std::int64_t prime, int cutoff, std::vector<int> profile,
                                 std::map<std::pair<int, int>, PadicInt> coeffs, PadicInt gamma)
    : prime_(prime), cutoff_(cutoff), profile_(validate_profile(std::move(profile), cutoff)),
      gamma_(std::move(gamma)) {
    if (cutoff < 0) throw Error(ErrorCode::InvalidArgument, "negative cutoff");
    if (gamma_.prime() != prime_)
        throw Error(ErrorCode::PrimeMismatch, "gamma over a different prime");
    check_gamma(gamma_);
    for (const auto& [key, value] : coeffs) {
        auto [a, b] = key;
        if (a < 0 || b < 0 || a + b > cutoff_)
            throw Error(ErrorCode::InvalidArgument, "coefficient exponents out of range");
        if (value.prime() != prime_)
            throw Error(ErrorCode::PrimeMismatch, "coefficient over a different prime");
        int target = std::min(profile_[a + b], value.precision());
        PadicInt reduced = value.reduced(target);
        if (target < profile_[a + b])
            throw Error(ErrorCode::PrecisionExhausted,
                        "coefficient precision below the profile floor");
        if (!reduced.is_zero()) coeffs_.emplace(key, reduced);
    }
}

PadicInt BivariateSeries::coeff(int a, int b) const {
    if (a < 0 || b < 0 || a + b > cutoff_)
        throw Error(ErrorCode::InvalidArgument, "coefficient exponents out of range");
    auto it = coeffs_.find({a, b});
    if (it != coeffs_.end()) return it->second;
    return PadicInt(prime_, profile_[a + b], 0);
}

bool BivariateSeries::in_ideal_square_certified() const {
    if (cutoff_ < 1) return false;
    return coeff(0, 0).is_zero() && coeff(1, 0).is_zero() && coeff(0, 1).is_zero();
}

bool BivariateSeries::constant_is_unit() const { return coeff(0, 0).is_unit(); }

Valuation UnivariateSeries::coefficient_valuation(int d) const {
    if (d < 0 || d > cutoff)
        throw Error(ErrorCode::InvalidArgument, "degree out of range");
    auto it = coeffs.find(d);
    if (it == coeffs.end() || it->second.is_zero()) {
        Rational floor = profile[d];
        if (it != coeffs.end())
            floor = rational_min(floor, Rational(it->second.precision()));
        return Valuation::at_least(floor);
    }
    Rational v(int_valuation(it->second.residue(), prime));
    if (v < profile[d]) return Valuation::exact(v);
    return Valuation::at_least(profile[d]);
}

BivariateSeries ps_add(const BivariateSeries& f, const BivariateSeries& g) {
    check_compatible(f, g);
    int cutoff = std::min(f.cutoff(), g.cutoff());
    std::vector<int> profile(cutoff + 1);
    for (int d = 0; d <= cutoff; ++d) profile[d] = std::min(f.profile()[d], g.profile()[d]);
    std::map<std::pair<int, int>, PadicInt> out;
    for (const auto& [key, value] : f.coeffs())
        if (key.first + key.second <= cutoff) out.emplace(key, value);
    for (const auto& [key, value] : g.coeffs()) {
        if (key.first + key.second > cutoff) continue;
        auto it = out.find(key);
        if (it == out.end()) out.emplace(key, value);
        else it->second = it->second + value;
    }
    return BivariateSeries(f.prime(), cutoff, std::move(profile), std::move(out), f.gamma());
}

BivariateSeries ps_mul(const BivariateSeries& f, const BivariateSeries& g) {
    check_compatible(f, g);
    int cutoff = std::min(f.cutoff(), g.cutoff());
    std::vector<int> profile(cutoff + 1);
    for (int d = 0; d <= cutoff; ++d) {
        int best = f.profile()[0];
        for (int d1 = 0; d1 <= d; ++d1)
            best = std::min(best, std::min(f.profile()[std::min(d1, f.cutoff())],
                                           g.profile()[std::min(d - d1, g.cutoff())]));
        profile[d] = best;
    }
    std::map<std::pair<int, int>, PadicInt> out;
    for (const auto& [ka, va] : f.coeffs()) {
        for (const auto& [kb, vb] : g.coeffs()) {
            int a = ka.first + kb.first, b = ka.second + kb.second;
            if (a + b > cutoff) continue;
            PadicInt term = va * vb;
            auto it = out.find({a, b});
            if (it == out.end()) out.emplace(std::make_pair(a, b), term);
            else it->second = it->second + term;
        }
    }
    return BivariateSeries(f.prime(), cutoff, std::move(profile), std::move(out), f.gamma());
}

Rational accuracy_bound(const BivariateSeries& f, const Valuation& vx, const Valuation& vy) {
    Rational v = rational_min(vx.lower_bound(), vy.lower_bound());
    if (!(Rational(0) < v))
        throw Error(ErrorCode::PointOnUnitCircle, "evaluation point valuation not positive");
    Rational best = (f.cutoff() + 1) * v;
    for (int d = 0; d <= f.cutoff(); ++d)
        best = rational_min(best, Rational(f.profile()[d]) + d * v);
    return best;
}

EvalResult eval_at(const BivariateSeries& f, const CycElt& x, const CycElt& y) {
    if (x.prime() != f.prime() || y.prime() != f.prime())
        throw Error(ErrorCode::PrimeMismatch, "point over a different prime");
    Valuation vx = valuation_cyc(x);
    Valuation vy = valuation_cyc(y);
    Rational accuracy = accuracy_bound(f, vx, vy); // validates positivity

    int level = std::max(x.level(), y.level());
    CycElt xl = raise_level(x, level);
    CycElt yl = raise_level(y, level);
    int prec = std::min(xl.min_precision(), yl.min_precision());
    const int D = f.cutoff();

    // inner Horner in y per w-exponent, outer Horner in x
    CycElt acc = CycElt::zero(f.prime(), level, prec);
    for (int a = D; a >= 0; --a) {
        CycElt row = CycElt::zero(f.prime(), level, prec);
        for (int b = D - a; b >= 0; --b) {
            row = row * yl;
            auto it = f.coeffs().find({a, b});
            if (it != f.coeffs().end())
                row = row + CycElt::constant(it->second, level);
        }
        acc = acc * xl + row;
    }
    return {acc, accuracy};
}

namespace {

Valuation point_valuation(const PadicInt& s) {
    return s.valuation();
}

} // namespace

UnivariateSeries specialize(const BivariateSeries& f, Axis axis, const PadicInt& point) {
    if (point.prime() != f.prime())
        throw Error(ErrorCode::PrimeMismatch, "point over a different prime");
    Valuation vs = point_valuation(point);
    if (!(Rational(0) < vs.lower_bound()))
        throw Error(ErrorCode::PointOnUnitCircle, "specialization point valuation not positive");
    const int D = f.cutoff();
    Rational v = vs.lower_bound();

    UnivariateSeries out;
    out.prime = f.prime();
    out.cutoff = D;
    out.profile.resize(D + 1, Rational(0));

    // powers of the point with valuation-aware precision
    std::vector<PadicInt> pw;
    pw.reserve(D + 1);
    pw.emplace_back(f.prime(), point.precision(), 1);
    for (int a = 1; a <= D; ++a) pw.push_back(mul_sharp(pw.back(), point));

    for (int b = 0; b <= D; ++b) {
        Rational floor = Rational(D - b + 1) * v; // truncation tail
        PadicInt sum(f.prime(), f.profile()[b], 0);
        bool have = false;
        for (int a = 0; a + b <= D; ++a) {
            floor = rational_min(floor, Rational(f.profile()[a + b]) + a * v);
            auto it = f.coeffs().find({axis == Axis::W ? a : b, axis == Axis::W ? b : a});
            if (it == f.coeffs().end()) continue;
            PadicInt term = mul_sharp(it->second, pw[a]);
            sum = have ? sum + term : term;
            have = true;
        }
        out.profile[b] = rational_min(floor, Rational(sum.precision()));
        if (!sum.is_zero()) out.coeffs.emplace(b, sum);
    }
    return out;
}

CycUnivariate specialize(const BivariateSeries& f, Axis axis, const CycElt& point) {
    if (point.prime() != f.prime())
        throw Error(ErrorCode::PrimeMismatch, "point over a different prime");
    Valuation vs = valuation_cyc(point);
    if (!(Rational(0) < vs.lower_bound()))
        throw Error(ErrorCode::PointOnUnitCircle, "specialization point valuation not positive");
    const int D = f.cutoff();
    Rational v = vs.lower_bound();

    CycUnivariate out;
    out.prime = f.prime();
    out.level = point.level();
    out.cutoff = D;
    out.profile.resize(D + 1, Rational(0));

    std::vector<CycElt> pw;
    pw.reserve(D + 1);
    pw.push_back(CycElt::constant(PadicInt(f.prime(), point.min_precision(), 1), point.level()));
    for (int a = 1; a <= D; ++a) pw.push_back(pw.back() * point);

    for (int b = 0; b <= D; ++b) {
        Rational floor = Rational(D - b + 1) * v;
        CycElt sum = CycElt::zero(f.prime(), point.level(), point.min_precision());
        for (int a = 0; a + b <= D; ++a) {
            floor = rational_min(floor, Rational(f.profile()[a + b]) + a * v);
            auto it = f.coeffs().find({axis == Axis::W ? a : b, axis == Axis::W ? b : a});
            if (it == f.coeffs().end()) continue;
            sum = sum + it->second * pw[a];
        }
        out.profile[b] = floor;
        if (!sum.is_zero_at_precision()) out.coeffs.emplace(b, sum);
    }
    return out;
}

MuLambda mu_lambda(const UnivariateSeries& g) {
    bool have_exact = false;
    Rational best_exact(0);
    bool have_bound = false;
    Rational best_bound(0);
    for (int d = 0; d <= g.cutoff; ++d) {
        Valuation v = g.coefficient_valuation(d);
        if (v.is_exact()) {
            if (!have_exact || v.value < best_exact) { have_exact = true; best_exact = v.value; }
        } else {
            if (!have_bound || v.value < best_bound) { have_bound = true; best_bound = v.value; }
        }
    }
    if (!have_exact) {
        Rational floor = have_bound ? best_bound : Rational(0);
        return {Valuation::at_least(floor), std::nullopt};
    }
    if (have_bound && !(best_exact < best_bound)) {
        // an unresolved coefficient could undercut the observed minimum
        return {Valuation::at_least(rational_min(best_bound, best_exact)), std::nullopt};
    }
    for (int d = 0; d <= g.cutoff; ++d) {
        Valuation v = g.coefficient_valuation(d);
        if (v.is_exact() && v.value == best_exact)
            return {Valuation::exact(best_exact), d};
    }
    return {Valuation::exact(best_exact), std::nullopt}; // unreachable
}

CycBivariate CycBivariate::from_series(const BivariateSeries& f, int level) {
    CycBivariate out{f.prime(), level, f.cutoff(), {}, {}, f.gamma()};
    out.profile.assign(f.profile().begin(), f.profile().end());
    for (const auto& [key, value] : f.coeffs())
        out.coeffs.emplace(key, CycElt::constant(value, level));
    return out;
}

CycBivariate cyc_mul(const CycBivariate& f, const CycBivariate& g) {
    if (f.prime != g.prime)
        throw Error(ErrorCode::PrimeMismatch, "series over different primes");
    CycBivariate out{f.prime, std::max(f.level, g.level), std::min(f.cutoff, g.cutoff),
                     {}, {}, f.gamma};
    out.profile.resize(out.cutoff + 1, Rational(0));
    for (int d = 0; d <= out.cutoff; ++d) {
        Rational best = f.profile[0];
        for (int d1 = 0; d1 <= d; ++d1)
            best = rational_min(best,
                                rational_min(f.profile[std::min(d1, f.cutoff)],
                                             g.profile[std::min(d - d1, g.cutoff)]));
        out.profile[d] = best;
    }
    for (const auto& [ka, va] : f.coeffs) {
        for (const auto& [kb, vb] : g.coeffs) {
            int a = ka.first + kb.first, b = ka.second + kb.second;
            if (a + b > out.cutoff) continue;
            CycElt term = va * vb;
            auto it = out.coeffs.find({a, b});
            if (it == out.coeffs.end()) out.coeffs.emplace(std::make_pair(a, b), term);
            else it->second = it->second + term;
        }
    }
    for (auto it = out.coeffs.begin(); it != out.coeffs.end();) {
        if (it->second.is_zero_at_precision()) it = out.coeffs.erase(it);
        else ++it;
    }
    return out;
}

namespace {

CycBivariate transpose(const CycBivariate& f) {
    CycBivariate out = f;
    out.coeffs.clear();
    for (const auto& [key, value] : f.coeffs)
        out.coeffs.emplace(std::make_pair(key.second, key.first), value);
    return out;
}

// Substitute 1+T := c * (1+w)^N into f; output is univariate in w.
CycUnivariate substitute_core(const CycBivariate& f, const PadicInt& n_exp, const CycElt& c) {
    const int D = f.cutoff;
    const std::int64_t p = f.prime;
    const int level = std::max(f.level, c.level());
    const int prec = c.min_precision();

    CycElt one = CycElt::constant(PadicInt(p, prec, 1), level);
    std::vector<CycElt> s(D + 1, CycElt::zero(p, level, prec));
    s[0] = raise_level(c, level) - one;
    for (int k = 1; k <= D; ++k)
        s[k] = binom_padic(n_exp, k) * raise_level(c, level);

    Rational vstar = valuation_cyc(s[0]).lower_bound();

    auto poly_mul = [&](const std::vector<CycElt>& a, const std::vector<CycElt>& b) {
        std::vector<CycElt> out(D + 1, CycElt::zero(p, level, prec));
        for (int i = 0; i <= D; ++i) {
            if (a[i].is_zero_at_precision()) continue;
            for (int j = 0; i + j <= D; ++j) {
                if (b[j].is_zero_at_precision()) continue;
                out[i + j] = out[i + j] + a[i] * b[j];
            }
        }
        return out;
    };

    std::vector<CycElt> acc(D + 1, CycElt::zero(p, level, prec));
    for (int b = D; b >= 0; --b) {
        acc = poly_mul(acc, s);
        for (int a = 0; a + b <= D; ++a) {
            auto it = f.coeffs.find({a, b});
            if (it != f.coeffs.end())
                acc[a] = acc[a] + raise_level(it->second, level);
        }
    }

    CycUnivariate out;
    out.prime = p;
    out.level = level;
    out.cutoff = D;
    out.profile.resize(D + 1, Rational(0));
    for (int d = 0; d <= D; ++d) {
        Rational floor = Rational(D + 1 - d) * vstar;
        for (int dd = 0; dd <= D; ++dd) {
            Rational flow = f.profile[dd];
            if (dd > d) flow = flow + Rational(dd - d) * vstar;
            floor = rational_min(floor, flow);
        }
        out.profile[d] = floor;
        if (!acc[d].is_zero_at_precision()) out.coeffs.emplace(d, acc[d]);
    }
    return out;
}

} // namespace

CycUnivariate substitute_torus(const CycBivariate& f, const ToroidalFactor& factor) {
    if (factor.xi.prime != f.prime)
        throw Error(ErrorCode::PrimeMismatch, "factor over a different prime");
    int xi_level = factor.xi.reduced_level();
    int level = std::max(f.level, xi_level);
    int prec = f.gamma.precision();

    if (factor.orientation == ToroidalFactor::Orientation::PowerOnW) {
        // 1+T := xi^{-1} gamma^A (1+w)^N
        CycElt c = as_element(factor.xi.inverse(), level, prec) *
                   CycElt::constant(unit_power(f.gamma, factor.exponent_a), level);
        return substitute_core(f, factor.exponent_n, c);
    }
    // 1+w := xi gamma^{-A} (1+T)^N, realized on the transposed series
    CycElt c = as_element(factor.xi, level, prec) *
               CycElt::constant(unit_power(f.gamma, -factor.exponent_a), level);
    return substitute_core(transpose(f), factor.exponent_n, c);
}

CycUnivariate substitute_torus(const BivariateSeries& f, const ToroidalFactor& factor) {
    return substitute_torus(CycBivariate::from_series(f, 0), factor);
}

BivariateSeries divide_fe(const BivariateSeries& f) {
    const int D = f.cutoff();
    const std::int64_t p = f.prime();
    if (D < 1)
        throw Error(ErrorCode::PreconditionNotCertified, "cutoff too small for FE division");
    int big = f.profile()[0];
    PadicInt two(p, big, 2);

    // dense quotient grid q[a][t], a <= D-1, t <= D-1-a; divisor w - (2T + T^2)
    std::vector<std::vector<PadicInt>> q(
        D, std::vector<PadicInt>(D, PadicInt(p, big, 0)));
    auto qat = [&](int a, int t) -> PadicInt {
        if (a >= D || t >= D || t < 0) return PadicInt(p, big, 0);
        return q[a][t];
    };
    for (int a = D; a >= 1; --a) {
        for (int t = 0; t <= D - a; ++t) {
            PadicInt val = f.coeff(a, t) + two * qat(a, t - 1) + qat(a, t - 2);
            if (a - 1 < D && t < D) q[a - 1][t] = val;
        }
    }
    // remainder r(T) = f_0 + (2T+T^2) q_0
    for (int t = 0; t <= D; ++t) {
        PadicInt r = f.coeff(0, t) + two * qat(0, t - 1) + qat(0, t - 2);
        if (!r.is_zero())
            throw Error(ErrorCode::NonzeroRemainder,
                        "series does not vanish along (1+w)=(1+T)^2 at degree " +
                            std::to_string(t));
    }

    int out_cutoff = D - 1;
    std::vector<int> profile(out_cutoff + 1, big);
    for (int a = 0; a <= out_cutoff; ++a)
        for (int t = 0; a + t <= out_cutoff; ++t)
            profile[a + t] = std::min(profile[a + t], q[a][t].precision());
    for (int d = 1; d <= out_cutoff; ++d) profile[d] = std::min(profile[d], profile[d - 1]);

    std::map<std::pair<int, int>, PadicInt> out;
    for (int a = 0; a <= out_cutoff; ++a)
        for (int t = 0; a + t <= out_cutoff; ++t)
            if (!q[a][t].is_zero()) out.emplace(std::make_pair(a, t), q[a][t]);
    return BivariateSeries(p, out_cutoff, std::move(profile), std::move(out), f.gamma());
}

namespace {

// Pascal triangle mod p^prec up to row n.
std::vector<std::vector<PadicInt>> binomial_table(std::int64_t p, int prec, int n) {
    std::uint64_t mod = pow_u64_checked(p, prec);
    std::vector<std::vector<std::uint64_t>> rows(n + 1);
    rows[0] = {1};
    for (int i = 1; i <= n; ++i) {
        rows[i].assign(i + 1, 1);
        for (int j = 1; j < i; ++j) rows[i][j] = (rows[i - 1][j - 1] + rows[i - 1][j]) % mod;
    }
    std::vector<std::vector<PadicInt>> out(n + 1);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= i; ++j) out[i].emplace_back(p, prec, rows[i][j]);
    return out;
}

// Single-axis affine substitution x -> shift + scale * x.
BivariateSeries shift_axis(const BivariateSeries& f, Axis axis, const PadicInt& shift,
                           const PadicInt& scale) {
    const int D = f.cutoff();
    const std::int64_t p = f.prime();
    auto C = binomial_table(p, shift.precision(), D);

    std::vector<PadicInt> shift_pow{PadicInt(p, shift.precision(), 1)};
    for (int k = 1; k <= D; ++k) shift_pow.push_back(mul_sharp(shift_pow.back(), shift));
    std::vector<PadicInt> scale_pow{PadicInt(p, scale.precision(), 1)};
    for (int k = 1; k <= D; ++k) scale_pow.push_back(scale_pow.back() * scale);

    Rational vshift = shift.valuation().lower_bound();

    std::map<std::pair<int, int>, PadicInt> out;
    std::vector<int> natural(D + 1, shift.precision());
    for (int j = 0; j <= D; ++j) {
        for (int b = 0; j + b <= D; ++b) {
            PadicInt sum(p, shift.precision(), 0);
            bool have = false;
            for (int a = j; a + b <= D; ++a) {
                auto key = axis == Axis::W ? std::make_pair(a, b) : std::make_pair(b, a);
                auto it = f.coeffs().find(key);
                if (it == f.coeffs().end()) continue;
                PadicInt term = mul_sharp(mul_sharp(it->second, C[a][j]), shift_pow[a - j]);
                term = mul_sharp(term, scale_pow[j]);
                sum = have ? sum + term : term;
                have = true;
            }
            int d = j + b;
            // absent source coefficients still bound the output precision
            for (int a = j; a + b <= D; ++a)
                natural[d] = std::min(
                    natural[d],
                    f.profile()[a + b] + static_cast<int>((a - j) * vshift.num() / vshift.den()));
            if (have) {
                natural[d] = std::min(natural[d], sum.precision());
                auto key = axis == Axis::W ? std::make_pair(j, b) : std::make_pair(b, j);
                if (!sum.is_zero()) out.emplace(key, sum);
            }
        }
    }

    std::vector<int> profile(D + 1);
    for (int d = 0; d <= D; ++d) {
        long long tail_num = static_cast<long long>(D + 1 - d) * vshift.num();
        long long tail = tail_num / vshift.den();
        profile[d] = static_cast<int>(std::min<long long>(natural[d], tail));
        if (profile[d] < 1)
            throw Error(ErrorCode::PrecisionExhausted, "coordinate shift exhausts precision");
        if (d > 0) profile[d] = std::min(profile[d], profile[d - 1]);
    }
    return BivariateSeries(p, D, std::move(profile), std::move(out), f.gamma());
}

} // namespace

BivariateSeries coordinate_shift(const BivariateSeries& f, const PadicInt& k1,
                                 const PadicInt& k2) {
    PadicInt g1 = unit_power(f.gamma(), k1);
    PadicInt g2 = unit_power(f.gamma(), k2);
    PadicInt one1(f.prime(), g1.precision(), 1);
    PadicInt one2(f.prime(), g2.precision(), 1);
    BivariateSeries step = shift_axis(f, Axis::W, g1 - one1, g1);
    return shift_axis(step, Axis::T, g2 - one2, g2);
}

bool series_agree(const BivariateSeries& f, const BivariateSeries& g) {
    if (f.prime() != g.prime()) return false;
    int cutoff = std::min(f.cutoff(), g.cutoff());
    for (int a = 0; a <= cutoff; ++a) {
        for (int b = 0; a + b <= cutoff; ++b) {
            int prec = std::min(f.profile()[a + b], g.profile()[a + b]);
            std::uint64_t m = pow_u64_checked(f.prime(), prec);
            if (f.coeff(a, b).residue() % m != g.coeff(a, b).residue() % m) return false;
        }
    }
    return true;
}

} // namespace torex
