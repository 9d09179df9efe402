#include "rigidity.hpp"

#include <algorithm>
#include <thread>

namespace torex {

namespace {

std::vector<std::vector<PadicInt>> pascal_rows(std::int64_t p, int prec, int n) {
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

} // namespace

CycBivariate expand_toroidal(const ToroidalFactor& factor, const PadicInt& gamma, int cutoff,
                             std::vector<Rational> profile) {
    const std::int64_t p = gamma.prime();
    const int level = factor.xi.reduced_level();
    const int prec = gamma.precision();
    if (static_cast<int>(profile.size()) != cutoff + 1)
        throw Error(ErrorCode::InvalidArgument, "profile length must be cutoff+1");

    CycBivariate out{p, level, cutoff, std::move(profile), {}, gamma};
    PadicInt ga = unit_power(gamma, factor.exponent_a);
    CycElt xi = as_element(RootOfUnity(p, level, factor.xi.exponent), level, prec);

    if (factor.orientation == ToroidalFactor::Orientation::PowerOnW) {
        // gamma^A (1+w)^N - xi (1+T)
        for (int k = 0; k <= cutoff; ++k) {
            PadicInt c = ga * binom_padic(factor.exponent_n, k);
            CycElt e = CycElt::constant(c, level);
            if (k == 0) e = e - xi;
            if (!e.is_zero_at_precision()) out.coeffs.emplace(std::make_pair(k, 0), e);
        }
        if (cutoff >= 1) out.coeffs.emplace(std::make_pair(0, 1), -xi);
    } else {
        // gamma^A (1+w) - xi (1+T)^N
        for (int k = 0; k <= cutoff; ++k) {
            CycElt e = -(binom_padic(factor.exponent_n, k) * xi);
            if (k == 0) e = e + CycElt::constant(ga, level);
            if (!e.is_zero_at_precision()) out.coeffs.emplace(std::make_pair(0, k), e);
        }
        if (cutoff >= 1) out.coeffs.emplace(std::make_pair(1, 0), CycElt::constant(ga, level));
    }
    return out;
}

BivariateSeries orbit_expand(const ToroidalFactor& factor, const PadicInt& gamma, int cutoff,
                             const std::vector<int>& profile) {
    const std::int64_t p = gamma.prime();
    const int prec = gamma.precision();
    const int n = factor.xi.reduced_level();
    const bool on_w = factor.orientation == ToroidalFactor::Orientation::PowerOnW;

    std::map<std::pair<int, int>, PadicInt> coeffs;
    auto add = [&](int a, int b, const PadicInt& v) {
        if (a + b > cutoff) return;
        auto it = coeffs.find({a, b});
        if (it == coeffs.end()) coeffs.emplace(std::make_pair(a, b), v);
        else it->second = it->second + v;
    };

    if (n == 0) {
        PadicInt ga = unit_power(gamma, factor.exponent_a);
        PadicInt neg_one = -PadicInt(p, prec, 1);
        if (on_w) {
            for (int k = 0; k <= cutoff; ++k) add(k, 0, ga * binom_padic(factor.exponent_n, k));
            add(0, 0, neg_one);
            add(0, 1, neg_one);
        } else {
            add(1, 0, ga);
            add(0, 0, ga);
            for (int k = 0; k <= cutoff; ++k)
                add(0, k, -binom_padic(factor.exponent_n, k));
        }
    } else {
        int step = 1;
        for (int i = 1; i < n; ++i) step *= static_cast<int>(p);
        int phi = static_cast<int>(p - 1) * step;
        auto C = pascal_rows(p, prec, phi);
        for (int i = 0; i < static_cast<int>(p); ++i) {
            int xe = i * step;       // X-exponent
            int ye = phi - i * step; // Y-exponent
            PadicInt ga = unit_power(gamma, PadicInt(p, prec, static_cast<std::uint64_t>(xe)) *
                                                factor.exponent_a);
            if (on_w) {
                // X = gamma^A (1+w)^N, Y = 1+T
                PadicInt nw = PadicInt(p, prec, static_cast<std::uint64_t>(xe)) * factor.exponent_n;
                for (int a = 0; a <= cutoff; ++a) {
                    PadicInt wa = ga * binom_padic(nw, a);
                    if (wa.is_zero()) continue;
                    for (int b = 0; b <= std::min(cutoff - a, ye); ++b)
                        add(a, b, wa * C[ye][b]);
                }
            } else {
                // X = gamma^A (1+w), Y = (1+T)^N
                PadicInt nt = PadicInt(p, prec, static_cast<std::uint64_t>(ye)) * factor.exponent_n;
                for (int a = 0; a <= std::min(cutoff, xe); ++a) {
                    PadicInt wa = ga * C[xe][a];
                    if (wa.is_zero()) continue;
                    for (int b = 0; a + b <= cutoff; ++b)
                        add(a, b, wa * binom_padic(nt, b));
                }
            }
        }
    }

    // profile: requested floor, capped by what the binomials actually kept
    std::vector<int> prof(cutoff + 1);
    std::vector<int> natural(cutoff + 1, prec);
    for (const auto& [key, value] : coeffs)
        natural[key.first + key.second] =
            std::min(natural[key.first + key.second], value.precision());
    for (int d = 0; d <= cutoff; ++d) {
        prof[d] = std::min(profile.at(d), natural[d]);
        if (d > 0) prof[d] = std::min(prof[d], prof[d - 1]);
        if (prof[d] < 1)
            throw Error(ErrorCode::PrecisionExhausted, "expansion exhausts precision");
    }
    return BivariateSeries(p, cutoff, std::move(prof), std::move(coeffs), gamma);
}

namespace {

VanishCheck scan_substitution(const CycUnivariate& s) {
    bool have_floor = false;
    Rational floor(0);
    for (int d = 0; d <= s.cutoff; ++d) {
        Rational bound = s.profile[d];
        auto it = s.coeffs.find(d);
        if (it != s.coeffs.end()) {
            Valuation v = valuation_cyc(it->second);
            if (v.is_exact() && v.value < s.profile[d])
                return {VanishCheck::Kind::CertifiedNonvanishing, Rational(0), d, v.value};
            bound = rational_min(bound, v.lower_bound());
        }
        if (!have_floor || bound < floor) { have_floor = true; floor = bound; }
    }
    return {VanishCheck::Kind::ZeroAtPrecision, floor, -1, Rational(0)};
}

} // namespace

VanishCheck vanishes_on_translate(const BivariateSeries& f, const ToroidalFactor& factor) {
    return scan_substitution(substitute_torus(f, factor));
}

VanishCheck vanishes_on_translate(const CycBivariate& f, const ToroidalFactor& factor) {
    return scan_substitution(substitute_torus(f, factor));
}

QuadraticCheck exclude_by_quadratic(const BivariateSeries& f) {
    const std::int64_t p = f.prime();
    if (f.cutoff() < static_cast<int>(p))
        throw Error(ErrorCode::PreconditionNotCertified,
                    "cutoff below p: pure-power conditions undecidable");
    if (!f.in_ideal_square_certified())
        throw Error(ErrorCode::PreconditionNotCertified,
                    "constant or linear coefficient not certified zero");

    auto unit_mod_p = [&](int a, int b) {
        return f.coeff(a, b).residue() % static_cast<std::uint64_t>(p) != 0;
    };
    int divisible = (unit_mod_p(2, 0) ? 0 : 1) + (unit_mod_p(1, 1) ? 0 : 1) +
                    (unit_mod_p(0, 2) ? 0 : 1);
    if (divisible != 2) return QuadraticCheck::fail(1);
    bool w_witness = false, t_witness = false;
    for (int k = 1; k <= static_cast<int>(p); ++k) {
        w_witness = w_witness || unit_mod_p(k, 0);
        t_witness = t_witness || unit_mod_p(0, k);
    }
    if (!w_witness) return QuadraticCheck::fail(2);
    if (!t_witness) return QuadraticCheck::fail(3);
    return QuadraticCheck::pass();
}

int min_level(int lambda, std::int64_t p) {
    if (lambda < 0) throw Error(ErrorCode::InvalidArgument, "negative lambda");
    int m = 1;
    long long cover = p - 1; // p^{m-1} (p-1)
    while (cover < lambda) {
        cover *= p;
        ++m;
    }
    return m;
}

namespace {

CheckEntry sweep_entry(const BivariateSeries& f, ToroidalFactor::Orientation orient,
                       int zeta_prime_exp, const CycElt& prim, const CycElt& var,
                       bool fe_divide, const PadicInt& p_shift) {
    CheckEntry entry;
    entry.zeta_prime_exp = zeta_prime_exp;
    entry.orientation = orient;

    const std::int64_t p = f.prime();
    int level = prim.level();
    int prec = prim.min_precision();
    CycElt one = CycElt::constant(PadicInt(p, prec, 1), level);

    // first slot carries the primitive root for PowerOnW, the varying one for
    // PowerOnT
    const CycElt& zx = orient == ToroidalFactor::Orientation::PowerOnW ? prim : var;
    const CycElt& zy = orient == ToroidalFactor::Orientation::PowerOnW ? var : prim;

    if (!fe_divide) {
        EvalResult r = eval_at(f, zx - one, zy - one);
        Valuation v = valuation_cyc(r.value);
        entry.valuation = v;
        entry.accuracy = r.accuracy;
        entry.trusted = v.is_exact() && v.value < r.accuracy;
        return entry;
    }

    // numerator: undivided series at the p-shifted point
    CycElt shift = CycElt::constant(p_shift, level);
    EvalResult r = eval_at(f, zx - one + shift, zy - one);
    Valuation num = valuation_cyc(r.value);
    // denominator (1+x) - (1+y)^2 = zx + p - zy^2, exact
    CycElt den = zx + shift - zy * zy;
    Valuation dv = valuation_cyc(den);
    entry.accuracy = r.accuracy;
    entry.denominator_valuation = dv;
    if (!dv.is_exact()) {
        entry.valuation = Valuation::at_least(Rational(0));
        entry.trusted = false;
        return entry;
    }
    bool num_trusted = num.is_exact() && num.value < r.accuracy;
    entry.valuation = num_trusted ? Valuation::exact(num.value - dv.value)
                                  : Valuation::at_least(num.lower_bound() - dv.value);
    entry.trusted = num_trusted;
    return entry;
}

} // namespace

CheckReport modp_sweep_with_generator(const BivariateSeries& f, int level, bool fe_divide,
                                      std::int64_t zeta_exponent, int jobs) {
    const std::int64_t p = f.prime();
    if (level < 1) throw Error(ErrorCode::InvalidArgument, "sweep level must be >= 1");
    if (zeta_exponent % p == 0)
        throw Error(ErrorCode::InvalidArgument, "sweep generator exponent must be prime to p");

    int prec = std::min(f.profile()[0] + 4, max_precision(p));
    std::int64_t count = 1;
    for (int i = 0; i < level; ++i) count *= p;

    CycElt one = CycElt::constant(PadicInt(p, prec, 1), level);
    CycElt z = CycElt::uniformizer(p, level, prec) + one;
    CycElt prim = z.pow(static_cast<std::uint64_t>(
        ((zeta_exponent % count) + count) % count));
    PadicInt p_shift(p, prec, static_cast<std::uint64_t>(p));

    CheckReport report;
    report.level = level;
    report.fe_divided = fe_divide;
    report.entries.resize(2 * static_cast<std::size_t>(count));

    auto run_range = [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t t = lo; t < hi; ++t) {
            CycElt var = z.pow(static_cast<std::uint64_t>(t));
            report.entries[2 * t] =
                sweep_entry(f, ToroidalFactor::Orientation::PowerOnW, static_cast<int>(t), prim,
                            var, fe_divide, p_shift);
            report.entries[2 * t + 1] =
                sweep_entry(f, ToroidalFactor::Orientation::PowerOnT, static_cast<int>(t), prim,
                            var, fe_divide, p_shift);
        }
    };

    int workers = std::max(1, jobs);
    if (workers == 1 || count < 4) {
        run_range(0, count);
    } else {
        std::vector<std::thread> pool;
        std::int64_t chunk = (count + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            std::int64_t lo = w * chunk, hi = std::min<std::int64_t>(count, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(run_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    bool some_ge_one = false, all_trusted = true;
    for (const auto& e : report.entries) {
        if (e.trusted && !(e.valuation.value < Rational(1))) some_ge_one = true;
        if (!e.trusted) all_trusted = false;
    }
    report.outcome = some_ge_one ? SweepOutcome::SomeAtLeastOne
                                 : (all_trusted ? SweepOutcome::AllBelowOne
                                                : SweepOutcome::Untrusted);
    return report;
}

CheckReport modp_sweep(const BivariateSeries& f, int level, bool fe_divide, int jobs) {
    return modp_sweep_with_generator(f, level, fe_divide, 1, jobs);
}

PipelineResult branch_pipeline(const BivariateSeries& f, const BranchMeta& meta, int m_max,
                               int jobs) {
    PipelineResult result;
    result.verdict.kind = BranchVerdict::Kind::Inconclusive;
    result.self_dual = self_dual_indices(meta.component_r, meta.prime).count(meta.branch_i) > 0;

    if (f.constant_is_unit()) {
        result.verdict.kind = BranchVerdict::Kind::UnitBranch;
        return result;
    }

    UnivariateSeries g = specialize(f, Axis::W, PadicInt(f.prime(), f.profile()[0], 0));
    MuLambda ml = mu_lambda(g);
    result.mu = ml.mu;
    result.lambda = ml.lambda;
    if (!(ml.mu.is_exact() && ml.mu.value == Rational(0))) {
        result.verdict.reason = "mu_not_certified_zero";
        return result;
    }
    if (!ml.lambda.has_value()) {
        result.verdict.reason = "lambda_unknown";
        return result;
    }
    int lambda = *ml.lambda;

    bool fe = false;
    if (result.self_dual) {
        ToroidalFactor fe_factor =
            ToroidalFactor::functional_equation(f.prime(), f.gamma().precision());
        if (vanishes_on_translate(f, fe_factor).zero_at_precision()) {
            try {
                divide_fe(f);
                fe = true;
            } catch (const Error& err) {
                if (err.code() != ErrorCode::NonzeroRemainder) throw;
                result.notes.push_back("fe_division_remainder_nonzero");
            }
        }
    }
    result.fe_divided = fe;
    if (fe && lambda < 1) {
        result.verdict.reason = "fe_vanishing_with_zero_lambda";
        return result;
    }

    if (f.cutoff() >= static_cast<int>(f.prime()) && f.in_ideal_square_certified()) {
        QuadraticCheck qc = exclude_by_quadratic(f);
        if (qc.passed) {
            result.verdict.kind = BranchVerdict::Kind::ExcludedByQuadratic;
            return result;
        }
        result.notes.push_back("quadratic_check_failed_condition_" +
                               std::to_string(qc.failed_condition));
    }

    int lambda_eff = fe ? lambda - 1 : lambda;
    int m0 = min_level(lambda_eff, f.prime());
    bool all_untrusted = true;
    for (int m = m0; m <= m_max; ++m) {
        CheckReport rep = modp_sweep(f, m, fe, jobs);
        rep.branch_i = meta.branch_i;
        result.audit.push_back(rep);
        if (rep.outcome == SweepOutcome::AllBelowOne) {
            result.verdict.kind = fe ? BranchVerdict::Kind::ForcedFEThenExcluded
                                     : BranchVerdict::Kind::ExcludedByModP;
            result.verdict.level = m;
            return result;
        }
        if (rep.outcome != SweepOutcome::Untrusted) all_untrusted = false;
    }
    if (result.audit.empty()) {
        result.verdict.reason = "no_sweep_level_available";
    } else {
        result.verdict.reason =
            all_untrusted ? "insufficient_precision" : "not_excluded_up_to_m_max";
    }
    return result;
}

const char* orientation_name(ToroidalFactor::Orientation o) {
    return o == ToroidalFactor::Orientation::PowerOnW ? "power_on_w" : "power_on_t";
}

const char* outcome_name(SweepOutcome o) {
    switch (o) {
        case SweepOutcome::AllBelowOne: return "all_below_one";
        case SweepOutcome::SomeAtLeastOne: return "some_at_least_one";
        default: return "untrusted";
    }
}

const char* verdict_name(BranchVerdict::Kind k) {
    switch (k) {
        case BranchVerdict::Kind::UnitBranch: return "unit_branch";
        case BranchVerdict::Kind::ExcludedByQuadratic: return "excluded_by_quadratic";
        case BranchVerdict::Kind::ExcludedByModP: return "excluded_by_mod_p";
        case BranchVerdict::Kind::ForcedFEThenExcluded: return "forced_fe_then_excluded";
        default: return "inconclusive";
    }
}

} // namespace torex
