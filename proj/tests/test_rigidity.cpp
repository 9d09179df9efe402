#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "rigidity.hpp"
#include "synth.hpp"

using namespace torex;
using Orientation = ToroidalFactor::Orientation;

namespace {

PadicInt gam(std::int64_t p, int prec) {
    return PadicInt(p, prec, static_cast<std::uint64_t>(1 + p));
}

BivariateSeries make_series(std::int64_t p, int cutoff, int prec,
                            std::map<std::pair<int, int>, long long> values) {
    std::vector<int> profile(cutoff + 1, prec);
    std::map<std::pair<int, int>, PadicInt> coeffs;
    for (auto [key, v] : values) coeffs.emplace(key, PadicInt::from_integer(p, prec, v));
    return BivariateSeries(p, cutoff, profile, std::move(coeffs), gam(p, prec));
}

BivariateSeries unit_cofactor(std::uint64_t seed, std::int64_t p, int cutoff, int prec) {
    std::vector<int> profile(cutoff + 1, prec);
    return random_series(seed, p, cutoff, profile, CofactorConstraint::Unit, gam(p, prec));
}

} // namespace

TEST_CASE("toroidal expansions") {
    int prec = 10;
    SUBCASE("functional-equation factor is w - 2T - T^2") {
        ToroidalFactor fe = ToroidalFactor::functional_equation(3, prec);
        BivariateSeries f = orbit_expand(fe, gam(3, prec), 4, std::vector<int>(5, prec));
        CHECK(f.coeff(1, 0).residue() == 1);
        CHECK((f.coeff(0, 1) + PadicInt(3, prec, 2)).is_zero());
        CHECK((f.coeff(0, 2) + PadicInt(3, prec, 1)).is_zero());
        CHECK(f.coeffs().size() == 3);
        CHECK(fe.is_functional_equation());
    }
    SUBCASE("diagonal factor is w - T") {
        ToroidalFactor diag(Orientation::PowerOnW, PadicInt(3, prec, 1), PadicInt(3, prec, 0),
                            RootOfUnity(3, 0, 0));
        BivariateSeries f = orbit_expand(diag, gam(3, prec), 3, std::vector<int>(4, prec));
        CHECK(f.coeff(1, 0).residue() == 1);
        CHECK((f.coeff(0, 1) + PadicInt(3, prec, 1)).is_zero());
        CHECK(f.coeffs().size() == 2);
    }
    SUBCASE("N = p expansion mod p is w^p - T") {
        ToroidalFactor fp(Orientation::PowerOnW, PadicInt(3, prec, 3), PadicInt(3, prec, 0),
                          RootOfUnity(3, 0, 0));
        BivariateSeries f = orbit_expand(fp, gam(3, prec), 4, std::vector<int>(5, prec));
        CHECK(f.coeff(3, 0).residue() % 3 == 1);
        CHECK(f.coeff(0, 1).residue() % 3 == 2);
        CHECK(f.coeff(1, 0).residue() % 3 == 0);
        CHECK(f.coeff(2, 0).residue() % 3 == 0);
        CHECK(f.coeff(0, 0).residue() == 0);
    }
    SUBCASE("orbit expansion with nontrivial xi stays rational and is divisible") {
        ToroidalFactor factor(Orientation::PowerOnW, PadicInt(3, prec, 5),
                              PadicInt(3, prec, 2), RootOfUnity(3, 1, 1));
        BivariateSeries orbit = orbit_expand(factor, gam(3, prec), 5, std::vector<int>(6, prec));
        CHECK(vanishes_on_translate(orbit, factor).zero_at_precision());
    }
    SUBCASE("cyclotomic expansion of a xi factor") {
        ToroidalFactor factor(Orientation::PowerOnW, PadicInt(3, prec, 1),
                              PadicInt(3, prec, 0), RootOfUnity(3, 1, 1));
        CycBivariate e = expand_toroidal(factor, gam(3, prec), 3,
                                         std::vector<Rational>(4, Rational(prec)));
        CHECK(e.level == 1);
        // constant term 1 - xi has valuation 1/2
        CHECK(valuation_cyc(e.coeffs.at({0, 0})) == Valuation::exact(Rational(1, 2)));
    }
}

TEST_CASE("vanishing on translates") {
    int prec = 10;
    ToroidalFactor fe = ToroidalFactor::functional_equation(3, prec);
    BivariateSeries fes = orbit_expand(fe, gam(3, prec), 4, std::vector<int>(5, prec));

    SUBCASE("the factor vanishes on its own translate") {
        CHECK(vanishes_on_translate(fes, fe).zero_at_precision());
    }
    SUBCASE("a unit series is certified nonvanishing") {
        BivariateSeries f = make_series(3, 3, prec, {{{0, 0}, 1}, {{1, 0}, 1}});
        VanishCheck c = vanishes_on_translate(f, fe);
        CHECK(!c.zero_at_precision());
        CHECK(c.witness_degree == 0);
        CHECK(c.witness_valuation == Rational(0));
    }
    SUBCASE("planted products vanish; perturbations are caught") {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            ToroidalFactor factor(seed % 2 ? Orientation::PowerOnW : Orientation::PowerOnT,
                                  PadicInt(3, prec, seed % 7), PadicInt(3, prec, seed % 5),
                                  RootOfUnity(3, 0, 0));
            BivariateSeries planted =
                ps_mul(orbit_expand(factor, gam(3, prec), 6, std::vector<int>(7, prec)),
                       unit_cofactor(seed, 3, 6, prec));
            CHECK(vanishes_on_translate(planted, factor).zero_at_precision());

            BivariateSeries one = make_series(3, 6, prec, {{{0, 0}, 1}});
            VanishCheck c = vanishes_on_translate(ps_add(planted, one), factor);
            CHECK(!c.zero_at_precision());
        }
    }
}

TEST_CASE("quadratic-coefficient exclusion") {
    int prec = 12;
    SUBCASE("the chi_29 fixture data fails condition 1") {
        BivariateSeries f = make_series(
            3, 8, prec,
            {{{2, 0}, 3 * 1243204}, {{1, 1}, 148430}, {{0, 2}, 28717}});
        QuadraticCheck c = exclude_by_quadratic(f);
        CHECK(!c.passed);
        CHECK(c.failed_condition == 1);
    }
    SUBCASE("the chi_41 fixture data passes") {
        BivariateSeries f = make_series(3, 8, prec,
                                        {{{2, 0}, 4540910},
                                         {{1, 1}, 9 * 1211},
                                         {{0, 2}, 9 * 5350},
                                         {{0, 3}, 1},
                                         {{0, 4}, 1}});
        CHECK(exclude_by_quadratic(f).passed);
    }
    SUBCASE("all three quadratics unital fails condition 1") {
        BivariateSeries f = make_series(3, 4, prec, {{{2, 0}, 1}, {{1, 1}, 1}, {{0, 2}, 1}});
        QuadraticCheck c = exclude_by_quadratic(f);
        CHECK(!c.passed);
        CHECK(c.failed_condition == 1);
    }
    SUBCASE("missing pure-power witnesses fail conditions 2 and 3") {
        BivariateSeries f2 = make_series(3, 4, prec,
                                         {{{2, 0}, 3}, {{1, 1}, 3}, {{0, 2}, 1}, {{0, 3}, 1}});
        QuadraticCheck c2 = exclude_by_quadratic(f2);
        CHECK(c2.failed_condition == 2);
        BivariateSeries f3 = make_series(3, 4, prec,
                                         {{{2, 0}, 1}, {{1, 1}, 3}, {{0, 2}, 3}});
        QuadraticCheck c3 = exclude_by_quadratic(f3);
        CHECK(c3.failed_condition == 3);
    }
    SUBCASE("preconditions are enforced") {
        BivariateSeries small = make_series(3, 2, prec, {{{2, 0}, 1}});
        CHECK_THROWS_AS(exclude_by_quadratic(small), Error);
        BivariateSeries not_in_square = make_series(3, 4, prec, {{{0, 0}, 1}, {{2, 0}, 1}});
        CHECK_THROWS_AS(exclude_by_quadratic(not_in_square), Error);
    }
    SUBCASE("soundness: factored series with certified preconditions never pass") {
        // factor with unit = 1 mod p times a cofactor in (w, T)
        for (int n = 1; n <= 6; ++n) {
            for (std::uint64_t seed = 1; seed <= 10; ++seed) {
                ToroidalFactor factor(seed % 2 ? Orientation::PowerOnW : Orientation::PowerOnT,
                                      PadicInt(3, prec, static_cast<std::uint64_t>(n)),
                                      PadicInt(3, prec, 0), RootOfUnity(3, 0, 0));
                BivariateSeries cof = unit_cofactor(seed, 3, 5, prec);
                // drop the cofactor's constant term so the product lands in (w,T)^2
                std::map<std::pair<int, int>, PadicInt> c = cof.coeffs();
                c.erase({0, 0});
                BivariateSeries cof0(3, 5, cof.profile(), std::move(c), cof.gamma());
                BivariateSeries f =
                    ps_mul(orbit_expand(factor, gam(3, prec), 5, std::vector<int>(6, prec)),
                           cof0);
                bool passed = false;
                try {
                    passed = exclude_by_quadratic(f).passed;
                } catch (const Error&) {
                    passed = false; // preconditions refused: no exclusion claimed
                }
                CHECK(!passed);
            }
        }
    }
}

TEST_CASE("minimal sweep level") {
    CHECK(min_level(2, 3) == 1);
    CHECK(min_level(1, 11) == 1);
    CHECK(min_level(0, 5) == 1);
    CHECK(min_level(3, 3) == 2);
    CHECK(min_level(7, 3) == 3);
    for (std::int64_t p : {3, 5, 11}) {
        for (int lambda = 0; lambda <= 40; ++lambda) {
            int m = min_level(lambda, p);
            long long cover = p - 1;
            for (int i = 1; i < m; ++i) cover *= p;
            CHECK(cover >= lambda);
            if (m > 1) {
                long long lower = cover / p;
                CHECK(lower < lambda);
            }
        }
    }
}

TEST_CASE("mod-p sweep") {
    int prec = 10;
    SUBCASE("unit series pass at every level") {
        BivariateSeries f = make_series(3, 4, prec, {{{0, 0}, 1}, {{1, 1}, 3}});
        CheckReport rep = modp_sweep(f, 1, false);
        CHECK(rep.outcome == SweepOutcome::AllBelowOne);
        CHECK(rep.entries.size() == 6); // 3 roots, both orientations
        for (const auto& e : rep.entries) {
            CHECK(e.trusted == (e.valuation.is_exact() && e.valuation.value < e.accuracy));
            CHECK(e.valuation.value == Rational(0));
        }
    }
    SUBCASE("planted factor with xi of order p is detected at level 1") {
        ToroidalFactor factor(Orientation::PowerOnW, PadicInt(3, prec, 2),
                              PadicInt(3, prec, 1), RootOfUnity(3, 1, 1));
        BivariateSeries f =
            ps_mul(orbit_expand(factor, gam(3, prec), 6, std::vector<int>(7, prec)),
                   unit_cofactor(99, 3, 6, prec));
        CheckReport rep = modp_sweep(f, 1, false);
        CHECK(rep.outcome == SweepOutcome::SomeAtLeastOne);
        // zeta = zeta_3, xi = zeta_3, N = 2: the point zeta' = xi^{-1} zeta^N
        // = zeta must flag (conjugate factors may flag further exponents)
        bool found = false;
        for (const auto& e : rep.entries) {
            if (e.orientation == Orientation::PowerOnW && e.trusted &&
                !(e.valuation.value < Rational(1)) && e.zeta_prime_exp == 1)
                found = true;
        }
        CHECK(found);
    }
    SUBCASE("functional-equation variant cancels the denominator") {
        ToroidalFactor fe = ToroidalFactor::functional_equation(3, prec);
        BivariateSeries f =
            ps_mul(orbit_expand(fe, gam(3, prec), 6, std::vector<int>(7, prec)),
                   unit_cofactor(7, 3, 6, prec));
        CheckReport rep = modp_sweep(f, 1, true);
        CHECK(rep.fe_divided);
        CHECK(rep.outcome == SweepOutcome::AllBelowOne);
        for (const auto& e : rep.entries) {
            REQUIRE(e.denominator_valuation.has_value());
            CHECK(e.denominator_valuation->is_exact());
            CHECK(e.valuation.value == Rational(0));
        }
    }
    SUBCASE("outcome is Galois independent at (3,2)") {
        ToroidalFactor factor(Orientation::PowerOnT, PadicInt(3, prec, 4),
                              PadicInt(3, prec, 1), RootOfUnity(3, 2, 1));
        BivariateSeries planted =
            ps_mul(orbit_expand(factor, gam(3, prec), 5, std::vector<int>(6, prec)),
                   unit_cofactor(5, 3, 5, prec));
        BivariateSeries unit = make_series(3, 5, prec, {{{0, 0}, 2}, {{1, 0}, 9}});
        for (const BivariateSeries* f : {&planted, &unit}) {
            SweepOutcome base = modp_sweep_with_generator(*f, 2, false, 1).outcome;
            for (std::int64_t a : {2, 4, 5, 7, 8})
                CHECK(modp_sweep_with_generator(*f, 2, false, a).outcome == base);
        }
    }
    SUBCASE("parallel sweeps match serial ones") {
        BivariateSeries f =
            ps_mul(orbit_expand(ToroidalFactor::functional_equation(3, prec), gam(3, prec), 5,
                                std::vector<int>(6, prec)),
                   unit_cofactor(11, 3, 5, prec));
        CheckReport serial = modp_sweep(f, 2, true, 1);
        CheckReport parallel = modp_sweep(f, 2, true, 4);
        REQUIRE(serial.entries.size() == parallel.entries.size());
        for (std::size_t i = 0; i < serial.entries.size(); ++i) {
            CHECK(serial.entries[i].valuation == parallel.entries[i].valuation);
            CHECK(serial.entries[i].trusted == parallel.entries[i].trusted);
        }
        CHECK(serial.outcome == parallel.outcome);
    }
    SUBCASE("invalid arguments") {
        BivariateSeries f = make_series(3, 2, prec, {{{0, 0}, 1}});
        CHECK_THROWS_AS(modp_sweep(f, 0, false), Error);
        CHECK_THROWS_AS(modp_sweep_with_generator(f, 1, false, 3), Error);
    }
}

TEST_CASE("branch pipeline") {
    int prec = 10;
    SUBCASE("unit branches are recognized immediately") {
        BivariateSeries f = make_series(3, 4, prec, {{{0, 0}, 2}, {{2, 0}, 5}});
        BranchMeta meta(3, 5, 0, 1, 0, gam(3, prec));
        PipelineResult r = branch_pipeline(f, meta, 3);
        CHECK(r.verdict.kind == BranchVerdict::Kind::UnitBranch);
        CHECK(r.audit.empty());
    }
    SUBCASE("functional-equation branch: forced factor then exclusion at level 1") {
        ToroidalFactor fe = ToroidalFactor::functional_equation(5, prec);
        BivariateSeries f =
            ps_mul(orbit_expand(fe, gam(5, prec), 6, std::vector<int>(7, prec)),
                   unit_cofactor(21, 5, 6, prec));
        BranchMeta meta(5, 3, 0, 2, 0, gam(5, prec)); // i = 2 is self-dual for r = 0
        PipelineResult r = branch_pipeline(f, meta, 3);
        CHECK(r.fe_divided);
        CHECK(r.verdict.kind == BranchVerdict::Kind::ForcedFEThenExcluded);
        CHECK(r.verdict.level == 1);
        CHECK(r.lambda == 1);
    }
    SUBCASE("quadratic exclusion path") {
        BivariateSeries f = make_series(3, 4, prec,
                                        {{{2, 0}, 4540910 % 59049},
                                         {{1, 1}, 9 * 1211},
                                         {{0, 2}, 9 * 5350 % 59049},
                                         {{0, 3}, 1},
                                         {{0, 4}, 1}});
        BranchMeta meta(3, 5, 0, 0, 41, gam(3, prec));
        PipelineResult r = branch_pipeline(f, meta, 3);
        CHECK(r.verdict.kind == BranchVerdict::Kind::ExcludedByQuadratic);
    }
    SUBCASE("planted factors never produce an exclusion") {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            ToroidalFactor factor(seed % 2 ? Orientation::PowerOnW : Orientation::PowerOnT,
                                  PadicInt(3, prec, 1 + seed % 5), PadicInt(3, prec, 1),
                                  RootOfUnity(3, seed % 3 == 0 ? 1 : 0, 1));
            BivariateSeries f =
                ps_mul(orbit_expand(factor, gam(3, prec), 6, std::vector<int>(7, prec)),
                       unit_cofactor(seed + 500, 3, 6, prec));
            BranchMeta meta(3, 5, 0, 0, 0, gam(3, prec));
            PipelineResult r = branch_pipeline(f, meta, 2);
            CHECK(!r.verdict.excluded());
        }
    }
    SUBCASE("uncertifiable mu folds into inconclusive") {
        // every coefficient divisible by p: mu cannot be certified zero
        BivariateSeries f = make_series(3, 4, prec, {{{0, 2}, 3}, {{1, 1}, 6}});
        BranchMeta meta(3, 5, 0, 0, 0, gam(3, prec));
        PipelineResult r = branch_pipeline(f, meta, 2);
        CHECK(r.verdict.kind == BranchVerdict::Kind::Inconclusive);
        CHECK(r.verdict.reason == "mu_not_certified_zero");
    }
}
