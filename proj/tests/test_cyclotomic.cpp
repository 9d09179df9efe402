#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cyclotomic.hpp"
#include "oracles.hpp"
#include "synth.hpp"

using namespace torex;

namespace {

CycElt random_element(SplitMix64& rng, std::int64_t p, int level, int prec) {
    int e = ramification_degree(p, level);
    std::uint64_t mod = pow_u64_checked(p, prec);
    std::vector<PadicInt> v;
    v.reserve(e);
    for (int i = 0; i < e; ++i) v.emplace_back(p, prec, rng.next() % mod);
    return CycElt(p, level, std::move(v));
}

} // namespace

TEST_CASE("ramification degrees and construction") {
    CHECK(ramification_degree(3, 0) == 1);
    CHECK(ramification_degree(3, 1) == 2);
    CHECK(ramification_degree(3, 3) == 18);
    CHECK(ramification_degree(11, 2) == 110);
    CHECK_THROWS_AS(CycElt(3, 1, {PadicInt(3, 4, 1)}), Error); // wrong length
}

TEST_CASE("eisenstein polynomial shape") {
    auto e1 = eisenstein_coefficients(3, 1, 6);
    REQUIRE(e1.size() == 3);
    CHECK(e1[0] == 3);
    CHECK(e1[1] == 3);
    CHECK(e1[2] == 1);
    // constant term of E_m is always p (total ramification)
    for (int m : {1, 2, 3}) {
        auto em = eisenstein_coefficients(3, m, 6);
        CHECK(em[0] == 3);
        CHECK(em.back() == 1);
    }
}

TEST_CASE("additive identity") {
    CycElt pi = CycElt::uniformizer(3, 1, 6);
    CycElt sum = pi + CycElt::zero(3, 1, 6);
    CHECK(sum.coeffs()[0].residue() == 0);
    CHECK(sum.coeffs()[1].residue() == 1);
}

TEST_CASE("torsion order is exact") {
    for (auto [p, m] : std::vector<std::pair<std::int64_t, int>>{{3, 1}, {3, 2}, {5, 1}, {11, 1}}) {
        int prec = 8;
        CycElt one = CycElt::constant(PadicInt(p, prec, 1), m);
        CycElt z = CycElt::uniformizer(p, m, prec) + one;
        std::uint64_t order = 1;
        for (int i = 0; i < m; ++i) order *= static_cast<std::uint64_t>(p);
        CycElt zp = z.pow(order) - one;
        CHECK(zp.is_zero_at_precision());
        for (const auto& c : zp.coeffs()) CHECK(c.precision() == prec);
    }
}

TEST_CASE("multiplication matches the naive polynomial oracle") {
    SplitMix64 rng(5);
    for (auto [p, m] : std::vector<std::pair<std::int64_t, int>>{{3, 2}, {5, 1}}) {
        int prec = 6;
        for (int trial = 0; trial < 50; ++trial) {
            CycElt a = random_element(rng, p, m, prec);
            CycElt b = random_element(rng, p, m, prec);
            CycElt prod = a * b;
            std::vector<std::uint64_t> ar, br;
            for (const auto& c : a.coeffs()) ar.push_back(c.residue());
            for (const auto& c : b.coeffs()) br.push_back(c.residue());
            auto expect = torex_test::naive_cyc_mul(ar, br, p, m, prec);
            for (std::size_t i = 0; i < expect.size(); ++i)
                CHECK(prod.coeffs()[i].residue() == expect[i]);
        }
    }
}

TEST_CASE("uniformizer valuations across the grid") {
    for (std::int64_t p : {3, 5, 11}) {
        for (int m : {1, 2, 3}) {
            int prec = 6;
            CycElt one = CycElt::constant(PadicInt(p, prec, 1), m);
            CycElt pi = as_element(RootOfUnity(p, m, 1), m, prec) - one;
            Valuation v = valuation_cyc(pi);
            REQUIRE(v.is_exact());
            CHECK(v.value == Rational(1, ramification_degree(p, m)));
        }
    }
    CycElt c = CycElt::constant(PadicInt(3, 6, 3), 2);
    CHECK(valuation_cyc(c) == Valuation::exact(Rational(1)));
}

TEST_CASE("valuation 1/18 at the third layer over p = 3") {
    CycElt one = CycElt::constant(PadicInt(3, 6, 1), 3);
    CycElt pi = as_element(RootOfUnity(3, 3, 1), 3, 6) - one;
    CHECK(valuation_cyc(pi) == Valuation::exact(Rational(1, 18)));
}

TEST_CASE("valuation agrees with the resultant norm oracle") {
    SplitMix64 rng(9);
    for (auto [p, m] : std::vector<std::pair<std::int64_t, int>>{
             {3, 1}, {3, 2}, {3, 3}, {5, 1}, {5, 2}, {11, 1}}) {
        int prec = 8;
        int done = 0;
        while (done < 100) {
            CycElt a = random_element(rng, p, m, prec);
            std::vector<std::uint64_t> coords;
            for (const auto& c : a.coeffs()) coords.push_back(c.residue());
            auto oracle = torex_test::norm_valuation_oracle(coords, p, m, prec);
            Valuation v = valuation_cyc(a);
            if (!oracle || !v.is_exact()) continue;
            CHECK(v.value == *oracle);
            ++done;
        }
    }
}

TEST_CASE("exact valuations are additive under multiplication") {
    SplitMix64 rng(13);
    int prec = 8;
    int checked = 0;
    while (checked < 100) {
        CycElt a = random_element(rng, 3, 2, prec);
        CycElt b = random_element(rng, 3, 2, prec);
        Valuation va = valuation_cyc(a), vb = valuation_cyc(b);
        if (!va.is_exact() || !vb.is_exact()) continue;
        if (!(va.value + vb.value < Rational(prec - 1))) continue;
        Valuation vp = valuation_cyc(a * b);
        REQUIRE(vp.is_exact());
        CHECK(vp.value == va.value + vb.value);
        ++checked;
    }
}

TEST_CASE("raise_level") {
    int prec = 6;
    CycElt pi1 = CycElt::uniformizer(3, 1, prec);

    SUBCASE("identity at the same level") {
        CycElt same = raise_level(pi1, 1);
        CHECK((same - pi1).is_zero_at_precision());
    }
    SUBCASE("lowering is rejected") {
        CycElt z2 = CycElt::zero(3, 2, prec);
        CHECK_THROWS_AS(raise_level(z2, 1), Error);
    }
    SUBCASE("zeta_3 - 1 keeps valuation 1/2 at level 2") {
        CycElt raised = raise_level(pi1, 2);
        CHECK(valuation_cyc(raised) == Valuation::exact(Rational(1, 2)));
    }
    SUBCASE("valuations preserved on random elements") {
        SplitMix64 rng(17);
        int done = 0;
        while (done < 100) {
            CycElt a = random_element(rng, 3, 1, prec);
            Valuation before = valuation_cyc(a);
            if (!before.is_exact()) continue;
            Valuation after = valuation_cyc(raise_level(a, 2));
            REQUIRE(after.is_exact());
            CHECK(after.value == before.value);
            ++done;
        }
    }
}

TEST_CASE("as_element") {
    int prec = 6;
    SUBCASE("trivial root is the identity") {
        CycElt r = as_element(RootOfUnity(3, 2, 0), 2, prec);
        CHECK(r.coeffs()[0].residue() == 1);
        CHECK(r.is_rational_at_precision());
    }
    SUBCASE("primitive root at its own level") {
        CycElt r = as_element(RootOfUnity(3, 1, 1), 1, prec);
        CHECK(r.coeffs()[0].residue() == 1);
        CHECK(r.coeffs()[1].residue() == 1); // 1 + pi
    }
    SUBCASE("embedded cube root satisfies its minimal polynomial") {
        CycElt z = as_element(RootOfUnity(3, 1, 1), 2, prec);
        CycElt one = CycElt::constant(PadicInt(3, prec, 1), 2);
        CycElt phi = z * z + z + one;
        CHECK(phi.is_zero_at_precision());
    }
    SUBCASE("level too small") {
        CHECK_THROWS_AS(as_element(RootOfUnity(3, 2, 1), 1, prec), Error);
    }
}

TEST_CASE("zero and mixed-precision valuations degrade to bounds") {
    CHECK(valuation_cyc(CycElt::zero(3, 1, 5)) == Valuation::at_least(Rational(5)));

    // exact candidate below the bound stays exact
    CycElt a(3, 1, {PadicInt(3, 1, 0), PadicInt(3, 9, 1)});
    CHECK(valuation_cyc(a) == Valuation::exact(Rational(1, 2)));

    // exact candidate above the bound collapses to the bound
    CycElt b(3, 1, {PadicInt(3, 1, 0), PadicInt(3, 9, 3)});
    CHECK(valuation_cyc(b) == Valuation::at_least(Rational(1)));
}

TEST_CASE("roots of unity bookkeeping") {
    RootOfUnity r(3, 2, 3);
    CHECK(r.reduced_level() == 1);
    CHECK(!r.is_primitive());
    CHECK(RootOfUnity(3, 2, 2).is_primitive());
    CHECK(RootOfUnity(3, 2, -1).exponent == 8);
    CHECK(r.inverse().exponent == 6);
    CHECK(RootOfUnity(3, 0, 0).is_trivial());
}
