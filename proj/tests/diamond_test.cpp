#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hodge/diamond.hpp"

#include <random>

using namespace hodge;

namespace {

SymPoly u(const char* path) { return SymPoly::unknown(UnknownId::intern(path)); }

HodgeDiamond p2() {
    return make_diamond(2, {{{0, 0}, SymPoly(1)}, {{1, 1}, SymPoly(1)}, {{2, 2}, SymPoly(1)}});
}

}  // namespace

TEST_CASE("pair helpers") {
    CHECK(dual_of(3, PQ{1, 0}) == PQ{2, 3});
    CHECK(pair_rep(3, PQ{2, 3}) == PQ{1, 0});
    CHECK(pair_rep(3, PQ{1, 0}) == PQ{1, 0});
    CHECK(pair_rep(2, PQ{1, 1}) == PQ{1, 1});  // self-dual
}

TEST_CASE("make_diamond fills duals and defaults") {
    HodgeDiamond d = p2();
    CHECK(d.n() == 2);
    CHECK(d.entry(0, 0) == SymPoly(1));
    CHECK(d.entry(1, 1) == SymPoly(1));
    CHECK(d.entry(1, 0).is_zero());
    CHECK(d.entry(0, 2).is_zero());

    // Duality fill: supplying h^{1,0} and h^{0,1} forces h^{1,2} and h^{2,1}.
    HodgeDiamond s = make_diamond(2, {{{1, 0}, SymPoly(0)}, {{0, 1}, SymPoly(1)}});
    CHECK(s.entry(1, 2).is_zero());
    CHECK(s.entry(2, 1) == SymPoly(1));
    CHECK(s.entry(0, 0) == SymPoly(1));  // defaulted
    CHECK(s.cell(0, 1) == s.cell(2, 1));  // dual positions share a cell

    // An elliptic curve: all four entries 1.
    HodgeDiamond e = make_diamond(1, {{{0, 0}, SymPoly(1)},
                                      {{1, 0}, SymPoly(1)},
                                      {{0, 1}, SymPoly(1)},
                                      {{1, 1}, SymPoly(1)}});
    CHECK(e.entry(1, 0) == SymPoly(1));
    CHECK(e.entry(0, 1) == SymPoly(1));
}

TEST_CASE("make_diamond rejects bad input") {
    CHECK_THROWS_AS(make_diamond(2, {{{0, 0}, SymPoly(2)}}), FormatError);
    CHECK_THROWS_AS(make_diamond(2, {{{1, 0}, SymPoly(0)}, {{1, 2}, SymPoly(1)}}), FormatError);
    CHECK_THROWS_AS(make_diamond(1, {{{2, 0}, SymPoly(1)}}), FormatError);
    // Equal values on both halves of a dual pair are fine.
    CHECK_NOTHROW(make_diamond(2, {{{1, 0}, u("v")}, {{1, 2}, u("v")}}));
}

TEST_CASE("random generators always satisfy both invariants") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        int n = static_cast<int>(rng() % 5);
        std::map<PQ, SymPoly> gen;
        for (int p = 0; p <= n; ++p)
            for (int q = 0; q <= n; ++q) {
                if (pair_rep(n, PQ{p, q}) != PQ{p, q}) continue;
                if (p == 0 && q == 0) continue;
                if (rng() % 2) continue;  // leave some entries defaulted
                gen.emplace(PQ{p, q},
                            SymPoly(static_cast<long long>(rng() % 7)) +
                                Int(rng() % 3) * u(("t" + std::to_string(rng() % 9)).c_str()));
            }
        HodgeDiamond d = make_diamond(n, gen);
        CHECK(d.entry(0, 0) == SymPoly(1));
        for (int p = 0; p <= n; ++p)
            for (int q = 0; q <= n; ++q) CHECK(d.entry(p, q) == d.entry(n - p, n - q));
    }
}

TEST_CASE("deferred cells run once and may be shared") {
    int runs = 0;
    CellPtr c = PolyCell::defer([&runs] {
        ++runs;
        return SymPoly(7);
    });
    std::vector<CellPtr> cells{PolyCell::pure(SymPoly(1)), c, c, PolyCell::pure(SymPoly(1))};
    HodgeDiamond d = HodgeDiamond::from_cells(1, std::move(cells));
    CHECK(runs == 0);
    CHECK(d.entry(0, 1) == SymPoly(7));
    CHECK(d.entry(1, 0) == SymPoly(7));
    CHECK(runs == 1);
}

TEST_CASE("diamond_equals_mod sees through m-divisible symbolic noise") {
    HodgeDiamond base = p2();
    HodgeDiamond shifted = make_diamond(
        2, {{{1, 1}, SymPoly(1) + Int(2) * u("noise")}, {{2, 2}, SymPoly(1)}});
    CHECK(diamond_equals_mod(base, shifted, 2));
    CHECK_FALSE(diamond_equals_mod(base, shifted, 3));
    CHECK(diamond_equals_mod(base, base, 5));

    // One extra point blown up in a surface bumps h^{1,1} by 1: visible mod 2.
    HodgeDiamond one_point = make_diamond(2, {{{1, 1}, SymPoly(2)}, {{2, 2}, SymPoly(1)}});
    CHECK_FALSE(diamond_equals_mod(base, one_point, 2));
    // Blowing up m points bumps it by m: invisible mod m.
    HodgeDiamond five_points = make_diamond(2, {{{1, 1}, SymPoly(6)}, {{2, 2}, SymPoly(1)}});
    CHECK(diamond_equals_mod(base, five_points, 5));
    CHECK_FALSE(diamond_equals_mod(base, five_points, 4));

    CHECK_THROWS_AS(diamond_equals_mod(base, HodgeDiamond(), 2), std::invalid_argument);
}

TEST_CASE("renderers produce the fixed layouts") {
    HodgeDiamond p1 = make_diamond(1, {{{1, 1}, SymPoly(1)}});
    CHECK(render_grid(p1) == "1\t0\n0\t1\n");
    CHECK(render_rotated(p1) == " 1\n0  0\n 1\n");
}

TEST_CASE("index sets") {
    CHECK(ResidueTargets::j_set(1) == std::vector<PQ>{PQ{1, 0}, PQ{0, 1}});
    CHECK(ResidueTargets::j_set(3) ==
          std::vector<PQ>{PQ{1, 0}, PQ{2, 0}, PQ{3, 0}, PQ{0, 1}, PQ{0, 2}, PQ{0, 3}});
    CHECK(ResidueTargets::i_set(1).empty());
    CHECK(ResidueTargets::i_set(2) == std::vector<PQ>{PQ{1, 1}});
    CHECK(ResidueTargets::i_set(3) == std::vector<PQ>{PQ{1, 1}, PQ{1, 2}, PQ{2, 1}});
    CHECK(ResidueTargets::i_set(4) ==
          std::vector<PQ>{PQ{1, 1}, PQ{1, 2}, PQ{1, 3}, PQ{2, 1}, PQ{3, 1}});
}

TEST_CASE("residue targets validate their entries") {
    ResidueTargets t(3, 2);
    t.set(1, 0, 2);
    t.set(0, 1, 2);
    CHECK(t.at(1, 0) == 2);
    CHECK_FALSE(t.contains(1, 2));  // duals are not auto-filled

    CHECK_THROWS_AS(t.set(1, 0, 1), FormatError);   // conflicts with existing value
    CHECK_THROWS_AS(t.set(1, 2, 0), FormatError);   // conflicts with dual of (1,0)
    CHECK_NOTHROW(t.set(1, 2, 2));                  // matching dual value is fine
    CHECK_THROWS_AS(t.set(0, 0, 0), FormatError);
    CHECK_NOTHROW(t.set(0, 0, 1));
    CHECK_THROWS_AS(t.set(2, 2, 0), FormatError);  // dual to the pinned corner
    CHECK_NOTHROW(t.set(2, 2, 1));
    CHECK_THROWS_AS(t.set(3, 0, 1), FormatError);
    CHECK_THROWS_AS(t.set(1, 1, 3), FormatError);
    CHECK_THROWS_AS(t.set(1, 1, -1), FormatError);
    CHECK_THROWS_AS(ResidueTargets(1, 2), FormatError);
    CHECK_THROWS_AS(ResidueTargets(2, -1), FormatError);
}

TEST_CASE("targets JSON round trip") {
    ResidueTargets t(3, 2);
    t.set(1, 0, 2);
    t.set(0, 1, 2);
    CHECK(t.to_json() == R"({"m":3,"n":2,"entries":{"0,1":2,"1,0":2}})");

    ResidueTargets back = ResidueTargets::from_json(t.to_json());
    CHECK(back.m() == 3);
    CHECK(back.n() == 2);
    CHECK(back.entries() == t.entries());

    CHECK_THROWS_WITH_AS(ResidueTargets::from_json(R"({"m":2,"n":2,"entries":{"a,b":1}})"),
                         doctest::Contains("\"a,b\""), FormatError);
    CHECK_THROWS_WITH_AS(ResidueTargets::from_json(R"({"m":2,"n":2,"entries":{"1,0":9}})"),
                         doctest::Contains("\"1,0\""), FormatError);
    CHECK_THROWS_AS(ResidueTargets::from_json("not json"), FormatError);
    CHECK_THROWS_AS(ResidueTargets::from_json(R"({"n":2})"), FormatError);
}

TEST_CASE("check_targets reports residues and certificates") {
    ResidueTargets t(3, 2);
    t.set(1, 1, 1);
    VerificationReport r = check_targets(p2(), t, Assignment());
    REQUIRE(r.entries.size() == 1);
    CHECK(r.pass());
    CHECK(r.entries[0].certified);
    CHECK(r.entries[0].got == 1);

    // An unknown entry evaluates per assignment and cannot be certified.
    HodgeDiamond s = make_diamond(2, {{{1, 1}, u("h11")}, {{2, 2}, SymPoly(1)}});
    ResidueTargets t2(2, 2);
    t2.set(1, 1, 0);
    Assignment sigma;
    sigma.set(UnknownId::intern("h11"), 1);
    VerificationReport r2 = check_targets(s, t2, sigma);
    CHECK_FALSE(r2.pass());
    CHECK(r2.entries[0].got == 1);
    CHECK_FALSE(r2.entries[0].certified);

    CHECK(r2.to_json() ==
          "{\n  \"pass\": false,\n  \"entries\": [\n    {\n      \"p\": 1,\n      \"q\": 1,\n"
          "      \"expected\": 0,\n      \"got\": 1,\n      \"certified\": false\n    }\n  ],\n"
          "  \"audits\": []\n}");

    CHECK_THROWS_AS(check_targets(s, ResidueTargets(2, 3), sigma), std::invalid_argument);
}
