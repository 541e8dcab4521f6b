#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hodge/oracle.hpp"
#include "hodge/planner.hpp"
#include "hodge/verifier.hpp"
#include "json.hpp"

#include <stdexcept>

using namespace hodge;

namespace {

NodePtr atom_node(AtomSpec spec, const std::string& path) {
    PlanNode n;
    n.kind = NodeKind::Atom;
    n.atom_spec = spec;
    n.justification = {"atom", ""};
    n.path = path;
    return make_node(std::move(n));
}

NodePtr pts_node(NodePtr a, long long count, const std::string& path) {
    PlanNode n;
    n.kind = NodeKind::BlowupPoints;
    n.count = count;
    n.children = {std::move(a)};
    n.justification = {"test", ""};
    n.path = path;
    return make_node(std::move(n));
}

NodePtr asym_node(NodePtr a, long long r, long long b, long long c, const std::string& path) {
    PlanNode n;
    n.kind = NodeKind::AsymmetricBlowup;
    n.r = r;
    n.b = b;
    n.c = c;
    n.children = {std::move(a)};
    n.justification = {"test", ""};
    n.path = path;
    return make_node(std::move(n));
}

const EntryCheck& entry_at(const VerificationReport& rep, int p, int q) {
    for (const auto& e : rep.entries)
        if (e.p == p && e.q == q) return e;
    throw std::logic_error("entry not in report");
}

void check_audit_names(const VerificationReport& rep) {
    REQUIRE(rep.audits.size() == 4);
    CHECK(rep.audits[0].name == "corner-is-one");
    CHECK(rep.audits[1].name == "duality-shared");
    CHECK(rep.audits[2].name == "blowup-border-fixed");
    CHECK(rep.audits[3].name == "increment-bookkeeping");
}

}  // namespace

TEST_CASE("oracle diamonds of the classical spaces") {
    auto p2xp1 =
        OracleExpr::product(OracleExpr::projective(2), OracleExpr::projective(1));
    OracleGrid g = oracle_diamond(p2xp1);
    REQUIRE(g.size() == 4);
    for (int p = 0; p <= 3; ++p)
        for (int q = 0; q <= 3; ++q) {
            long long want = 0;
            if (p == q) want = (p == 0 || p == 3) ? 1 : 2;
            CHECK(g[p][q] == want);
        }

    OracleGrid cube = oracle_diamond(OracleExpr::power(OracleExpr::elliptic(), 3));
    CHECK(cube[1][0] == 3);
    CHECK(cube[1][1] == 9);
    CHECK(cube[3][0] == 1);

    OracleGrid del_pezzo =
        oracle_diamond(OracleExpr::blowup_points(OracleExpr::projective(2), 3));
    CHECK(del_pezzo[1][1] == 4);
    CHECK(del_pezzo[1][0] == 0);

    CHECK_THROWS_AS(oracle_diamond(OracleExpr::blowup_points(OracleExpr::projective(1), 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(OracleExpr::power(OracleExpr::elliptic(), -1), std::invalid_argument);
    CHECK_THROWS_AS(OracleExpr::projective(-2), std::invalid_argument);
    CHECK_THROWS_AS(OracleExpr::blowup_points(OracleExpr::projective(3), -1),
                    std::invalid_argument);
}

TEST_CASE("the integer and symbolic paths agree on the classical families") {
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; b <= 4; ++b) {
            CAPTURE(a);
            CAPTURE(b);
            CHECK(oracle_compare(
                OracleExpr::product(OracleExpr::projective(a), OracleExpr::projective(b))));
        }
    for (int k = 0; k <= 3; ++k) {
        CAPTURE(k);
        CHECK(oracle_compare(OracleExpr::power(OracleExpr::elliptic(), k)));
    }
    for (int n = 2; n <= 5; ++n)
        for (int count = 0; count <= 3; ++count) {
            CAPTURE(n);
            CAPTURE(count);
            CHECK(oracle_compare(
                OracleExpr::blowup_points(OracleExpr::projective(n), count)));
        }
}

TEST_CASE("a full solver plan verifies and every audit passes") {
    ResidueTargets t(2, 3);
    t.set(1, 0, 1);
    t.set(0, 1, 0);
    t.set(2, 0, 1);
    t.set(0, 2, 1);
    t.set(3, 0, 1);
    t.set(0, 3, 1);
    t.set(1, 1, 1);
    t.set(2, 1, 1);
    t.set(1, 2, 1);

    Assignment sigma = Assignment::seeded(11, 7);
    PlannerContext ctx(2, sigma);
    Plan plan = solve_full(3, t, ctx);

    VerificationReport rep = verify(plan, t, sigma);
    CHECK(rep.pass());
    REQUIRE(rep.entries.size() == t.entries().size());
    for (const auto& e : rep.entries) {
        CAPTURE(e.p);
        CAPTURE(e.q);
        CHECK(e.matches());
    }
    check_audit_names(rep);
    for (const auto& a : rep.audits) {
        CHECK(a.pass);
        CHECK(a.detail.rfind("nodes checked:", 0) == 0);
    }

    // Verification is pure: a second run yields the identical report.
    CHECK(verify(plan, t, sigma).to_json() == rep.to_json());
}

TEST_CASE("certified entries hold under fresh assignments") {
    ResidueTargets t(3, 3);
    t.set(1, 0, 2);
    t.set(0, 1, 1);
    t.set(2, 0, 0);
    t.set(0, 2, 2);
    t.set(3, 0, 1);
    t.set(1, 1, 2);
    t.set(2, 1, 1);

    Assignment sigma = Assignment::seeded(42, 9);
    PlannerContext ctx(3, sigma);
    Plan plan = solve_full(3, t, ctx);

    VerificationReport first = verify(plan, t, sigma);
    REQUIRE(first.pass());

    for (int trial = 0; trial < 100; ++trial) {
        VerificationReport rep = verify(plan, t, Assignment::seeded(1000 + trial, 10));
        REQUIRE(rep.entries.size() == first.entries.size());
        for (size_t i = 0; i < rep.entries.size(); ++i) {
            if (!first.entries[i].certified) continue;
            CAPTURE(trial);
            CAPTURE(rep.entries[i].p);
            CAPTURE(rep.entries[i].q);
            CHECK(rep.entries[i].certified);
            CHECK(rep.entries[i].matches());
        }
    }
}

TEST_CASE("outer plans verify under assignments never seen by the solver") {
    ResidueTargets t(3, 3);
    t.set(1, 0, 2);
    t.set(0, 1, 1);
    t.set(2, 0, 0);
    t.set(0, 2, 2);
    t.set(3, 0, 1);
    t.set(0, 3, 1);

    PlannerContext ctx(3, Assignment::seeded(7, 5));
    Plan plan = solve_outer(3, t, ctx);

    for (long long seed : {101, 202, 303}) {
        VerificationReport rep = verify(plan, t, Assignment::seeded(seed, 10));
        CAPTURE(seed);
        CHECK(rep.pass());
        for (const auto& e : rep.entries) CHECK(e.certified);
    }
}

TEST_CASE("verification spots a tampered plan") {
    ResidueTargets t(3, 3);
    t.set(1, 1, 0);
    Plan plan{3, pts_node(atom_node(AtomSpec::projective_space(3), "a0"), 2, "a1")};
    Assignment sigma = Assignment::seeded(1, 5);
    CHECK(verify(plan, t, sigma).pass());

    std::string bytes = serialize(plan);
    auto at = bytes.find("\"count\": 2");
    REQUIRE(at != std::string::npos);
    bytes.replace(at, 10, "\"count\": 1");
    Plan tampered = parse_plan(bytes);

    VerificationReport rep = verify(tampered, t, sigma);
    CHECK_FALSE(rep.pass());
    const EntryCheck& h11 = entry_at(rep, 1, 1);
    CHECK(h11.expected == 0);
    CHECK(h11.got == 2);
    CHECK(h11.certified);
    // The tampered plan is still internally coherent; only the targets fail.
    for (const auto& a : rep.audits) CHECK(a.pass);
}

TEST_CASE("verification spots altered correction residues") {
    ResidueTargets t(2, 3);
    t.set(2, 1, 1);
    Plan plan{2, asym_node(atom_node(AtomSpec::projective_space(3), "a0"), 2, 1, 1, "a1")};
    Assignment sigma = Assignment::seeded(2, 5);
    CHECK(verify(plan, t, sigma).pass());

    std::string bytes = serialize(plan);
    for (const char* key : {"\"b\": 1", "\"c\": 1"}) {
        auto at = bytes.find(key);
        REQUIRE(at != std::string::npos);
        bytes.replace(at + 5, 1, "0");
    }
    Plan tampered = parse_plan(bytes);

    VerificationReport rep = verify(tampered, t, sigma);
    CHECK_FALSE(rep.pass());
    CHECK(entry_at(rep, 2, 1).got == 0);
    for (const auto& a : rep.audits) CHECK(a.pass);
}

TEST_CASE("report fields serialize the way tools expect") {
    ResidueTargets t(2, 2);
    t.set(1, 1, 1);
    Plan plan{2, atom_node(AtomSpec::projective_space(2), "a0")};
    VerificationReport rep = verify(plan, t, Assignment::seeded(3, 5));

    auto j = nlohmann::json::parse(rep.to_json());
    CHECK(j["pass"] == true);
    REQUIRE(j["entries"].size() == 1);
    CHECK(j["entries"][0]["p"] == 1);
    CHECK(j["entries"][0]["q"] == 1);
    CHECK(j["entries"][0]["expected"] == 1);
    CHECK(j["entries"][0]["got"] == 1);
    CHECK(j["entries"][0]["certified"] == true);
    REQUIRE(j["audits"].size() == 4);
    CHECK(j["audits"][0]["name"] == "corner-is-one");
    CHECK(j["audits"][0]["pass"] == true);
    CHECK(j["audits"][0]["detail"] == "nodes checked: 1");
}

TEST_CASE("mismatched inputs are rejected before any evaluation") {
    Plan plan{2, atom_node(AtomSpec::projective_space(2), "a0")};
    Assignment sigma = Assignment::seeded(4, 5);

    ResidueTargets wrong_dim(2, 3);
    CHECK_THROWS_AS(verify(plan, wrong_dim, sigma), std::invalid_argument);

    ResidueTargets wrong_mod(3, 2);
    CHECK_THROWS_AS(verify(plan, wrong_mod, sigma), std::invalid_argument);

    Plan broken{2, nullptr};
    ResidueTargets t(2, 2);
    CHECK_THROWS_AS(verify(broken, t, sigma), FormatError);
}
