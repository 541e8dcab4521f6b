#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hodge/cli.hpp"
#include "hodge/plan.hpp"
#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hodge;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "hodgeplan-cli-test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string path_of(const std::string& name) { return (scratch() / name).string(); }

void put(const std::string& name, const std::string& text) {
    std::ofstream f(path_of(name), std::ios::binary);
    f << text;
    REQUIRE(f.good());
}

std::string slurp(const std::string& name) {
    std::ifstream f(path_of(name), std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

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

}  // namespace

TEST_CASE("solve writes a plan that verifies end to end") {
    put("t.json", R"({"m":2,"n":2,"entries":{"1,0":0,"0,1":1,"2,0":1,"1,1":0}})");
    CliResult solved = run({"solve", "--targets", path_of("t.json"), "--out", path_of("plan.json"),
                            "--n", "2", "--m", "2"});
    CHECK(solved.code == 0);
    CHECK(solved.err.empty());
    CHECK(contains(solved.out, "plan written to"));
    CHECK(contains(solved.out, "PASS"));

    // The written file is a plan our own parser accepts.
    CHECK_NOTHROW(parse_plan(slurp("plan.json")));

    CliResult verified =
        run({"verify", "--plan", path_of("plan.json"), "--targets", path_of("t.json")});
    CHECK(verified.code == 0);
    CHECK(contains(verified.out, "PASS"));

    CliResult as_json = run({"verify", "--plan", path_of("plan.json"), "--targets",
                             path_of("t.json"), "--format", "json"});
    CHECK(as_json.code == 0);
    auto j = nlohmann::json::parse(as_json.out);
    CHECK(j["pass"] == true);
    CHECK(j["audits"].size() == 4);

    // Determinism: the same flags and seed reproduce every byte.
    CliResult again = run({"solve", "--targets", path_of("t.json"), "--out", path_of("plan.json"),
                           "--n", "2", "--m", "2"});
    CHECK(again.out == solved.out);
    CHECK(again.code == 0);
}

TEST_CASE("verify exits 1 when the plan misses its targets") {
    Plan plan{3, pts_node(atom_node(AtomSpec::projective_space(3), "a0"), 2, "a1")};
    put("small.json", serialize(plan));
    put("good.json", R"({"m":3,"n":3,"entries":{"1,1":0}})");
    CHECK(run({"verify", "--plan", path_of("small.json"), "--targets", path_of("good.json")})
              .code == 0);

    std::string tampered = serialize(plan);
    auto at = tampered.find("\"count\": 2");
    REQUIRE(at != std::string::npos);
    tampered.replace(at, 10, "\"count\": 1");
    put("tampered.json", tampered);

    CliResult r =
        run({"verify", "--plan", path_of("tampered.json"), "--targets", path_of("good.json")});
    CHECK(r.code == 1);
    CHECK(contains(r.out, "MISMATCH"));
    CHECK(contains(r.out, "FAIL"));
}

TEST_CASE("targets violating duality are invalid input") {
    put("bad.json", R"({"m":2,"n":2,"entries":{"1,0":1,"1,2":0}})");
    CliResult r = run({"solve", "--targets", path_of("bad.json"), "--out", path_of("never.json")});
    CHECK(r.code == 2);
    CHECK(contains(r.err, "bad.json"));
    CHECK(contains(r.err, "1,2"));
}

TEST_CASE("solve cross-checks the n and m flags against the targets file") {
    put("t2.json", R"({"m":2,"n":2,"entries":{"1,0":0}})");
    CliResult r = run(
        {"solve", "--targets", path_of("t2.json"), "--out", path_of("never.json"), "--n", "3"});
    CHECK(r.code == 2);
    CHECK(contains(r.err, "--n 3"));
    CHECK(contains(r.err, "dimension 2"));

    CliResult rm = run(
        {"solve", "--targets", path_of("t2.json"), "--out", path_of("never.json"), "--m", "5"});
    CHECK(rm.code == 2);
    CHECK(contains(rm.err, "--m 5"));
}

TEST_CASE("eval prints a plan symbolically or under a model") {
    Plan plan{2, atom_node(AtomSpec::projective_space(2), "a0")};
    put("p2.json", serialize(plan));

    CliResult symbolic = run({"eval", "--plan", path_of("p2.json")});
    CHECK(symbolic.code == 0);
    CHECK(contains(symbolic.out, "1\t0\t0"));

    CliResult numbers = run({"eval", "--plan", path_of("p2.json"), "--seed", "5"});
    CHECK(numbers.code == 0);
    CHECK(contains(numbers.out, "1"));

    CliResult j = run({"eval", "--plan", path_of("p2.json"), "--seed", "5", "--format", "json"});
    auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["mode"] == "values");
    CHECK(doc["n"] == 2);
    CHECK(doc["entries"][1][1] == "1");

    CliResult sj = run({"eval", "--plan", path_of("p2.json"), "--format", "json"});
    auto sdoc = nlohmann::json::parse(sj.out);
    CHECK(sdoc["mode"] == "symbolic");
}

TEST_CASE("assignment files stand in for the seed flag") {
    Plan plan{2, atom_node(AtomSpec::serre_surface(), "a0")};
    put("serre.json", serialize(plan));
    put("model.json", R"({"seed": 5})");

    CliResult by_seed = run({"eval", "--plan", path_of("serre.json"), "--seed", "5"});
    CliResult by_file =
        run({"eval", "--plan", path_of("serre.json"), "--assignment", path_of("model.json")});
    CHECK(by_seed.code == 0);
    CHECK(by_file.code == 0);
    CHECK(by_seed.out == by_file.out);

    put("broken.json", R"({"values":{"has space":1}})");
    CliResult bad =
        run({"eval", "--plan", path_of("serre.json"), "--assignment", path_of("broken.json")});
    CHECK(bad.code == 2);
    CHECK(contains(bad.err, "broken.json"));
    CHECK(contains(bad.err, "has space"));
}

TEST_CASE("fuzz passes every trial and is reproducible") {
    CliResult first = run({"fuzz", "--n", "2", "--m", "2", "--trials", "5", "--seed", "3"});
    CHECK(first.code == 0);
    CHECK(contains(first.out, "passed 5/5"));

    CliResult second = run({"fuzz", "--n", "2", "--m", "2", "--trials", "5", "--seed", "3"});
    CHECK(second.out == first.out);

    CliResult j = run({"fuzz", "--n", "3", "--m", "3", "--trials", "4", "--seed", "9", "--format",
                       "json"});
    CHECK(j.code == 0);
    auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["passed"] == 4);
    CHECK(doc["results"].size() == 4);
}

TEST_CASE("atoms prints the atomic diamonds") {
    CliResult gallery = run({"atoms"});
    CHECK(gallery.code == 0);
    CHECK(contains(gallery.out, "point (dimension 0)"));
    CHECK(contains(gallery.out, "serre-surface (dimension 2)"));
    CHECK(contains(gallery.out, "hypersurface(5) (dimension 3)"));

    CliResult single = run({"atoms", "--atom", "P2", "--format", "json"});
    CHECK(single.code == 0);
    auto doc = nlohmann::json::parse(single.out);
    REQUIRE(doc["atoms"].size() == 1);
    CHECK(doc["atoms"][0]["name"] == "P2");
    CHECK(doc["atoms"][0]["entries"][0][0] == "1");

    CliResult unknown = run({"atoms", "--atom", "Banana"});
    CHECK(unknown.code == 2);
    CHECK(contains(unknown.err, "Banana"));
}

TEST_CASE("flag and file errors exit 2") {
    CHECK(run({"solve"}).code == 2);
    CHECK(run({"no-such-command"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"--help"}).code == 0);

    CliResult missing =
        run({"verify", "--plan", path_of("absent.json"), "--targets", path_of("absent.json")});
    CHECK(missing.code == 2);
    CHECK(contains(missing.err, "absent.json"));

    put("mismatched.json", R"({"m":2,"n":3,"entries":{}})");
    Plan plan{2, atom_node(AtomSpec::projective_space(2), "a0")};
    put("p2b.json", serialize(plan));
    CliResult wrong_dim =
        run({"verify", "--plan", path_of("p2b.json"), "--targets", path_of("mismatched.json")});
    CHECK(wrong_dim.code == 2);
}
