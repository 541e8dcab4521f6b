#include "hodge/cli.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include "hodge/planner.hpp"
#include "hodge/verifier.hpp"

#include <fstream>
#include <random>
#include <sstream>

namespace hodge {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot read \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw FormatError("cannot write \"" + path + "\"");
}

ResidueTargets load_targets(const std::string& path) {
    std::string text = read_file(path);
    try {
        return ResidueTargets::from_json(text);
    } catch (const FormatError& e) {
        throw FormatError("\"" + path + "\": " + e.what());
    }
}

Plan load_plan(const std::string& path) {
    std::string text = read_file(path);
    try {
        return parse_plan(text);
    } catch (const FormatError& e) {
        throw FormatError("\"" + path + "\": " + e.what());
    }
}

// Assignment files: {"seed": 7, "bound": 10, "values": {"node:...": 3}},
// every field optional. Explicit values win over seeded ones.
Assignment load_assignment(const std::string& path) {
    std::string text = read_file(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("\"" + path + "\": " + e.what());
    }
    if (!j.is_object()) throw FormatError("\"" + path + "\": assignment JSON must be an object");
    Assignment a;
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer() || j["seed"].get<long long>() < 0)
            throw FormatError("\"" + path + "\": \"seed\" must be an integer >= 0");
        long long bound = 10;
        if (j.contains("bound")) {
            if (!j["bound"].is_number_integer() || j["bound"].get<long long>() < 0)
                throw FormatError("\"" + path + "\": \"bound\" must be an integer >= 0");
            bound = j["bound"].get<long long>();
        }
        a = Assignment::seeded(j["seed"].get<uint64_t>(), bound);
    } else if (j.contains("bound")) {
        throw FormatError("\"" + path + "\": \"bound\" only makes sense next to \"seed\"");
    }
    if (j.contains("values")) {
        if (!j["values"].is_object())
            throw FormatError("\"" + path + "\": \"values\" must map unknown names to integers");
        for (const auto& [key, val] : j["values"].items()) {
            if (!val.is_number_integer() || val.get<long long>() < 0)
                throw FormatError("\"" + path + "\": value for \"" + key +
                                  "\" must be an integer >= 0");
            try {
                a.set(UnknownId::intern(key), val.get<long long>());
            } catch (const FormatError& e) {
                throw FormatError("\"" + path + "\": \"" + key + "\": " + e.what());
            }
        }
    }
    return a;
}

Assignment pick_sigma(const CliConfig& cfg) {
    if (!cfg.assignment_path.empty()) return load_assignment(cfg.assignment_path);
    return Assignment::seeded(cfg.seed, 10);
}

void print_report(const VerificationReport& rep, std::ostream& out) {
    for (const auto& e : rep.entries)
        out << "h^{" << e.p << "," << e.q << "}: expected " << e.expected << ", got " << e.got
            << (e.certified ? ", certified" : ", model-dependent")
            << (e.matches() ? "" : "  <- MISMATCH") << "\n";
    for (const auto& a : rep.audits)
        out << "audit " << a.name << ": " << (a.pass ? "ok" : "FAILED") << " (" << a.detail
            << ")\n";
    out << (rep.pass() ? "PASS" : "FAIL") << "\n";
}

struct ResidueView {
    std::vector<std::vector<long long>> residues;
    std::vector<std::vector<bool>> certified;
    bool all_certified = true;
};

ResidueView residue_view(const HodgeDiamond& d, long long m, const Assignment& sigma) {
    int n = d.n();
    ResidueView v;
    v.residues.assign(n + 1, std::vector<long long>(n + 1, 0));
    v.certified.assign(n + 1, std::vector<bool>(n + 1, false));
    for (int p = 0; p <= n; ++p)
        for (int q = 0; q <= n; ++q) {
            auto c = d.entry(p, q).const_mod(m);
            v.certified[p][q] = c.has_value();
            v.residues[p][q] = c ? *c : mod_norm(d.entry(p, q).eval(sigma), m);
            if (!c) v.all_certified = false;
        }
    return v;
}

int cmd_solve(const CliConfig& cfg, bool n_given, bool m_given, std::ostream& out) {
    ResidueTargets targets = load_targets(cfg.targets_path);
    if (n_given && cfg.n != targets.n())
        throw FormatError("--n " + std::to_string(cfg.n) + " disagrees with \"" +
                          cfg.targets_path + "\" (dimension " + std::to_string(targets.n()) + ")");
    if (m_given && cfg.m != targets.m())
        throw FormatError("--m " + std::to_string(cfg.m) + " disagrees with \"" +
                          cfg.targets_path + "\" (modulus " + std::to_string(targets.m()) + ")");
    Assignment sigma = pick_sigma(cfg);
    PlannerContext ctx(targets.m(), sigma);
    Plan plan = solve_full(targets.n(), targets, ctx);
    write_file(cfg.out_path, serialize(plan) + "\n");
    VerificationReport rep = verify(plan, targets, sigma);
    ResidueView view = residue_view(eval_plan(plan), targets.m(), sigma);

    if (cfg.format == "json") {
        nlohmann::ordered_json j;
        j["plan_file"] = cfg.out_path;
        j["n"] = targets.n();
        j["m"] = targets.m();
        j["residues"] = view.residues;
        j["certified"] = view.certified;
        j["report"] = nlohmann::ordered_json::parse(rep.to_json());
        out << j.dump(2) << "\n";
    } else {
        out << "plan written to " << cfg.out_path << "\n\n";
        int n = targets.n();
        std::vector<std::vector<std::string>> cells(n + 1, std::vector<std::string>(n + 1));
        for (int p = 0; p <= n; ++p)
            for (int q = 0; q <= n; ++q)
                cells[p][q] =
                    std::to_string(view.residues[p][q]) + (view.certified[p][q] ? "" : "?");
        out << render_rotated(n, cells) << "\n";
        if (view.all_certified)
            out << "all entries certified mod " << targets.m() << "\n\n";
        else
            out << "entries marked ? depend on the model assignment\n\n";
        print_report(rep, out);
    }
    return rep.pass() ? 0 : 1;
}

int cmd_eval(const CliConfig& cfg, bool with_model, std::ostream& out) {
    Plan plan = load_plan(cfg.plan_path);
    HodgeDiamond d = eval_plan(plan);
    int n = d.n();
    nlohmann::ordered_json j;
    if (with_model) {
        Assignment sigma = pick_sigma(cfg);
        auto values = eval_diamond(d, sigma);
        std::vector<std::vector<std::string>> cells(n + 1, std::vector<std::string>(n + 1));
        for (int p = 0; p <= n; ++p)
            for (int q = 0; q <= n; ++q) cells[p][q] = values[p][q].str();
        if (cfg.format == "json") {
            j["n"] = n;
            j["m"] = plan.m;
            j["mode"] = "values";
            j["entries"] = cells;
            out << j.dump(2) << "\n";
        } else {
            out << render_rotated(n, cells);
        }
    } else {
        if (cfg.format == "json") {
            std::vector<std::vector<std::string>> cells(n + 1, std::vector<std::string>(n + 1));
            for (int p = 0; p <= n; ++p)
                for (int q = 0; q <= n; ++q) cells[p][q] = d.entry(p, q).to_string();
            j["n"] = n;
            j["m"] = plan.m;
            j["mode"] = "symbolic";
            j["entries"] = cells;
            out << j.dump(2) << "\n";
        } else {
            out << render_grid(d);
        }
    }
    return 0;
}

int cmd_verify(const CliConfig& cfg, std::ostream& out) {
    Plan plan = load_plan(cfg.plan_path);
    ResidueTargets targets = load_targets(cfg.targets_path);
    Assignment sigma = pick_sigma(cfg);
    VerificationReport rep = verify(plan, targets, sigma);
    if (cfg.format == "json")
        out << rep.to_json() << "\n";
    else
        print_report(rep, out);
    return rep.pass() ? 0 : 1;
}

// Duality-consistent residues over the outer border and the inner cross;
// positions whose dual already got a value are skipped.
ResidueTargets sample_targets(int n, long long m, std::mt19937_64& gen) {
    ResidueTargets t(m, n);
    std::uniform_int_distribution<long long> dist(0, m - 1);
    for (const auto& set : {ResidueTargets::j_set(n), ResidueTargets::i_set(n)})
        for (PQ pq : set) {
            if (t.contains(pq.p, pq.q) || t.contains(n - pq.p, n - pq.q)) continue;
            t.set(pq.p, pq.q, dist(gen));
        }
    return t;
}

int cmd_fuzz(const CliConfig& cfg, std::ostream& out) {
    std::mt19937_64 gen(cfg.seed);
    long long passed = 0;
    auto results = nlohmann::ordered_json::array();
    std::ostringstream lines;
    for (long long trial = 0; trial < cfg.trials; ++trial) {
        ResidueTargets targets = sample_targets(cfg.n, cfg.m, gen);
        Assignment sigma = Assignment::seeded(gen(), 10);
        PlannerContext ctx(cfg.m, sigma);
        Plan plan = solve_full(cfg.n, targets, ctx);
        bool ok = verify(plan, targets, sigma).pass();
        if (ok) ++passed;
        if (cfg.format == "json") {
            nlohmann::ordered_json r;
            r["trial"] = trial;
            r["pass"] = ok;
            results.push_back(std::move(r));
        } else {
            lines << "trial " << trial << ": " << (ok ? "pass" : "FAIL") << "\n";
        }
    }
    if (cfg.format == "json") {
        nlohmann::ordered_json j;
        j["n"] = cfg.n;
        j["m"] = cfg.m;
        j["seed"] = cfg.seed;
        j["trials"] = cfg.trials;
        j["passed"] = passed;
        j["results"] = std::move(results);
        out << j.dump(2) << "\n";
    } else {
        out << lines.str() << "passed " << passed << "/" << cfg.trials << "\n";
    }
    return passed == cfg.trials ? 0 : 1;
}

int cmd_atoms(const CliConfig& cfg, std::ostream& out) {
    std::vector<AtomSpec> specs;
    if (!cfg.atom_name.empty())
        specs.push_back(AtomSpec::parse_name(cfg.atom_name));
    else
        specs = {AtomSpec::point(), AtomSpec::projective_space(2), AtomSpec::elliptic_curve(),
                 AtomSpec::serre_surface(), AtomSpec::hypersurface(5)};

    auto listing = nlohmann::ordered_json::array();
    for (const AtomSpec& spec : specs) {
        HodgeDiamond d = atom(spec, spec.name());
        if (cfg.format == "json") {
            int n = d.n();
            std::vector<std::vector<std::string>> cells(n + 1, std::vector<std::string>(n + 1));
            for (int p = 0; p <= n; ++p)
                for (int q = 0; q <= n; ++q) cells[p][q] = d.entry(p, q).to_string();
            nlohmann::ordered_json ja;
            ja["name"] = spec.name();
            ja["n"] = n;
            ja["entries"] = cells;
            listing.push_back(std::move(ja));
        } else {
            out << spec.name() << " (dimension " << spec.dim() << ")\n"
                << render_rotated(d) << "\n";
        }
    }
    if (cfg.format == "json") {
        nlohmann::ordered_json j;
        j["atoms"] = std::move(listing);
        out << j.dump(2) << "\n";
    }
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CliConfig cfg;
    CLI::App app{"plans, evaluates, and verifies Hodge diamond constructions"};
    app.require_subcommand(1);

    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", cfg.format, "output format: text or json")
            ->check(CLI::IsMember({"text", "json"}));
    };
    auto add_sigma = [&](CLI::App* sub) {
        sub->add_option("--seed", cfg.seed, "seed for the model assignment (default 0)");
        sub->add_option("--assignment", cfg.assignment_path,
                        "model assignment JSON file (wins over --seed)");
    };

    CLI::App* solve = app.add_subcommand("solve", "build a plan meeting residue targets");
    solve->add_option("--targets", cfg.targets_path, "targets JSON file")->required();
    solve->add_option("--out", cfg.out_path, "where to write the plan JSON")->required();
    solve->add_option("--n", cfg.n, "cross-check: expected dimension");
    solve->add_option("--m", cfg.m, "cross-check: expected modulus");
    add_sigma(solve);
    add_format(solve);

    CLI::App* eval = app.add_subcommand("eval", "print a plan's diamond");
    eval->add_option("--plan", cfg.plan_path, "plan JSON file")->required();
    add_sigma(eval);
    add_format(eval);

    CLI::App* verify_cmd = app.add_subcommand("verify", "check a plan against targets");
    verify_cmd->add_option("--plan", cfg.plan_path, "plan JSON file")->required();
    verify_cmd->add_option("--targets", cfg.targets_path, "targets JSON file")->required();
    add_sigma(verify_cmd);
    add_format(verify_cmd);

    CLI::App* fuzz = app.add_subcommand("fuzz", "solve and verify random target systems");
    fuzz->add_option("--n", cfg.n, "dimension")->required();
    fuzz->add_option("--m", cfg.m, "modulus")->required();
    fuzz->add_option("--trials", cfg.trials, "number of trials (default 25)")
        ->check(CLI::NonNegativeNumber);
    fuzz->add_option("--seed", cfg.seed, "seed for targets and assignments (default 0)");
    add_format(fuzz);

    CLI::App* atoms = app.add_subcommand("atoms", "print the diamonds of the atomic spaces");
    atoms->add_option("--atom", cfg.atom_name, "a single atom, e.g. P3 or serre-surface");
    add_format(atoms);

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        cfg.command = sub->get_name();
        if (cfg.command == "solve")
            return cmd_solve(cfg, solve->count("--n") > 0, solve->count("--m") > 0, out);
        if (cfg.command == "eval") {
            bool with_model = eval->count("--seed") > 0 || !cfg.assignment_path.empty();
            return cmd_eval(cfg, with_model, out);
        }
        if (cfg.command == "verify") return cmd_verify(cfg, out);
        if (cfg.command == "fuzz") return cmd_fuzz(cfg, out);
        return cmd_atoms(cfg, out);
    } catch (const FormatError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace hodge
