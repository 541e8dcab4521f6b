#include "hodge/plan.hpp"

#include "json.hpp"

#include <array>
#include <cctype>
#include <set>

namespace hodge {

namespace {

constexpr std::array<std::pair<NodeKind, const char*>, 9> kKindNames{{
    {NodeKind::Atom, "Atom"},
    {NodeKind::Product, "Product"},
    {NodeKind::Power, "Power"},
    {NodeKind::BlowupPoints, "BlowupPoints"},
    {NodeKind::BlowupCentre, "BlowupCentre"},
    {NodeKind::LefschetzSection, "LefschetzSection"},
    {NodeKind::ChiSection, "ChiSection"},
    {NodeKind::AsymmetricBlowup, "AsymmetricBlowup"},
    {NodeKind::InnerRound, "InnerRound"},
}};

}  // namespace

std::string kind_name(NodeKind kind) {
    for (const auto& [k, name] : kKindNames)
        if (k == kind) return name;
    throw std::logic_error("unreachable");
}

int node_dim(const PlanNode& node) {
    auto child = [&](size_t i) -> const PlanNode& {
        if (i >= node.children.size() || !node.children[i])
            throw FormatError("node \"" + node.path + "\": missing child");
        return *node.children[i];
    };
    switch (node.kind) {
        case NodeKind::Atom: return node.atom_spec.dim();
        case NodeKind::Product: return node_dim(child(0)) + node_dim(child(1));
        case NodeKind::Power: return static_cast<int>(node.count) * node_dim(child(0));
        case NodeKind::BlowupPoints:
        case NodeKind::BlowupCentre:
        case NodeKind::AsymmetricBlowup:
        case NodeKind::InnerRound: return node_dim(child(0));
        case NodeKind::LefschetzSection:
        case NodeKind::ChiSection: return node_dim(child(0)) - 1;
    }
    throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Validation

namespace {

void validate_node(const PlanNode& node, long long m, std::set<std::string>& paths) {
    if (node.path.empty()) throw FormatError("plan node has an empty path");
    for (char ch : node.path)
        if (ch == '{' || ch == '}' || std::isspace(static_cast<unsigned char>(ch)))
            throw FormatError("node \"" + node.path + "\": path contains forbidden characters");
    auto fail = [&](const std::string& what) -> void {
        throw FormatError("node \"" + node.path + "\": " + what);
    };
    if (!paths.insert(node.path).second) fail("duplicate path");

    size_t min_children = 0, max_children = 0;
    switch (node.kind) {
        case NodeKind::Atom: break;
        case NodeKind::Power:
        case NodeKind::BlowupPoints:
        case NodeKind::LefschetzSection:
        case NodeKind::ChiSection: min_children = max_children = 1; break;
        case NodeKind::Product:
        case NodeKind::BlowupCentre:
        case NodeKind::InnerRound: min_children = max_children = 2; break;
        case NodeKind::AsymmetricBlowup: min_children = 1; max_children = 2; break;
    }
    if (node.children.size() < min_children || node.children.size() > max_children)
        fail("expected " + std::to_string(min_children) +
             (max_children != min_children ? " or " + std::to_string(max_children) : "") +
             " children, found " + std::to_string(node.children.size()));
    for (const auto& ch : node.children) {
        if (!ch) fail("null child");
        validate_node(*ch, m, paths);
    }

    switch (node.kind) {
        case NodeKind::Atom:
            if (node.atom_spec.kind == AtomKind::projective_space && node.atom_spec.param < 0)
                fail("projective space needs k >= 0");
            if (node.atom_spec.kind == AtomKind::hypersurface && node.atom_spec.param < 3)
                fail("hypersurface atoms need degree >= 3");
            break;
        case NodeKind::Product: break;
        case NodeKind::Power:
            if (node.count < 0) fail("power exponent must be >= 0");
            break;
        case NodeKind::BlowupPoints:
            if (node.count < 0) fail("point count must be >= 0");
            if (node_dim(*node.children[0]) < 2) fail("points need an ambient of dimension >= 2");
            break;
        case NodeKind::BlowupCentre: {
            int na = node_dim(*node.children[0]);
            int nz = node_dim(*node.children[1]);
            if (nz > na - 2)
                fail("centre of dimension " + std::to_string(nz) +
                     " has codimension < 2 in dimension " + std::to_string(na));
            break;
        }
        case NodeKind::LefschetzSection:
            if (node_dim(*node.children[0]) < 1) fail("sections need dimension >= 1");
            break;
        case NodeKind::ChiSection:
            if (node_dim(*node.children[0]) < 1) fail("sections need dimension >= 1");
            if (node.b < 0 || node.b >= m) fail("pinned residue outside [0,m)");
            if (node.chi_e < 0 || node.chi_e >= m || node.chi_r < 0 || node.chi_r >= m)
                fail("bookkeeping residues outside [0,m)");
            break;
        case NodeKind::AsymmetricBlowup: {
            int n = node_dim(*node.children[0]);
            if (node.r < 1 || node.r > n - 1)
                fail("level r=" + std::to_string(node.r) + " outside [1," + std::to_string(n - 1) +
                     "]");
            if (node.b < 0 || node.b >= m || node.c < 0 || node.c >= m)
                fail("residues outside [0,m)");
            bool edge = node.r == 1 || node.r == n - 1;
            if (edge) {
                if (node.b != node.c) fail("levels 1 and n-1 require matching residues");
                if (node.children.size() != 1) fail("edge levels take no surface subplan");
            } else {
                if (node.children.size() != 2) fail("middle levels need a surface subplan");
                if (node_dim(*node.children[1]) != 2) fail("surface subplan must have dimension 2");
            }
            break;
        }
        case NodeKind::InnerRound: {
            int n = node_dim(*node.children[0]);
            if (n < 2) fail("rounds need dimension >= 2");
            if (node_dim(*node.children[1]) != n - 2)
                fail("replica plan must have dimension " + std::to_string(n - 2));
            const PlanNode* base = node.children[1].get();
            while (!base->children.empty()) base = base->children[0].get();
            if (base->kind != NodeKind::Atom ||
                !(base->atom_spec == AtomSpec::projective_space(n - 2)))
                fail("replica plan must start from P" + std::to_string(n - 2));
            break;
        }
    }
}

}  // namespace

void validate_plan(const Plan& plan) {
    if (plan.m < 2) throw FormatError("plan modulus must be >= 2");
    if (!plan.root) throw FormatError("plan has no root");
    std::set<std::string> paths;
    validate_node(*plan.root, plan.m, paths);
}

// ---------------------------------------------------------------------------
// Evaluation

NodeValue eval_step(const PlanNode& node, long long m, const std::vector<NodeValue>& children) {
    switch (node.kind) {
        case NodeKind::Atom:
            return {atom(node.atom_spec, node.path), {}};
        case NodeKind::Product: {
            NodeValue v{kuenneth(children[0].diamond, children[1].diamond), children[0].trace};
            v.trace.insert(v.trace.end(), children[1].trace.begin(), children[1].trace.end());
            return v;
        }
        case NodeKind::Power: {
            NodeValue v{power(children[0].diamond, static_cast<int>(node.count)), {}};
            for (long long i = 0; i < node.count; ++i)
                v.trace.insert(v.trace.end(), children[0].trace.begin(), children[0].trace.end());
            return v;
        }
        case NodeKind::BlowupPoints: {
            const HodgeDiamond& x = children[0].diamond;
            DiamondShift s = blowup_shift(HodgeDiamond(), x.n());
            s.scale(Int(node.count));
            NodeValue v{apply_shift(x, s), children[0].trace};
            for (long long i = 0; i < node.count; ++i)
                v.trace.push_back(BlowupTraceEntry::of(HodgeDiamond()));
            return v;
        }
        case NodeKind::BlowupCentre: {
            // The centre plan's own trace describes how the centre was built,
            // off-stage; the blowup performed here is the centre itself.
            NodeValue v{blowup(children[0].diamond, children[1].diamond), children[0].trace};
            v.trace.push_back(BlowupTraceEntry::of(children[1].diamond));
            return v;
        }
        case NodeKind::LefschetzSection:
            return {lefschetz_section(children[0].diamond, node.path), children[0].trace};
        case NodeKind::ChiSection: {
            auto [d, meta] = chi_section(children[0].diamond, node.b, m, Assignment(), node.path);
            (void)meta;  // the recorded residues live on the node
            NodeValue v{std::move(d), children[0].trace};
            v.trace.push_back(BlowupTraceEntry::delta());
            return v;
        }
        case NodeKind::AsymmetricBlowup: {
            const HodgeDiamond& x = children[0].diamond;
            int n = x.n();
            NodeValue v;
            v.trace = children[0].trace;
            if (node.r == 1 || node.r == n - 1) {
                long long i = node.b;
                DiamondShift total;
                total.n = n;
                if (i > 0) {
                    DiamondShift pts = blowup_shift(HodgeDiamond(), n);
                    pts.scale(Int(i));
                    total.accumulate(pts);
                }
                std::vector<HodgeDiamond> hyps;
                if (node.r == n - 1 && node.r != 1) {
                    for (long long j = 0; j < i; ++j) {
                        HodgeDiamond z = atom(AtomSpec::hypersurface(n),
                                              node.path + "/centre" + std::to_string(j));
                        total.accumulate(blowup_shift(z, 2));
                        hyps.push_back(std::move(z));
                    }
                }
                v.diamond = apply_shift(x, total);
                for (long long j = 0; j < i; ++j)
                    v.trace.push_back(BlowupTraceEntry::of(HodgeDiamond()));
                for (auto& z : hyps) v.trace.push_back(BlowupTraceEntry::of(std::move(z)));
            } else {
                // One round of the asymmetric construction: the visible part
                // is a blowup along W (a corrected product of the surface S
                // with a fixed factor); everything else it does is m-fold and
                // lands in the opaque increment.
                const HodgeDiamond& s = children[1].diamond;
                HodgeDiamond z = node.r == 2 ? HodgeDiamond()
                                             : atom(AtomSpec::hypersurface(static_cast<int>(node.r)),
                                                    node.path + "/centre-factor");
                HodgeDiamond w = apply_shift(
                    kuenneth(s, z),
                    inner_unknown_shift(static_cast<int>(node.r), node.path, "deltaW"));
                DiamondShift total = inner_unknown_shift(n, node.path, "delta");
                total.scale(Int(m));
                total.accumulate(blowup_shift(w, n - static_cast<int>(node.r)));
                v.diamond = apply_shift(x, total);
                v.trace.push_back(BlowupTraceEntry::delta());
                v.trace.push_back(BlowupTraceEntry::of(std::move(w)));
            }
            return v;
        }
        case NodeKind::InnerRound: {
            const HodgeDiamond& x = children[0].diamond;
            const NodeValue& replica = children[1];
            int n = x.n();
            // Replicating the replica plan in the ambient: blow up a point,
            // then redo each of its blowups (opaque increments freshly), all
            // m times; finally blow up the replica itself.
            DiamondShift bracket = blowup_shift(HodgeDiamond(), n);
            int j = 0;
            for (const auto& entry : replica.trace) {
                if (entry.opaque_delta)
                    bracket.accumulate(
                        inner_unknown_shift(n, node.path, "delta" + std::to_string(j)));
                else
                    bracket.accumulate(blowup_shift(entry.centre, n - entry.dim));
                ++j;
            }
            bracket.scale(Int(m));
            bracket.accumulate(blowup_shift(replica.diamond, 2));
            NodeValue v{apply_shift(x, bracket), children[0].trace};
            for (long long rep = 0; rep < m; ++rep) {
                v.trace.push_back(BlowupTraceEntry::of(HodgeDiamond()));
                v.trace.insert(v.trace.end(), replica.trace.begin(), replica.trace.end());
            }
            v.trace.push_back(BlowupTraceEntry::of(replica.diamond));
            return v;
        }
    }
    throw std::logic_error("unreachable");
}

NodeValue eval_node(const NodePtr& node, long long m) {
    if (!node) throw FormatError("plan has a null node");
    std::vector<NodeValue> children;
    children.reserve(node->children.size());
    for (const auto& ch : node->children) children.push_back(eval_node(ch, m));
    return eval_step(*node, m, children);
}

HodgeDiamond eval_plan(const Plan& plan) {
    validate_plan(plan);
    return eval_node(plan.root, plan.m).diamond;
}

std::vector<BlowupTraceEntry> blowup_trace(const Plan& plan) {
    validate_plan(plan);
    return eval_node(plan.root, plan.m).trace;
}

// ---------------------------------------------------------------------------
// Wire format

namespace {

nlohmann::ordered_json node_to_json(const PlanNode& node) {
    nlohmann::ordered_json j;
    j["kind"] = kind_name(node.kind);
    auto& params = j["params"] = nlohmann::ordered_json::object();
    switch (node.kind) {
        case NodeKind::Atom: params["atom"] = node.atom_spec.name(); break;
        case NodeKind::Power: params["k"] = node.count; break;
        case NodeKind::BlowupPoints: params["count"] = node.count; break;
        case NodeKind::ChiSection:
            params["b"] = node.b;
            params["e"] = node.chi_e;
            params["r"] = node.chi_r;
            break;
        case NodeKind::AsymmetricBlowup:
            params["r"] = node.r;
            params["b"] = node.b;
            params["c"] = node.c;
            break;
        default: break;
    }
    j["justification"] = {{"ref", node.justification.ref}, {"note", node.justification.note}};
    j["path"] = node.path;
    auto& children = j["children"] = nlohmann::ordered_json::array();
    for (const auto& ch : node.children) children.push_back(node_to_json(*ch));
    return j;
}

NodePtr node_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw FormatError("plan JSON: node must be an object");
    if (!j.contains("path") || !j["path"].is_string())
        throw FormatError("plan JSON: node missing string field \"path\"");
    PlanNode node;
    node.path = j["path"].get<std::string>();
    auto fail = [&](const std::string& what) -> void {
        throw FormatError("node \"" + node.path + "\": " + what);
    };

    if (!j.contains("kind") || !j["kind"].is_string()) fail("missing string field \"kind\"");
    std::string kind = j["kind"].get<std::string>();
    bool known = false;
    for (const auto& [k, name] : kKindNames)
        if (kind == name) {
            node.kind = k;
            known = true;
        }
    if (!known) fail("unknown kind \"" + kind + "\"");

    if (!j.contains("justification") || !j["justification"].is_object() ||
        !j["justification"].contains("ref") || !j["justification"]["ref"].is_string() ||
        !j["justification"].contains("note") || !j["justification"]["note"].is_string())
        fail("justification needs string fields \"ref\" and \"note\"");
    node.justification.ref = j["justification"]["ref"].get<std::string>();
    node.justification.note = j["justification"]["note"].get<std::string>();

    nlohmann::json params = nlohmann::json::object();
    if (j.contains("params")) {
        if (!j["params"].is_object()) fail("\"params\" must be an object");
        params = j["params"];
    }
    auto param_int = [&](const char* name) -> long long {
        if (!params.contains(name) || !params[name].is_number_integer())
            fail(std::string("params.") + name + " must be an integer");
        return params[name].get<long long>();
    };
    switch (node.kind) {
        case NodeKind::Atom: {
            if (!params.contains("atom") || !params["atom"].is_string())
                fail("params.atom must be a string");
            try {
                node.atom_spec = AtomSpec::parse_name(params["atom"].get<std::string>());
            } catch (const FormatError& e) {
                fail(e.what());
            }
            break;
        }
        case NodeKind::Power: node.count = param_int("k"); break;
        case NodeKind::BlowupPoints: node.count = param_int("count"); break;
        case NodeKind::ChiSection:
            node.b = param_int("b");
            node.chi_e = param_int("e");
            node.chi_r = param_int("r");
            break;
        case NodeKind::AsymmetricBlowup:
            node.r = param_int("r");
            node.b = param_int("b");
            node.c = param_int("c");
            break;
        default: break;
    }

    if (j.contains("children")) {
        if (!j["children"].is_array()) fail("\"children\" must be an array");
        for (const auto& ch : j["children"]) node.children.push_back(node_from_json(ch));
    }
    return make_node(std::move(node));
}

}  // namespace

std::string serialize(const Plan& plan) {
    if (!plan.root) throw FormatError("plan has no root");
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["m"] = plan.m;
    j["root"] = node_to_json(*plan.root);
    return j.dump(2);
}

Plan parse_plan(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("plan JSON: ") + e.what());
    }
    if (!j.is_object()) throw FormatError("plan JSON: document must be an object");
    if (!j.contains("version") || !j["version"].is_number_integer() ||
        j["version"].get<long long>() != 1)
        throw FormatError("plan JSON: unsupported or missing version");
    if (!j.contains("m") || !j["m"].is_number_integer())
        throw FormatError("plan JSON: \"m\" must be an integer");
    if (!j.contains("root")) throw FormatError("plan JSON: missing \"root\"");
    Plan plan;
    plan.m = j["m"].get<long long>();
    plan.root = node_from_json(j["root"]);
    validate_plan(plan);
    return plan;
}

namespace {

bool node_equal(const PlanNode& a, const PlanNode& b) {
    if (a.kind != b.kind || !(a.atom_spec == b.atom_spec) || a.count != b.count || a.r != b.r ||
        a.b != b.b || a.c != b.c || a.chi_e != b.chi_e || a.chi_r != b.chi_r ||
        !(a.justification == b.justification) || a.path != b.path ||
        a.children.size() != b.children.size())
        return false;
    for (size_t i = 0; i < a.children.size(); ++i)
        if (!node_equal(*a.children[i], *b.children[i])) return false;
    return true;
}

}  // namespace

bool plan_equal(const Plan& a, const Plan& b) {
    if (a.m != b.m) return false;
    if (!a.root || !b.root) return a.root == b.root;
    return node_equal(*a.root, *b.root);
}

}  // namespace hodge
