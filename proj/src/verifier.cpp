#include "hodge/verifier.hpp"

#include "hodge/calculus.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace hodge {

namespace {

std::string at(const PlanNode& node, int p, int q) {
    return "node " + node.path + " entry (" + std::to_string(p) + "," + std::to_string(q) + ")";
}

struct Auditor {
    long long m;
    // Above this dimension the middle of a product diamond is too large to
    // materialize; audits fall back to cell identity there and force nothing
    // beyond the rows the construction itself uses.
    static constexpr int kForceLimit = 8;

    AuditCheck corner{"corner-is-one", true, ""};
    AuditCheck duality{"duality-shared", true, ""};
    AuditCheck border{"blowup-border-fixed", true, ""};
    AuditCheck increments{"increment-bookkeeping", true, ""};
    int nodes = 0;

    void fail(AuditCheck& audit, const std::string& detail) {
        if (audit.pass) {
            audit.pass = false;
            audit.detail = detail;
        }
    }

    NodeValue walk(const NodePtr& node) {
        std::vector<NodeValue> kids;
        kids.reserve(node->children.size());
        for (const auto& child : node->children) kids.push_back(walk(child));
        NodeValue v = eval_step(*node, m, kids);
        ++nodes;
        audit_corner(*node, v);
        audit_duality(*node, v);
        switch (node->kind) {
            case NodeKind::BlowupPoints:
            case NodeKind::BlowupCentre:
            case NodeKind::AsymmetricBlowup:
            case NodeKind::InnerRound:
                audit_border(*node, kids[0].diamond, v.diamond);
                audit_shift(*node, kids[0], v);
                break;
            case NodeKind::ChiSection:
                audit_section(*node, kids[0].diamond, v.diamond);
                break;
            default:
                break;
        }
        return v;
    }

    void audit_corner(const PlanNode& node, const NodeValue& v) {
        if (!(v.diamond.entry(0, 0) == SymPoly(1))) fail(corner, at(node, 0, 0) + " is not 1");
    }

    void audit_duality(const PlanNode& node, const NodeValue& v) {
        int n = v.diamond.n();
        for (int p = 0; p <= n; ++p)
            for (int q = 0; q <= n; ++q) {
                if (!(pair_rep(n, PQ{p, q}) == PQ{p, q})) continue;
                PQ d = dual_of(n, PQ{p, q});
                if (v.diamond.cell(p, q) == v.diamond.cell(d.p, d.q)) continue;
                if (n <= kForceLimit && v.diamond.entry(p, q) == v.diamond.entry(d.p, d.q))
                    continue;
                fail(duality, at(node, p, q) + " does not share its dual's cell");
            }
    }

    void audit_border(const PlanNode& node, const HodgeDiamond& in, const HodgeDiamond& out) {
        int n = out.n();
        for (int k = 0; k <= n; ++k)
            for (PQ pq : {PQ{0, k}, PQ{k, 0}}) {
                if (out.cell(pq.p, pq.q) == in.cell(pq.p, pq.q)) continue;
                if (out.entry(pq.p, pq.q) == in.entry(pq.p, pq.q)) continue;
                fail(border, at(node, pq.p, pq.q) + " changed across a blowup");
            }
    }

    // The step's whole effect, minus the blowups it visibly performs, must be
    // divisible by m. The visible part is read off the trace: everything the
    // node appended for an AsymmetricBlowup edge level or a plain blowup, and
    // exactly the final centre for the m-fold kinds.
    void audit_shift(const PlanNode& node, const NodeValue& in, const NodeValue& out) {
        int n = out.diamond.n();
        DiamondShift visible;
        visible.n = n;
        bool m_fold = node.kind == NodeKind::InnerRound ||
                      (node.kind == NodeKind::AsymmetricBlowup && node.children.size() == 2);
        if (m_fold) {
            const BlowupTraceEntry& last = out.trace.back();
            visible.accumulate(blowup_shift(last.centre, n - last.dim));
        } else {
            for (size_t i = in.trace.size(); i < out.trace.size(); ++i) {
                const BlowupTraceEntry& e = out.trace[i];
                if (e.opaque_delta) continue;
                visible.accumulate(blowup_shift(e.centre, n - e.dim));
            }
        }
        for (int p = 1; p <= n - 1; ++p)
            for (int q = 1; q <= n - 1; ++q) {
                if (!(pair_rep(n, PQ{p, q}) == PQ{p, q})) continue;
                SymPoly diff = out.diamond.entry(p, q) - in.diamond.entry(p, q);
                auto it = visible.add.find(PQ{p, q});
                if (it != visible.add.end()) diff = diff - it->second;
                auto r = diff.const_mod(m);
                if (!r || *r != 0)
                    fail(increments, at(node, p, q) + " moved by more than its visible blowups");
            }
    }

    // A pinning section copies everything below the middle except for +m on
    // the diagonal, and pins the new corner pair to its residue.
    void audit_section(const PlanNode& node, const HodgeDiamond& in, const HodgeDiamond& out) {
        int n = out.n();
        for (int p = 0; p <= n; ++p)
            for (int q = 0; q <= n; ++q) {
                if (p + q >= n || (p == 0 && q == 0)) continue;
                if (out.cell(p, q) == in.cell(p, q)) continue;
                if (p == q) {
                    if (p > 1 && n > kForceLimit) continue;
                    auto r = (out.entry(p, p) - in.entry(p, p)).const_mod(m);
                    if (!r || *r != 0)
                        fail(increments, at(node, p, p) + " shifted by a non-multiple of m");
                } else if (n > kForceLimit || !(out.entry(p, q) == in.entry(p, q))) {
                    fail(increments, at(node, p, q) + " was not carried into the section");
                }
            }
        auto pinned = out.entry(0, n).const_mod(m);
        if (!pinned || *pinned != node.b)
            fail(increments, at(node, 0, n) + " is not pinned to its residue");
    }
};

}  // namespace

VerificationReport verify(const Plan& plan, const ResidueTargets& targets,
                          const Assignment& sigma) {
    validate_plan(plan);
    if (targets.m() != plan.m)
        throw std::invalid_argument("targets modulus differs from the plan");
    if (targets.n() != node_dim(*plan.root))
        throw std::invalid_argument("targets dimension differs from the plan");
    Auditor auditor{plan.m};
    NodeValue v = auditor.walk(plan.root);
    VerificationReport report = check_targets(v.diamond, targets, sigma);
    std::string tally = "nodes checked: " + std::to_string(auditor.nodes);
    for (AuditCheck* a :
         {&auditor.corner, &auditor.duality, &auditor.border, &auditor.increments}) {
        if (a->pass) a->detail = tally;
        report.audits.push_back(*a);
    }
    return report;
}

}  // namespace hodge
