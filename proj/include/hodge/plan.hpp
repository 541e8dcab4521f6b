#pragma once

#include "hodge/calculus.hpp"

#include <memory>
#include <string>
#include <vector>

namespace hodge {

enum class NodeKind {
    Atom,
    Product,
    Power,
    BlowupPoints,
    BlowupCentre,
    LefschetzSection,
    ChiSection,
    AsymmetricBlowup,
    InnerRound,
};

std::string kind_name(NodeKind kind);

struct Justification {
    std::string ref;
    std::string note;

    friend bool operator==(const Justification&, const Justification&) = default;
};

struct PlanNode;
using NodePtr = std::shared_ptr<const PlanNode>;

// One construction step. The meaning of the scalar fields depends on kind:
//   Atom             atom_spec; no children
//   Product          children = {a, b}
//   Power            children = {a}, count = exponent
//   BlowupPoints     children = {a}, count = number of points
//   BlowupCentre     children = {a, centre-plan}
//   LefschetzSection children = {a}
//   ChiSection       children = {a}, b = pinned residue, chi_e / chi_r = the
//                    recorded bookkeeping residues
//   AsymmetricBlowup children = {a} or {a, S-plan}; r = level, b / c = the
//                    row and column residues (b = c when r is 1 or n-1)
//   InnerRound       children = {a, replica-plan}
struct PlanNode {
    NodeKind kind = NodeKind::Atom;
    AtomSpec atom_spec;
    long long count = 0;
    long long r = 0;
    long long b = 0;
    long long c = 0;
    long long chi_e = 0;
    long long chi_r = 0;
    std::vector<NodePtr> children;
    Justification justification;
    std::string path;
};

inline NodePtr make_node(PlanNode&& node) {
    return std::make_shared<const PlanNode>(std::move(node));
}

struct Plan {
    long long m = 2;
    NodePtr root;
};

// One blowup performed while executing a plan: either a concrete centre with
// its diamond, or an opaque bookkeeping increment whose ambient replica is a
// fresh increment again.
struct BlowupTraceEntry {
    bool opaque_delta = false;
    HodgeDiamond centre;
    int dim = 0;

    static BlowupTraceEntry delta() { return {true, HodgeDiamond(), 0}; }
    static BlowupTraceEntry of(HodgeDiamond c) {
        int d = c.n();
        return {false, std::move(c), d};
    }
};

int node_dim(const PlanNode& node);

// Structural well-formedness: parameter ranges, codimensions, child counts,
// path uniqueness, replica-plan spine. Throws FormatError naming the node.
void validate_plan(const Plan& plan);

// A node's evaluation output: the diamond together with the blowups the
// subtree performs (in order).
struct NodeValue {
    HodgeDiamond diamond;
    std::vector<BlowupTraceEntry> trace;
};

// Combines already-evaluated children under `node`. This is the one
// definition of node semantics; the solver builds plans through it and the
// verifier re-walks plans through it.
NodeValue eval_step(const PlanNode& node, long long m, const std::vector<NodeValue>& children);

NodeValue eval_node(const NodePtr& node, long long m);

HodgeDiamond eval_plan(const Plan& plan);

std::vector<BlowupTraceEntry> blowup_trace(const Plan& plan);

// JSON wire format, version 1. Serialization is byte-deterministic; parse
// validates and reports the node path and field of the first violation.
std::string serialize(const Plan& plan);
Plan parse_plan(std::string_view text);

bool plan_equal(const Plan& a, const Plan& b);

}  // namespace hodge
