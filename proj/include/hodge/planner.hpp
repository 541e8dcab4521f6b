#pragma once

#include "hodge/plan.hpp"

#include <map>

namespace hodge {

// Shared state of one planning run: the modulus, the model assignment the
// planner reads current Hodge numbers from wherever the construction needs a
// concrete value, and the node path allocator. Planning is deterministic
// given (inputs, sigma): identical calls produce byte-identical plans.
struct PlannerContext {
    long long m;
    Assignment sigma;
    long long next_path = 0;

    PlannerContext(long long m, Assignment sigma);

    std::string fresh_path();
    // Bumps the allocator past every numeric path in an existing tree so a
    // plan that was parsed rather than planned can be extended safely.
    void advance_past(const PlanNode& root);
};

// A plan whose outer entries in degrees <= n-1 are certified congruent to
// `targets` (keys must cover J_{n-1}), with no relation imposed between
// h^{n-1,0} and h^{0,n-1}. The output dimension is n-1 plus a multiple of
// n+1, never less than n-1.
Plan solve_outer_low(int n, const std::map<PQ, long long>& targets, PlannerContext& ctx);

// Raises x (dimension >= n-1; outer entries in degrees <= n-1 certified) to
// dimension n, keeping those entries and pinning h^{n,0} = h^{0,n} ≡ b.
Plan outer_mid_lift(const Plan& x, int n, long long b, PlannerContext& ctx);

// A dimension-n plan whose whole outer border J_n is certified ≡ targets
// (which must cover J_n; h^{n,0} and h^{0,n} agree by target duality).
Plan solve_outer(int n, const ResidueTargets& targets, PlannerContext& ctx);

// Appends one level-r correction: h^{r,1} += b and h^{1,r} += c mod m,
// leaving rows above r and the whole outer border untouched mod m. b = c is
// required at the edge levels r ∈ {1, n-1}.
Plan asymmetric_blowup(const Plan& x, long long r, long long b, long long c, PlannerContext& ctx);

// Meets targets on the cross I_n (which the keys must cover) under
// ctx.sigma, by level corrections in descending order. Levels whose residues
// already match contribute no nodes.
Plan solve_second_outer(const Plan& x, const ResidueTargets& targets, PlannerContext& ctx);

// Meets every strictly inner target 1 <= p,q <= n-1 (all pairs must be
// covered) under ctx.sigma. x must have dimension n; n <= 1 returns x
// unchanged. Outer entries keep their polynomials, so certifications
// established by solve_outer survive.
Plan solve_inner(const Plan& x, const ResidueTargets& targets, PlannerContext& ctx);

// Meets a full diamond of targets: outer border certified, inner entries
// matching under ctx.sigma. Positions without a target (directly or via the
// dual position) are treated as 0.
Plan solve_full(int n, const ResidueTargets& targets, PlannerContext& ctx);

}  // namespace hodge
