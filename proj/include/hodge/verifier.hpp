#pragma once

#include "hodge/plan.hpp"

namespace hodge {

// Re-executes the plan step by step, checks the targets under sigma, and
// audits every intermediate diamond: h^{0,0} = 1, duality holds by cell
// sharing, blowup steps leave the outer border alone, and each step's change
// is its visible blowups plus something divisible by m. Throws FormatError
// on a malformed plan and std::invalid_argument when dimensions or moduli
// disagree.
VerificationReport verify(const Plan& plan, const ResidueTargets& targets,
                          const Assignment& sigma);

}  // namespace hodge
