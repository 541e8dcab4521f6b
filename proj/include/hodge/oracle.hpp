#pragma once

#include <memory>
#include <vector>

namespace hodge {

struct OracleExpr;
using OracleExprPtr = std::shared_ptr<const OracleExpr>;

// A tiny expression language over the classically tabulated spaces. Hodge
// numbers of these are computed twice, by entirely disjoint code paths: the
// plain integer recursion below, and the symbolic calculus. Agreement of the
// two is what oracle_compare certifies.
struct OracleExpr {
    enum class Kind { projective_space, elliptic_curve, product, power, blowup_points };

    Kind kind;
    int param = 0;
    OracleExprPtr left;
    OracleExprPtr right;

    static OracleExprPtr projective(int k);
    static OracleExprPtr elliptic();
    static OracleExprPtr product(OracleExprPtr a, OracleExprPtr b);
    static OracleExprPtr power(OracleExprPtr a, int k);
    static OracleExprPtr blowup_points(OracleExprPtr a, int count);
};

// Row p, column q; size (n+1) x (n+1).
using OracleGrid = std::vector<std::vector<long long>>;

// Hodge numbers by direct integer bookkeeping: diagonal ones for projective
// space, the square of ones for an elliptic curve, coefficient convolution
// for products, and +count on the interior diagonal for point blowups.
// No code is shared with the symbolic calculus.
OracleGrid oracle_diamond(const OracleExprPtr& e);

// Builds the same space through the symbolic combinators and checks every
// entry is a constant polynomial equal to the oracle's integer.
bool oracle_compare(const OracleExprPtr& e);

}  // namespace hodge
