#include "hodge/oracle.hpp"

#include "hodge/calculus.hpp"
#include "hodge/diamond.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace hodge {

namespace {

OracleExprPtr make(OracleExpr e) { return std::make_shared<const OracleExpr>(std::move(e)); }

OracleGrid convolve(const OracleGrid& x, const OracleGrid& y) {
    int nx = static_cast<int>(x.size()) - 1;
    int ny = static_cast<int>(y.size()) - 1;
    int n = nx + ny;
    OracleGrid g(n + 1, std::vector<long long>(n + 1, 0));
    for (int px = 0; px <= nx; ++px)
        for (int qx = 0; qx <= nx; ++qx)
            for (int py = 0; py <= ny; ++py)
                for (int qy = 0; qy <= ny; ++qy) g[px + py][qx + qy] += x[px][qx] * y[py][qy];
    return g;
}

HodgeDiamond to_calculus(const OracleExprPtr& e, const std::string& path) {
    switch (e->kind) {
        case OracleExpr::Kind::projective_space:
            return atom(AtomSpec::projective_space(e->param), path);
        case OracleExpr::Kind::elliptic_curve:
            return atom(AtomSpec::elliptic_curve(), path);
        case OracleExpr::Kind::product:
            return kuenneth(to_calculus(e->left, path + "l"), to_calculus(e->right, path + "r"));
        case OracleExpr::Kind::power:
            return power(to_calculus(e->left, path + "b"), e->param);
        case OracleExpr::Kind::blowup_points: {
            HodgeDiamond d = to_calculus(e->left, path + "b");
            for (int i = 0; i < e->param; ++i) d = blowup(d, HodgeDiamond());
            return d;
        }
    }
    throw std::invalid_argument("unknown oracle expression kind");
}

}  // namespace

OracleExprPtr OracleExpr::projective(int k) {
    if (k < 0) throw std::invalid_argument("projective space dimension must be >= 0");
    return make({Kind::projective_space, k, nullptr, nullptr});
}

OracleExprPtr OracleExpr::elliptic() { return make({Kind::elliptic_curve, 0, nullptr, nullptr}); }

OracleExprPtr OracleExpr::product(OracleExprPtr a, OracleExprPtr b) {
    return make({Kind::product, 0, std::move(a), std::move(b)});
}

OracleExprPtr OracleExpr::power(OracleExprPtr a, int k) {
    if (k < 0) throw std::invalid_argument("power exponent must be >= 0");
    return make({Kind::power, k, std::move(a), nullptr});
}

OracleExprPtr OracleExpr::blowup_points(OracleExprPtr a, int count) {
    if (count < 0) throw std::invalid_argument("point count must be >= 0");
    return make({Kind::blowup_points, count, std::move(a), nullptr});
}

OracleGrid oracle_diamond(const OracleExprPtr& e) {
    switch (e->kind) {
        case OracleExpr::Kind::projective_space: {
            int n = e->param;
            OracleGrid g(n + 1, std::vector<long long>(n + 1, 0));
            for (int i = 0; i <= n; ++i) g[i][i] = 1;
            return g;
        }
        case OracleExpr::Kind::elliptic_curve:
            return {{1, 1}, {1, 1}};
        case OracleExpr::Kind::product:
            return convolve(oracle_diamond(e->left), oracle_diamond(e->right));
        case OracleExpr::Kind::power: {
            OracleGrid g{{1}};
            OracleGrid base = oracle_diamond(e->left);
            for (int i = 0; i < e->param; ++i) g = convolve(g, base);
            return g;
        }
        case OracleExpr::Kind::blowup_points: {
            OracleGrid g = oracle_diamond(e->left);
            int n = static_cast<int>(g.size()) - 1;
            if (n < 2) throw std::invalid_argument("point blowups need dimension >= 2");
            for (int i = 1; i <= n - 1; ++i) g[i][i] += e->param;
            return g;
        }
    }
    throw std::invalid_argument("unknown oracle expression kind");
}

bool oracle_compare(const OracleExprPtr& e) {
    OracleGrid grid = oracle_diamond(e);
    HodgeDiamond d = to_calculus(e, "oracle:");
    int n = static_cast<int>(grid.size()) - 1;
    if (d.n() != n) return false;
    for (int p = 0; p <= n; ++p)
        for (int q = 0; q <= n; ++q) {
            const SymPoly& value = d.entry(p, q);
            if (!value.is_constant() || value.constant_term() != grid[p][q]) return false;
        }
    return true;
}

}  // namespace hodge
