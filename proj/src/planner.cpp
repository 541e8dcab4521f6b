#include "hodge/planner.hpp"

#include "hodge/calculus.hpp"

#include <charconv>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hodge {

PlannerContext::PlannerContext(long long m, Assignment sigma) : m(m), sigma(std::move(sigma)) {
    if (m < 2) throw std::invalid_argument("planner modulus must be >= 2");
}

std::string PlannerContext::fresh_path() { return std::to_string(next_path++); }

void PlannerContext::advance_past(const PlanNode& root) {
    bool numeric = !root.path.empty() && root.path.size() <= 18;
    for (char ch : root.path) numeric = numeric && ch >= '0' && ch <= '9';
    if (numeric) {
        long long v = 0;
        std::from_chars(root.path.data(), root.path.data() + root.path.size(), v);
        if (v + 1 > next_path) next_path = v + 1;
    }
    for (const auto& child : root.children)
        if (child) advance_past(*child);
}

namespace {

// A plan fragment together with its evaluated meaning, so extending a plan
// never replays the whole tree.
struct Built {
    NodePtr node;
    NodeValue value;
};

Built step(PlanNode&& proto, std::vector<Built> children, long long m) {
    std::vector<NodeValue> values;
    values.reserve(children.size());
    proto.children.clear();
    proto.children.reserve(children.size());
    for (auto& c : children) {
        values.push_back(std::move(c.value));
        proto.children.push_back(std::move(c.node));
    }
    NodeValue v = eval_step(proto, m, values);
    return {make_node(std::move(proto)), std::move(v)};
}

Built built_atom(const AtomSpec& spec, Justification j, PlannerContext& ctx) {
    PlanNode n;
    n.kind = NodeKind::Atom;
    n.atom_spec = spec;
    n.justification = std::move(j);
    n.path = ctx.fresh_path();
    return step(std::move(n), {}, ctx.m);
}

Built product_of(Built a, Built b, Justification j, PlannerContext& ctx) {
    PlanNode n;
    n.kind = NodeKind::Product;
    n.justification = std::move(j);
    n.path = ctx.fresh_path();
    std::vector<Built> kids;
    kids.push_back(std::move(a));
    kids.push_back(std::move(b));
    return step(std::move(n), std::move(kids), ctx.m);
}

Built power_of(Built a, long long k, Justification j, PlannerContext& ctx) {
    PlanNode n;
    n.kind = NodeKind::Power;
    n.count = k;
    n.justification = std::move(j);
    n.path = ctx.fresh_path();
    std::vector<Built> kids;
    kids.push_back(std::move(a));
    return step(std::move(n), std::move(kids), ctx.m);
}

long long residue_of(const SymPoly& poly, const PlannerContext& ctx) {
    return mod_norm(poly.eval(ctx.sigma), ctx.m);
}

long long need_low(const std::map<PQ, long long>& t, int p, int q, long long m) {
    auto it = t.find(PQ{p, q});
    if (it == t.end())
        throw FormatError("low outer targets missing (" + std::to_string(p) + "," +
                          std::to_string(q) + ")");
    if (it->second < 0 || it->second >= m)
        throw FormatError("low outer target at (" + std::to_string(p) + "," + std::to_string(q) +
                          ") outside [0," + std::to_string(m) + ")");
    return it->second;
}

// Dual-aware target lookup: a pair may be stored under either position.
long long need_at(const ResidueTargets& t, int p, int q) {
    auto v = t.at(p, q);
    if (!v) v = t.at(t.n() - p, t.n() - q);
    if (!v)
        throw FormatError("targets missing (" + std::to_string(p) + "," + std::to_string(q) + ")");
    return *v;
}

Built solve_outer_impl(int n, const ResidueTargets& t, PlannerContext& ctx);

Built solve_outer_low_impl(int n, const std::map<PQ, long long>& t, PlannerContext& ctx) {
    if (n < 2) throw std::invalid_argument("low outer solve needs dimension >= 2");
    const long long m = ctx.m;
    if (n == 2) {
        long long a10 = need_low(t, 1, 0, m);
        long long a01 = need_low(t, 0, 1, m);
        long long i = mod_norm(a01 - a10, m);
        long long j = mod_norm(a10, m);
        if (j == 0) j = m;  // at least one curve factor keeps the dimension positive
        std::string counts = "i=" + std::to_string(i) + ", j=" + std::to_string(j);
        Built s = power_of(built_atom(AtomSpec::serre_surface(),
                                      {"one-form-gap-surface",
                                       "each factor adds 1 to h^{0,1} and nothing to h^{1,0}"},
                                      ctx),
                           i, {"surface-factor-count", counts}, ctx);
        Built e = power_of(
            built_atom(AtomSpec::elliptic_curve(),
                       {"symmetric-curve", "each factor adds 1 to h^{1,0} and to h^{0,1}"}, ctx),
            j, {"curve-factor-count", counts}, ctx);
        return product_of(std::move(s), std::move(e),
                          {"degree-one-basis", "h^{1,0} = j and h^{0,1} = i + j meet the "
                                               "degree-1 targets mod " +
                                                   std::to_string(m)},
                          ctx);
    }

    // Z carries the symmetrized targets; each extra S'xY factor moves
    // h^{0,n-1} by (-1)^n and nothing else on the border.
    ResidueTargets yt(m, n - 1);
    for (int q = 1; q <= n - 2; ++q) yt.set(0, q, mod_norm(q % 2 ? -1 : 1, m));
    yt.set(0, n - 1, 0);
    for (int p = 1; p <= n - 1; ++p) yt.set(p, 0, 0);
    Built y = solve_outer_impl(n - 1, yt, ctx);

    ResidueTargets st(m, 2);
    st.set(1, 0, 0);
    st.set(0, 1, 1);
    st.set(2, 0, 0);
    Built sp = solve_outer_impl(2, st, ctx);

    ResidueTargets zt(m, n - 1);
    for (int p = 1; p <= n - 1; ++p) zt.set(p, 0, need_low(t, p, 0, m));
    for (int q = 1; q <= n - 2; ++q) zt.set(0, q, need_low(t, 0, q, m));
    zt.set(0, n - 1, need_low(t, n - 1, 0, m));
    Built z = solve_outer_impl(n - 1, zt, ctx);

    long long diff = mod_norm(need_low(t, 0, n - 1, m) - need_low(t, n - 1, 0, m), m);
    long long i = n % 2 == 0 ? diff : mod_norm(-diff, m);
    Built unit = product_of(
        std::move(sp), std::move(y),
        {"telescoping-border", "the extra h^{0,1} shifts the alternating column by one: every "
                               "border entry vanishes except h^{0," +
                                   std::to_string(n - 1) + "}"},
        ctx);
    Built pw = power_of(std::move(unit), i,
                        {"asymmetry-corrector", "i=" + std::to_string(i) + " moves h^{0," +
                                                    std::to_string(n - 1) + "} onto its target"},
                        ctx);
    return product_of(std::move(z), std::move(pw), {"symmetric-part-times-corrector", ""}, ctx);
}

Built outer_mid_lift_impl(Built x, int n, long long b, PlannerContext& ctx) {
    if (n < 1) throw std::invalid_argument("lift dimension must be >= 1");
    if (b < 0 || b >= ctx.m) throw std::invalid_argument("pinned residue outside [0,m)");
    int d = x.value.diamond.n();
    if (d < n - 1) throw std::invalid_argument("lift input dimension must be >= n-1");
    while (d < n + 1) {
        Built p2 = built_atom(AtomSpec::projective_space(2),
                              {"dimension-padding", "P2 has an empty outer border"}, ctx);
        x = product_of(std::move(x), std::move(p2),
                       {"dimension-padding",
                        "outer entries in degrees <= " + std::to_string(d) + " are unchanged"},
                       ctx);
        d += 2;
    }
    while (d > n + 1) {
        PlanNode s;
        s.kind = NodeKind::LefschetzSection;
        s.justification = {"hyperplane-section", "entries below the middle degree are kept"};
        s.path = ctx.fresh_path();
        std::vector<Built> kids;
        kids.push_back(std::move(x));
        x = step(std::move(s), std::move(kids), ctx.m);
        --d;
    }
    std::string path = ctx.fresh_path();
    ChiSectionMeta meta = chi_section(x.value.diamond, b, ctx.m, ctx.sigma, path).second;
    PlanNode c;
    c.kind = NodeKind::ChiSection;
    c.b = b;
    c.chi_e = meta.e;
    c.chi_r = meta.r;
    c.justification = {"euler-characteristic-pinning",
                       "pins h^{" + std::to_string(n) + ",0} = h^{0," + std::to_string(n) +
                           "} to " + std::to_string(b) + " mod " + std::to_string(ctx.m) +
                           "; bookkeeping residues e=" + std::to_string(meta.e) +
                           ", r=" + std::to_string(meta.r) + " read from the model"};
    c.path = path;
    std::vector<Built> kids;
    kids.push_back(std::move(x));
    return step(std::move(c), std::move(kids), ctx.m);
}

Built solve_outer_impl(int n, const ResidueTargets& t, PlannerContext& ctx) {
    if (n < 0) throw std::invalid_argument("dimension must be >= 0");
    if (t.m() != ctx.m) throw std::invalid_argument("targets modulus differs from the context");
    if (t.n() != n) throw std::invalid_argument("targets dimension differs from n");
    if (n == 0) return built_atom(AtomSpec::point(), {"zero-dimensional-case", ""}, ctx);
    if (n == 1)
        return outer_mid_lift_impl(built_atom(AtomSpec::point(), {"lift-seed", ""}, ctx), 1,
                                   need_at(t, 1, 0), ctx);
    std::map<PQ, long long> low;
    for (PQ pq : ResidueTargets::j_set(n - 1)) low[pq] = need_at(t, pq.p, pq.q);
    return outer_mid_lift_impl(solve_outer_low_impl(n, low, ctx), n, need_at(t, n, 0), ctx);
}

Built asymmetric_blowup_impl(Built x, long long r, long long b, long long c,
                             PlannerContext& ctx) {
    int n = x.value.diamond.n();
    if (r < 1 || r > n - 1) throw std::invalid_argument("level must lie in [1, n-1]");
    if (b < 0 || b >= ctx.m || c < 0 || c >= ctx.m)
        throw std::invalid_argument("level residues must lie in [0, m)");
    if ((r == 1 || r == n - 1) && b != c)
        throw std::invalid_argument("the edge levels need matching residues");
    PlanNode node;
    node.kind = NodeKind::AsymmetricBlowup;
    node.r = r;
    node.b = b;
    node.c = c;
    node.path = ctx.fresh_path();
    std::vector<Built> kids;
    kids.push_back(std::move(x));
    if (r == 1) {
        node.justification = {"point-blowups",
                              std::to_string(b) + " point blowups add to the diagonal only"};
    } else if (r == n - 1) {
        node.justification = {"hypersurface-blowups",
                              std::to_string(b) + " point blowups plus as many codimension-2 "
                                                  "hypersurface centres raise h^{" +
                                  std::to_string(r) + ",1} and h^{1," + std::to_string(r) + "}"};
    } else {
        ResidueTargets st(ctx.m, 2);
        st.set(1, 0, b);
        st.set(0, 1, c);
        st.set(2, 0, 0);
        node.justification = {"asymmetric-level-blowup",
                              "one visible blowup along W, built from a surface with h^{1,0} ≡ " +
                                  std::to_string(b) + " and h^{0,1} ≡ " + std::to_string(c) +
                                  "; everything else is repeated m times"};
        kids.push_back(solve_outer_impl(2, st, ctx));
    }
    return step(std::move(node), std::move(kids), ctx.m);
}

Built solve_second_outer_impl(Built x, const ResidueTargets& t, PlannerContext& ctx) {
    int n = x.value.diamond.n();
    if (t.m() != ctx.m) throw std::invalid_argument("targets modulus differs from the context");
    if (t.n() != n) throw std::invalid_argument("targets dimension differs from the plan");
    // Descending levels: a level-r correction leaves h^{p,1} for p > r
    // untouched mod m, so earlier work survives.
    for (int r = n - 1; r >= 1; --r) {
        long long b = mod_norm(need_at(t, r, 1) - residue_of(x.value.diamond.entry(r, 1), ctx),
                               ctx.m);
        long long c = mod_norm(need_at(t, 1, r) - residue_of(x.value.diamond.entry(1, r), ctx),
                               ctx.m);
        if (b == 0 && c == 0) continue;
        x = asymmetric_blowup_impl(std::move(x), r, b, c, ctx);
    }
    return x;
}

Built solve_inner_impl(Built x, const ResidueTargets& t, PlannerContext& ctx) {
    int n = x.value.diamond.n();
    if (t.m() != ctx.m) throw std::invalid_argument("targets modulus differs from the context");
    if (t.n() != n) throw std::invalid_argument("targets dimension differs from the plan");
    if (n <= 1) return x;

    // The final round blows up the replica once visibly, adding
    // h^{p-1,q-1}(replica) to the inner entries; on the cross that is 1 at
    // (1,1) and 0 elsewhere, hence the adjusted cross targets.
    ResidueTargets cross(ctx.m, n);
    for (PQ pq : ResidueTargets::i_set(n)) {
        long long a = need_at(t, pq.p, pq.q);
        if (pq.p == pq.q) a = mod_norm(a - 1, ctx.m);
        cross.set(pq.p, pq.q, a);
    }
    Built x1 = solve_second_outer_impl(std::move(x), cross, ctx);

    ResidueTargets sub(ctx.m, n - 2);
    for (int p = 1; p <= n - 3; ++p)
        for (int q = 1; q <= n - 3; ++q)
            sub.set(p, q,
                    mod_norm(need_at(t, p + 1, q + 1) -
                                 residue_of(x1.value.diamond.entry(p + 1, q + 1), ctx),
                             ctx.m));
    Built replica = solve_inner_impl(
        built_atom(AtomSpec::projective_space(n - 2), {"inner-recursion-base", ""}, ctx), sub,
        ctx);

    PlanNode node;
    node.kind = NodeKind::InnerRound;
    node.justification = {"replica-round",
                          "the replica is blown up m times so its own contributions vanish mod "
                          "m; one extra copy shifts each inner entry by the replica's diamond"};
    node.path = ctx.fresh_path();
    std::vector<Built> kids;
    kids.push_back(std::move(x1));
    kids.push_back(std::move(replica));
    return step(std::move(node), std::move(kids), ctx.m);
}

Built adopt(const Plan& x, PlannerContext& ctx) {
    if (x.m != ctx.m) throw std::invalid_argument("plan modulus differs from the context");
    validate_plan(x);
    ctx.advance_past(*x.root);
    return {x.root, eval_node(x.root, x.m)};
}

}  // namespace

Plan solve_outer_low(int n, const std::map<PQ, long long>& targets, PlannerContext& ctx) {
    return {ctx.m, solve_outer_low_impl(n, targets, ctx).node};
}

Plan outer_mid_lift(const Plan& x, int n, long long b, PlannerContext& ctx) {
    return {ctx.m, outer_mid_lift_impl(adopt(x, ctx), n, b, ctx).node};
}

Plan solve_outer(int n, const ResidueTargets& targets, PlannerContext& ctx) {
    return {ctx.m, solve_outer_impl(n, targets, ctx).node};
}

Plan asymmetric_blowup(const Plan& x, long long r, long long b, long long c,
                       PlannerContext& ctx) {
    return {ctx.m, asymmetric_blowup_impl(adopt(x, ctx), r, b, c, ctx).node};
}

Plan solve_second_outer(const Plan& x, const ResidueTargets& targets, PlannerContext& ctx) {
    return {ctx.m, solve_second_outer_impl(adopt(x, ctx), targets, ctx).node};
}

Plan solve_inner(const Plan& x, const ResidueTargets& targets, PlannerContext& ctx) {
    return {ctx.m, solve_inner_impl(adopt(x, ctx), targets, ctx).node};
}

Plan solve_full(int n, const ResidueTargets& targets, PlannerContext& ctx) {
    if (targets.m() != ctx.m) throw std::invalid_argument("targets modulus differs from the context");
    if (targets.n() != n) throw std::invalid_argument("targets dimension differs from n");
    ResidueTargets full(ctx.m, n);
    for (int p = 0; p <= n; ++p)
        for (int q = 0; q <= n; ++q) {
            if (p == 0 && q == 0) continue;
            auto v = targets.at(p, q);
            if (!v) v = targets.at(n - p, n - q);
            full.set(p, q, v.value_or(p == n && q == n ? 1 : 0));
        }
    Built outer = solve_outer_impl(n, full, ctx);
    return {ctx.m, solve_inner_impl(std::move(outer), full, ctx).node};
}

}  // namespace hodge
