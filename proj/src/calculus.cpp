#include "hodge/calculus.hpp"

#include <algorithm>

namespace hodge {

// ---------------------------------------------------------------------------
// Atoms

AtomSpec AtomSpec::projective_space(int k) {
    if (k < 0) throw std::invalid_argument("projective space needs k >= 0");
    return {AtomKind::projective_space, k};
}

AtomSpec AtomSpec::hypersurface(int d) {
    if (d < 3) throw std::invalid_argument("hypersurface atoms need degree >= 3");
    return {AtomKind::hypersurface, d};
}

int AtomSpec::dim() const {
    switch (kind) {
        case AtomKind::point: return 0;
        case AtomKind::projective_space: return param;
        case AtomKind::elliptic_curve: return 1;
        case AtomKind::serre_surface: return 2;
        case AtomKind::hypersurface: return param - 2;
    }
    throw std::logic_error("unreachable");
}

std::string AtomSpec::name() const {
    switch (kind) {
        case AtomKind::point: return "point";
        case AtomKind::projective_space: return "P" + std::to_string(param);
        case AtomKind::elliptic_curve: return "elliptic-curve";
        case AtomKind::serre_surface: return "serre-surface";
        case AtomKind::hypersurface: return "hypersurface(" + std::to_string(param) + ")";
    }
    throw std::logic_error("unreachable");
}

namespace {

std::optional<int> parse_uint(std::string_view s) {
    if (s.empty() || s.size() > 8) return std::nullopt;
    int v = 0;
    for (char ch : s) {
        if (ch < '0' || ch > '9') return std::nullopt;
        v = v * 10 + (ch - '0');
    }
    return v;
}

}  // namespace

AtomSpec AtomSpec::parse_name(std::string_view text) {
    if (text == "point") return point();
    if (text == "elliptic-curve") return elliptic_curve();
    if (text == "serre-surface") return serre_surface();
    if (text.size() >= 2 && text[0] == 'P') {
        if (auto k = parse_uint(text.substr(1))) return projective_space(*k);
    }
    constexpr std::string_view prefix = "hypersurface(";
    if (text.substr(0, prefix.size()) == prefix && text.back() == ')') {
        if (auto d = parse_uint(text.substr(prefix.size(), text.size() - prefix.size() - 1))) {
            if (*d >= 3) return hypersurface(*d);
        }
    }
    throw FormatError("unrecognized atom \"" + std::string(text) + "\"");
}

std::string unknown_name(const std::string& path, const std::string& role, PQ pq) {
    return "node:" + path + "/" + role + "/h" + std::to_string(pq.p) + "_" + std::to_string(pq.q);
}

SymPoly fresh_unknown(const std::string& path, const std::string& role, PQ pq) {
    return SymPoly::unknown(UnknownId::intern(unknown_name(path, role, pq)));
}

HodgeDiamond atom(const AtomSpec& spec, const std::string& path) {
    switch (spec.kind) {
        case AtomKind::point: return HodgeDiamond();
        case AtomKind::projective_space: {
            std::map<PQ, SymPoly> gen;
            for (int i = 0; i <= spec.param; ++i) gen.emplace(PQ{i, i}, SymPoly(1));
            return make_diamond(spec.param, gen);
        }
        case AtomKind::elliptic_curve:
            return make_diamond(1, {{{0, 0}, SymPoly(1)},
                                    {{1, 0}, SymPoly(1)},
                                    {{0, 1}, SymPoly(1)},
                                    {{1, 1}, SymPoly(1)}});
        case AtomKind::serre_surface:
            // h^{1,0} = 0 and h^{0,1} = 1 are forced; nothing else is, so the
            // remaining fundamental-domain entries stay symbolic.
            return make_diamond(2, {{{1, 0}, SymPoly(0)},
                                    {{0, 1}, SymPoly(1)},
                                    {{0, 2}, fresh_unknown(path, "atom", PQ{0, 2})},
                                    {{1, 1}, fresh_unknown(path, "atom", PQ{1, 1})}});
        case AtomKind::hypersurface: {
            // Only h^{0,0} and h^{n,0} = h^{0,n} = 1 are relied upon; every
            // other dual pair gets its own unknown.
            int n = spec.param - 2;
            std::map<PQ, SymPoly> gen;
            gen.emplace(PQ{0, 0}, SymPoly(1));
            gen.emplace(pair_rep(n, PQ{0, n}), SymPoly(1));
            for (int p = 0; p <= n; ++p)
                for (int q = 0; q <= n; ++q) {
                    PQ pq{p, q};
                    if (pair_rep(n, pq) != pq || gen.count(pq)) continue;
                    gen.emplace(pq, fresh_unknown(path, "atom", pq));
                }
            return make_diamond(n, gen);
        }
    }
    throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Products

HodgeDiamond kuenneth(const HodgeDiamond& x, const HodgeDiamond& y) {
    int nx = x.n(), ny = y.n(), n = nx + ny;
    std::vector<CellPtr> cells(static_cast<size_t>(n + 1) * (n + 1));
    auto slot = [&](PQ pq) -> CellPtr& {
        return cells[static_cast<size_t>(pq.p) * (n + 1) + pq.q];
    };
    for (int p = 0; p <= n; ++p)
        for (int q = 0; q <= n; ++q) {
            PQ pq{p, q};
            if (pair_rep(n, pq) != pq) continue;
            CellPtr c = PolyCell::defer([x, y, p, q, nx, ny] {
                SymPoly total;
                for (int p1 = std::max(0, p - ny); p1 <= std::min(p, nx); ++p1)
                    for (int q1 = std::max(0, q - ny); q1 <= std::min(q, nx); ++q1)
                        total += x.entry(p1, q1) * y.entry(p - p1, q - q1);
                return total;
            });
            slot(pq) = c;
            slot(dual_of(n, pq)) = c;
        }
    return HodgeDiamond::from_cells(n, std::move(cells));
}

HodgeDiamond power(const HodgeDiamond& x, int k) {
    if (k < 0) throw std::invalid_argument("power needs k >= 0");
    HodgeDiamond acc;
    for (int i = 0; i < k; ++i) acc = kuenneth(acc, x);
    return acc;
}

// ---------------------------------------------------------------------------
// Shifts and blowups

DiamondShift& DiamondShift::accumulate(const DiamondShift& other) {
    if (n != other.n)
        throw std::invalid_argument("cannot accumulate shifts of different dimensions");
    for (const auto& [pq, poly] : other.add) {
        SymPoly& slot = add[pq];
        slot += poly;
        if (slot.is_zero()) add.erase(pq);
    }
    return *this;
}

DiamondShift& DiamondShift::scale(const Int& k) {
    if (k == 0) {
        add.clear();
        return *this;
    }
    for (auto& [pq, poly] : add) poly = k * poly;
    return *this;
}

DiamondShift blowup_shift(const HodgeDiamond& z, int r) {
    if (r < 2) throw std::invalid_argument("blowup centres must have codimension >= 2");
    int nz = z.n();
    DiamondShift shift;
    shift.n = nz + r;
    for (int p = 1; p < shift.n; ++p)
        for (int q = 1; q < shift.n; ++q) {
            SymPoly inc;
            for (int i = 1; i <= r - 1; ++i) {
                if (p - i < 0 || q - i < 0 || p - i > nz || q - i > nz) continue;
                inc += z.entry(p - i, q - i);
            }
            if (!inc.is_zero()) shift.add.emplace(PQ{p, q}, std::move(inc));
        }
    return shift;
}

DiamondShift inner_unknown_shift(int n, const std::string& path, const std::string& role) {
    DiamondShift shift;
    shift.n = n;
    for (int p = 1; p < n; ++p)
        for (int q = 1; q < n; ++q) {
            PQ pq{p, q};
            PQ rep = pair_rep(n, pq);
            shift.add.emplace(pq, fresh_unknown(path, role, rep));
        }
    return shift;
}

HodgeDiamond apply_shift(const HodgeDiamond& x, const DiamondShift& s) {
    if (x.n() != s.n)
        throw std::invalid_argument("shift is for dimension " + std::to_string(s.n) +
                                    " but the diamond has dimension " + std::to_string(x.n()));
    int n = x.n();
    for (const auto& [pq, poly] : s.add) {
        if (pq.p < 1 || pq.q < 1 || pq.p > n - 1 || pq.q > n - 1)
            throw std::invalid_argument("shift touches a border position");
        auto dual = s.add.find(dual_of(n, pq));
        if (dual == s.add.end() || !(dual->second == poly))
            throw std::logic_error("shift is not duality-paired");
    }

    std::vector<CellPtr> cells(static_cast<size_t>(n + 1) * (n + 1));
    auto slot = [&](PQ pq) -> CellPtr& {
        return cells[static_cast<size_t>(pq.p) * (n + 1) + pq.q];
    };
    for (int p = 0; p <= n; ++p)
        for (int q = 0; q <= n; ++q) {
            PQ pq{p, q};
            if (pair_rep(n, pq) != pq) continue;
            CellPtr c;
            auto it = s.add.find(pq);
            if (it == s.add.end()) {
                c = x.cell(p, q);
            } else {
                c = PolyCell::defer(
                    [base = x.cell(p, q), inc = it->second] { return base->get() + inc; });
            }
            slot(pq) = c;
            slot(dual_of(n, pq)) = c;
        }
    return HodgeDiamond::from_cells(n, std::move(cells));
}

HodgeDiamond blowup(const HodgeDiamond& x, const HodgeDiamond& z) {
    int r = x.n() - z.n();
    if (r < 2) throw std::invalid_argument("blowup centres must have codimension >= 2");
    return apply_shift(x, blowup_shift(z, r));
}

// ---------------------------------------------------------------------------
// Sections

namespace {

// Shared skeleton of the two section kinds. `pin` holds the polynomial for
// the middle pair {(0,n),(n,0)} when the caller pins it; `diag_add` is the
// constant folded onto the copied diagonal.
HodgeDiamond section_diamond(const HodgeDiamond& x, const std::string& path,
                             const std::optional<SymPoly>& pin, long long diag_add) {
    if (x.n() < 1) throw std::invalid_argument("sections need dimension >= 1");
    int n = x.n() - 1;
    std::vector<CellPtr> cells(static_cast<size_t>(n + 1) * (n + 1));
    auto slot = [&](PQ pq) -> CellPtr& {
        return cells[static_cast<size_t>(pq.p) * (n + 1) + pq.q];
    };
    for (int p = 0; p <= n; ++p)
        for (int q = 0; q <= n; ++q) {
            PQ pq{p, q};
            if (p + q < n) {
                CellPtr c;
                if (p == q && p >= 1 && diag_add != 0)
                    c = PolyCell::defer([base = x.cell(p, q), diag_add] {
                        return base->get() + SymPoly(diag_add);
                    });
                else
                    c = x.cell(p, q);
                slot(pq) = c;
                slot(dual_of(n, pq)) = c;
            } else if (p + q == n && pair_rep(n, pq) == pq) {
                CellPtr c;
                if (pin && pq == PQ{0, n})
                    c = PolyCell::pure(*pin);
                else
                    c = PolyCell::pure(fresh_unknown(path, "mid", pq));
                slot(pq) = c;
                slot(dual_of(n, pq)) = c;
            }
        }
    return HodgeDiamond::from_cells(n, std::move(cells));
}

}  // namespace

HodgeDiamond lefschetz_section(const HodgeDiamond& x, const std::string& path) {
    return section_diamond(x, path, std::nullopt, 0);
}

std::pair<HodgeDiamond, ChiSectionMeta> chi_section(const HodgeDiamond& x, long long b,
                                                    long long m, const Assignment& sigma,
                                                    const std::string& path) {
    if (m < 2) throw std::invalid_argument("modulus must be >= 2");
    if (b < 0 || b >= m) throw std::invalid_argument("pinned residue must lie in [0,m)");
    if (x.n() < 1) throw std::invalid_argument("sections need dimension >= 1");
    int n = x.n() - 1;

    SymPoly pin = SymPoly(b) + Int(m) * fresh_unknown(path, "chi", PQ{0, n});
    HodgeDiamond out = section_diamond(x, path, pin, m);

    // Bookkeeping residues, read off the model values: the twist degree e
    // with chi(x, twist^{-1}) ≡ e, and the leftover r spent on blowing up
    // points before the section is taken.
    Int h0n = x.entry(0, n).eval(sigma);
    Int h0n1 = x.entry(0, n + 1).eval(sigma);
    Int chi = 0;
    for (int q = 0; q <= x.n(); ++q) {
        Int v = x.entry(0, q).eval(sigma);
        chi += (q % 2 == 0) ? v : -v;
    }
    Int e_raw = h0n - h0n1 - b;
    if (n % 2 == 1) e_raw = -e_raw;
    ChiSectionMeta meta;
    meta.e = mod_norm(e_raw, m);
    meta.r = mod_norm(chi - meta.e, m);
    return {out, meta};
}

}  // namespace hodge
