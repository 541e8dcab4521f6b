#pragma once

#include "hodge/report.hpp"
#include "hodge/sympoly.hpp"

#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

namespace hodge {

struct PQ {
    int p = 0;
    int q = 0;

    friend bool operator==(const PQ&, const PQ&) = default;
    friend auto operator<=>(const PQ&, const PQ&) = default;
};

inline PQ dual_of(int n, PQ pq) { return PQ{n - pq.p, n - pq.q}; }

// Canonical representative of the dual pair {(p,q), (n-p,n-q)}.
inline PQ pair_rep(int n, PQ pq) {
    PQ d = dual_of(n, pq);
    return d < pq ? d : pq;
}

// A memoized polynomial slot. Entries of large product diamonds are only
// materialized when read; duality-related positions share one cell, which
// makes the duality invariant a fact about pointers rather than a recomputed
// polynomial identity.
class PolyCell {
  public:
    static std::shared_ptr<const PolyCell> pure(SymPoly value);
    static std::shared_ptr<const PolyCell> defer(std::function<SymPoly()> thunk);

    const SymPoly& get() const;

    PolyCell(const PolyCell&) = delete;
    PolyCell& operator=(const PolyCell&) = delete;

  private:
    PolyCell() = default;

    mutable std::once_flag once_;
    mutable std::optional<SymPoly> value_;
    mutable std::function<SymPoly()> thunk_;
};

using CellPtr = std::shared_ptr<const PolyCell>;

// An (n+1)x(n+1) grid of polynomials with h^{0,0} = 1 and Serre duality
// h^{p,q} = h^{n-p,n-q} holding identically. Hodge symmetry is deliberately
// not part of the contract. Copies share the underlying grid.
class HodgeDiamond {
  public:
    HodgeDiamond();  // the point: n = 0, single entry 1

    int n() const { return n_; }
    const SymPoly& entry(int p, int q) const { return cell(p, q)->get(); }
    const CellPtr& cell(int p, int q) const;

    // Grid handed over row-major by p; positions of a dual pair may (and for
    // combinator outputs do) hold the same cell. Callers are responsible for
    // the diamond invariants.
    static HodgeDiamond from_cells(int n, std::vector<CellPtr> cells);

  private:
    int n_;
    std::shared_ptr<const std::vector<CellPtr>> cells_;
};

// Builds a diamond from values on a fundamental domain of the duality
// involution; missing positions default to 0 (to 1 at (0,0)) and dual
// positions are filled by sharing. Conflicting dual values are an error.
HodgeDiamond make_diamond(int n, const std::map<PQ, SymPoly>& generator);

// True iff every entry of a - b is constant mod m with residue 0.
bool diamond_equals_mod(const HodgeDiamond& a, const HodgeDiamond& b, long long m);

std::vector<std::vector<Int>> eval_diamond(const HodgeDiamond& d, const Assignment& sigma);

// Classical rotated layout (rows p+q = 0..2n), for humans.
std::string render_rotated(const HodgeDiamond& d);
// Same layout over arbitrary per-entry strings; cells is indexed [p][q].
std::string render_rotated(int n, const std::vector<std::vector<std::string>>& cells);
// Tab-separated (n+1)x(n+1) grid, row p per line, for machine diffing.
std::string render_grid(const HodgeDiamond& d);

// A partial system of congruence targets h^{p,q} ≡ r (mod m).
class ResidueTargets {
  public:
    ResidueTargets(long long m, int n);

    long long m() const { return m_; }
    int n() const { return n_; }

    // Rejects out-of-range positions and residues, (0,0) targets other than
    // 1, and values conflicting with an already-set dual position.
    void set(int p, int q, long long residue);
    std::optional<long long> at(int p, int q) const;
    bool contains(int p, int q) const { return at(p, q).has_value(); }
    const std::map<PQ, long long>& entries() const { return entries_; }

    // The outer index set {(1,0),...,(n,0),(0,1),...,(0,n)}.
    static std::vector<PQ> j_set(int n);
    // The inner cross {(1,q) : 1 <= q <= n-1} ∪ {(p,1) : 1 <= p <= n-1}.
    static std::vector<PQ> i_set(int n);

    static ResidueTargets from_json(std::string_view text);
    std::string to_json() const;

  private:
    long long m_;
    int n_;
    std::map<PQ, long long> entries_;
};

// Evaluates each targeted entry under sigma, compares residues, and records
// whether the entry is certified assignment-independent by const_mod.
VerificationReport check_targets(const HodgeDiamond& d, const ResidueTargets& t,
                                 const Assignment& sigma);

}  // namespace hodge
