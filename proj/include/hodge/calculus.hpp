#pragma once

#include "hodge/diamond.hpp"

#include <string>
#include <utility>

namespace hodge {

enum class AtomKind { point, projective_space, elliptic_curve, serre_surface, hypersurface };

// The building-block varieties. hypersurface(d) is a smooth degree-d
// hypersurface in P^{d-1}, of dimension d-2.
struct AtomSpec {
    AtomKind kind = AtomKind::point;
    int param = 0;  // k for projective_space, d for hypersurface

    static AtomSpec point() { return {AtomKind::point, 0}; }
    static AtomSpec projective_space(int k);
    static AtomSpec elliptic_curve() { return {AtomKind::elliptic_curve, 0}; }
    static AtomSpec serre_surface() { return {AtomKind::serre_surface, 0}; }
    static AtomSpec hypersurface(int d);

    int dim() const;
    std::string name() const;
    static AtomSpec parse_name(std::string_view text);

    friend bool operator==(const AtomSpec&, const AtomSpec&) = default;
};

// Canonical name for the unknown filling position (p,q) of node `path`;
// role distinguishes unknown families within one node.
std::string unknown_name(const std::string& path, const std::string& role, PQ pq);

SymPoly fresh_unknown(const std::string& path, const std::string& role, PQ pq);

// Diamond of a building block; fresh unknowns are named from `path`.
HodgeDiamond atom(const AtomSpec& spec, const std::string& path);

// Product diamond: the convolution h^{p,q} = Σ h^{p1,q1}(x)·h^{p2,q2}(y)
// over p1+p2=p, q1+q2=q. Entries are computed on first read.
HodgeDiamond kuenneth(const HodgeDiamond& x, const HodgeDiamond& y);

// k-fold product; k = 0 gives the point.
HodgeDiamond power(const HodgeDiamond& x, int k);

// An additive correction to a dimension-n diamond. Values come in dual
// pairs (equal at (p,q) and (n-p,n-q)) so applying one preserves duality.
struct DiamondShift {
    int n = 0;
    std::map<PQ, SymPoly> add;  // nonzero increments only

    DiamondShift& accumulate(const DiamondShift& other);
    DiamondShift& scale(const Int& k);
};

// The effect of blowing up a centre z of codimension r:
// increment[p][q] = Σ_{i=1}^{r-1} h^{p-i,q-i}(z), supported in 1 ≤ p,q ≤ n-1.
DiamondShift blowup_shift(const HodgeDiamond& z, int r);

// Fresh duality-paired unknowns on the strictly inner positions of a
// dimension-n diamond: the opaque bookkeeping increments.
DiamondShift inner_unknown_shift(int n, const std::string& path, const std::string& role);

// x with the shift added; untouched positions share x's cells.
HodgeDiamond apply_shift(const HodgeDiamond& x, const DiamondShift& s);

// Blowup of x along z (codimension dim x - dim z >= 2). Outer entries are
// the same polynomials as x's.
HodgeDiamond blowup(const HodgeDiamond& x, const HodgeDiamond& z);

// A very ample hyperplane section: dimension drops by one, entries with
// p+q <= n-1 are copied, the middle row gets one fresh unknown per dual
// pair, and everything above the middle follows by duality.
HodgeDiamond lefschetz_section(const HodgeDiamond& x, const std::string& path);

struct ChiSectionMeta {
    long long e = 0;  // twist degree residue steering chi of the section
    long long r = 0;  // residue of chi(O) spent on the point pre-blowup
};

// A section chosen so that h^{0,n} ≡ b (mod m): the middle pair {(0,n),(n,0)}
// is pinned to b + m·u. The m-point pre-blowup that tunes chi(O) is folded
// in as +m on the copied diagonal. Metadata records the bookkeeping residues
// computed from model values under sigma.
std::pair<HodgeDiamond, ChiSectionMeta> chi_section(const HodgeDiamond& x, long long b,
                                                    long long m, const Assignment& sigma,
                                                    const std::string& path);

}  // namespace hodge
