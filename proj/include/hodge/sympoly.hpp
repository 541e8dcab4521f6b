#pragma once

#include <boost/container/small_vector.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hodge {

// Exact coefficient type.  Arbitrary precision: deep Kuenneth convolutions
// produce multinomial coefficients that can outgrow any fixed width.
using Int = boost::multiprecision::cpp_int;

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Interned name of an unknown Hodge number, e.g. "node:3/serre_surface/h1_1".
/// Interning is global and thread-safe; equality is index comparison.
class UnknownId {
public:
    /// Interns `path` (non-empty, no whitespace or braces) and returns its id.
    static UnknownId intern(std::string_view path);
    /// Recovers an id from its raw index.  The index must come from a live id.
    static UnknownId from_index(uint32_t idx);

    const std::string& path() const;
    uint32_t index() const { return idx_; }

    friend bool operator==(UnknownId a, UnknownId b) { return a.idx_ == b.idx_; }
    friend bool operator<(UnknownId a, UnknownId b) { return a.idx_ < b.idx_; }

private:
    explicit UnknownId(uint32_t idx) : idx_(idx) {}
    uint32_t idx_;
};

// A monomial is a multiset of unknowns, kept as sorted interned indices.
using Monomial = boost::container::small_vector<uint32_t, 4>;

/// Integer model for the unknowns.  Explicit values win; with a seed set,
/// absent unknowns get a stable pseudorandom value in [0, bound] derived from
/// the seed and the unknown's path (never from interning order); otherwise 0.
class Assignment {
public:
    Assignment() = default;
    static Assignment seeded(uint64_t seed, long long bound = 10);

    void set(UnknownId id, long long value);  // value must be >= 0
    long long value_of(UnknownId id) const;

    bool has_seed() const { return seed_.has_value(); }
    uint64_t seed() const { return seed_.value(); }
    long long bound() const { return bound_; }
    const std::map<uint32_t, long long>& explicit_values() const { return values_; }

private:
    std::map<uint32_t, long long> values_;
    std::optional<uint64_t> seed_;
    long long bound_ = 10;
};

/// Sparse multivariate polynomial with integer coefficients over unknown
/// Hodge numbers.  Canonical form: terms sorted by monomial, no zero
/// coefficients; equal polynomials compare equal regardless of how they
/// were built.
class SymPoly {
public:
    using Term = std::pair<Monomial, Int>;

    SymPoly() = default;  // zero
    SymPoly(long long c);
    explicit SymPoly(Int c);
    static SymPoly unknown(UnknownId id);
    static SymPoly term(Int coeff, Monomial mono);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    /// Constant term (0 if absent).
    Int constant_term() const;
    size_t term_count() const { return terms_.size(); }
    const std::vector<Term>& terms() const { return terms_; }

    SymPoly operator-() const;
    SymPoly& operator+=(const SymPoly& o);
    SymPoly& operator-=(const SymPoly& o);
    friend SymPoly operator+(SymPoly a, const SymPoly& b) { return a += b; }
    friend SymPoly operator-(SymPoly a, const SymPoly& b) { return a -= b; }
    friend SymPoly operator*(const SymPoly& a, const SymPoly& b);
    friend SymPoly operator*(const Int& k, const SymPoly& p);

    friend bool operator==(const SymPoly& a, const SymPoly& b) { return a.terms_ == b.terms_; }

    /// Exact value under the assignment.
    Int eval(const Assignment& a) const;

    /// If every non-constant coefficient is divisible by m, the residue of the
    /// constant term in [0, m); otherwise nullopt.  Certifies the value of the
    /// polynomial mod m independently of any assignment.
    std::optional<long long> const_mod(long long m) const;

    /// Canonical text, e.g. "6 + 3*u{node:3/serre_surface/h1_1}".  Terms are
    /// ordered lexicographically by unknown paths (constant first), factors
    /// within a term likewise; parse() inverts exactly.
    std::string to_string() const;
    static SymPoly parse(std::string_view text);

private:
    std::vector<Term> terms_;
    static SymPoly from_map(std::map<Monomial, Int>&& acc);
    friend struct SymPolyBuilder;
};

/// Normalizes v into [0, m).  m >= 2.
long long mod_norm(long long v, long long m);
long long mod_norm(const Int& v, long long m);

}  // namespace hodge
