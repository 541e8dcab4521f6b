#include "hodge/sympoly.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace hodge {

// ---------------------------------------------------------------------------
// Unknown interning

namespace {

struct UnknownTable {
    std::shared_mutex mu;
    std::deque<std::string> paths;  // stable addresses
    std::unordered_map<std::string_view, uint32_t> index;

    static UnknownTable& instance() {
        static UnknownTable t;
        return t;
    }
};

void validate_path(std::string_view path) {
    if (path.empty()) throw FormatError("unknown path must be non-empty");
    for (char ch : path) {
        if (ch == '{' || ch == '}' || std::isspace(static_cast<unsigned char>(ch)))
            throw FormatError("unknown path contains forbidden character: '" + std::string(path) + "'");
    }
}

uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

UnknownId UnknownId::intern(std::string_view path) {
    validate_path(path);
    auto& t = UnknownTable::instance();
    {
        std::shared_lock lock(t.mu);
        auto it = t.index.find(path);
        if (it != t.index.end()) return UnknownId(it->second);
    }
    std::unique_lock lock(t.mu);
    auto it = t.index.find(path);
    if (it != t.index.end()) return UnknownId(it->second);
    uint32_t idx = static_cast<uint32_t>(t.paths.size());
    t.paths.emplace_back(path);
    t.index.emplace(t.paths.back(), idx);
    return UnknownId(idx);
}

UnknownId UnknownId::from_index(uint32_t idx) {
    auto& t = UnknownTable::instance();
    std::shared_lock lock(t.mu);
    if (idx >= t.paths.size()) throw std::out_of_range("unknown index out of range");
    return UnknownId(idx);
}

const std::string& UnknownId::path() const {
    auto& t = UnknownTable::instance();
    std::shared_lock lock(t.mu);
    return t.paths[idx_];
}

// ---------------------------------------------------------------------------
// Assignment

Assignment Assignment::seeded(uint64_t seed, long long bound) {
    if (bound < 0) throw std::invalid_argument("assignment bound must be >= 0");
    Assignment a;
    a.seed_ = seed;
    a.bound_ = bound;
    return a;
}

void Assignment::set(UnknownId id, long long value) {
    if (value < 0) throw std::invalid_argument("assignment values must be >= 0");
    values_[id.index()] = value;
}

long long Assignment::value_of(UnknownId id) const {
    auto it = values_.find(id.index());
    if (it != values_.end()) return it->second;
    if (!seed_) return 0;
    // Derived from the path, not the interning order, so values are stable
    // across processes and evaluation orders.
    uint64_t h = splitmix64(*seed_ ^ fnv1a64(id.path()));
    return static_cast<long long>(h % static_cast<uint64_t>(bound_ + 1));
}

// ---------------------------------------------------------------------------
// SymPoly

SymPoly::SymPoly(long long c) {
    if (c != 0) terms_.emplace_back(Monomial{}, Int(c));
}

SymPoly::SymPoly(Int c) {
    if (c != 0) terms_.emplace_back(Monomial{}, std::move(c));
}

SymPoly SymPoly::unknown(UnknownId id) {
    SymPoly p;
    p.terms_.emplace_back(Monomial{id.index()}, Int(1));
    return p;
}

SymPoly SymPoly::term(Int coeff, Monomial mono) {
    SymPoly p;
    if (coeff != 0) {
        std::sort(mono.begin(), mono.end());
        p.terms_.emplace_back(std::move(mono), std::move(coeff));
    }
    return p;
}

bool SymPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].first.empty());
}

Int SymPoly::constant_term() const {
    if (!terms_.empty() && terms_[0].first.empty()) return terms_[0].second;
    return Int(0);
}

SymPoly SymPoly::operator-() const {
    SymPoly r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

namespace {

// Merges two canonical term lists with coefficient combiner sign.
std::vector<SymPoly::Term> merge_terms(const std::vector<SymPoly::Term>& a,
                                       const std::vector<SymPoly::Term>& b, int sign) {
    std::vector<SymPoly::Term> out;
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.push_back(b[j]);
            if (sign < 0) out.back().second = -out.back().second;
            ++j;
        } else {
            Int c = sign < 0 ? Int(a[i].second - b[j].second) : Int(a[i].second + b[j].second);
            if (c != 0) out.emplace_back(a[i].first, std::move(c));
            ++i;
            ++j;
        }
    }
    return out;
}

struct MonomialHash {
    size_t operator()(const Monomial& m) const {
        uint64_t h = 1469598103934665603ull;
        for (uint32_t v : m) {
            h ^= v;
            h *= 1099511628211ull;
        }
        return static_cast<size_t>(h);
    }
};

Monomial merge_monomials(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

SymPoly& SymPoly::operator+=(const SymPoly& o) {
    terms_ = merge_terms(terms_, o.terms_, +1);
    return *this;
}

SymPoly& SymPoly::operator-=(const SymPoly& o) {
    terms_ = merge_terms(terms_, o.terms_, -1);
    return *this;
}

SymPoly operator*(const SymPoly& a, const SymPoly& b) {
    if (a.is_zero() || b.is_zero()) return SymPoly();
    // Multiplying by a constant keeps the monomial layout: fast path.
    if (a.is_constant()) return a.terms_[0].second * b;
    if (b.is_constant()) return b.terms_[0].second * a;

    std::unordered_map<Monomial, Int, MonomialHash> acc;
    acc.reserve(a.terms_.size() * b.terms_.size() / 2 + 4);
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) {
            acc[merge_monomials(ma, mb)] += ca * cb;
        }
    std::vector<SymPoly::Term> out;
    out.reserve(acc.size());
    for (auto& [m, c] : acc)
        if (c != 0) out.emplace_back(m, std::move(c));
    std::sort(out.begin(), out.end(),
              [](const SymPoly::Term& x, const SymPoly::Term& y) { return x.first < y.first; });
    SymPoly r;
    r.terms_ = std::move(out);
    return r;
}

SymPoly operator*(const Int& k, const SymPoly& p) {
    if (k == 0) return SymPoly();
    SymPoly r = p;
    for (auto& [m, c] : r.terms_) c *= k;
    return r;
}

Int SymPoly::eval(const Assignment& a) const {
    Int total = 0;
    std::unordered_map<uint32_t, long long> cache;
    for (const auto& [mono, coeff] : terms_) {
        Int term = coeff;
        bool zero = false;
        for (size_t i = 0; i < mono.size() && !zero;) {
            uint32_t idx = mono[i];
            size_t j = i;
            while (j < mono.size() && mono[j] == idx) ++j;
            auto it = cache.find(idx);
            long long v;
            if (it != cache.end()) {
                v = it->second;
            } else {
                v = a.value_of(UnknownId::from_index(idx));
                cache.emplace(idx, v);
            }
            if (v == 0) {
                zero = true;
                break;
            }
            for (size_t rep = i; rep < j; ++rep) term *= v;
            i = j;
        }
        if (!zero) total += term;
    }
    return total;
}

std::optional<long long> SymPoly::const_mod(long long m) const {
    if (m < 2) throw std::invalid_argument("modulus must be >= 2");
    long long r = 0;
    for (const auto& [mono, coeff] : terms_) {
        if (mono.empty())
            r = mod_norm(coeff, m);
        else if (coeff % m != 0)
            return std::nullopt;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Text form

namespace {

// Path-based factor view used for the deterministic printing order.
std::vector<const std::string*> monomial_paths(const Monomial& m) {
    std::vector<const std::string*> v;
    v.reserve(m.size());
    for (uint32_t idx : m) v.push_back(&UnknownId::from_index(idx).path());
    std::sort(v.begin(), v.end(), [](const std::string* a, const std::string* b) { return *a < *b; });
    return v;
}

bool paths_less(const std::vector<const std::string*>& a, const std::vector<const std::string*>& b) {
    return std::lexicographical_compare(
        a.begin(), a.end(), b.begin(), b.end(),
        [](const std::string* x, const std::string* y) { return *x < *y; });
}

std::string render_factors(const std::vector<const std::string*>& paths) {
    std::string out;
    for (size_t i = 0; i < paths.size();) {
        size_t j = i;
        while (j < paths.size() && *paths[j] == *paths[i]) ++j;
        if (!out.empty()) out += '*';
        out += "u{" + *paths[i] + "}";
        if (j - i > 1) out += "^" + std::to_string(j - i);
        i = j;
    }
    return out;
}

}  // namespace

std::string SymPoly::to_string() const {
    if (terms_.empty()) return "0";
    struct Printed {
        std::vector<const std::string*> paths;
        const Int* coeff;
    };
    std::vector<Printed> items;
    items.reserve(terms_.size());
    for (const auto& [m, c] : terms_) items.push_back({monomial_paths(m), &c});
    std::sort(items.begin(), items.end(),
              [](const Printed& x, const Printed& y) { return paths_less(x.paths, y.paths); });

    std::string out;
    for (size_t i = 0; i < items.size(); ++i) {
        const Int& c = *items[i].coeff;
        bool neg = c < 0;
        Int mag = neg ? Int(-c) : c;
        if (i == 0)
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        if (items[i].paths.empty()) {
            out += mag.str();
        } else {
            if (mag != 1) out += mag.str() + "*";
            out += render_factors(items[i].paths);
        }
    }
    return out;
}

namespace {

struct Parser {
    std::string_view s;
    size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw FormatError("polynomial parse error at offset " + std::to_string(pos) + ": " + what);
    }
    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() const { return s[pos]; }

    Int parse_integer() {
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) fail("expected integer");
        return Int(std::string(s.substr(start, pos - start)));
    }

    // factor := "u{" path "}" ("^" uint)?   pushed into mono
    void parse_unknown(Monomial& mono) {
        if (s.compare(pos, 2, "u{") != 0) fail("expected 'u{'");
        pos += 2;
        size_t close = s.find('}', pos);
        if (close == std::string_view::npos) fail("unterminated unknown");
        UnknownId id = UnknownId::intern(s.substr(pos, close - pos));
        pos = close + 1;
        unsigned long exp = 1;
        if (pos < s.size() && s[pos] == '^') {
            ++pos;
            size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (pos == start) fail("expected exponent");
            exp = std::stoul(std::string(s.substr(start, pos - start)));
            if (exp == 0) fail("zero exponent");
        }
        for (unsigned long i = 0; i < exp; ++i) mono.push_back(id.index());
    }

    // term := factor ('*' factor)* where factor is an integer or an unknown
    void parse_term(std::map<Monomial, Int>& acc, bool negative) {
        Int coeff = negative ? -1 : 1;
        Monomial mono;
        while (true) {
            skip_ws();
            if (pos < s.size() && std::isdigit(static_cast<unsigned char>(peek())))
                coeff *= parse_integer();
            else if (pos < s.size() && peek() == 'u')
                parse_unknown(mono);
            else
                fail("expected integer or unknown factor");
            skip_ws();
            if (pos < s.size() && peek() == '*') {
                ++pos;
                continue;
            }
            break;
        }
        std::sort(mono.begin(), mono.end());
        acc[std::move(mono)] += coeff;
    }
};

}  // namespace

SymPoly SymPoly::from_map(std::map<Monomial, Int>&& acc) {
    SymPoly p;
    p.terms_.reserve(acc.size());
    for (auto& [m, c] : acc)
        if (c != 0) p.terms_.emplace_back(m, std::move(c));
    // std::map iterates in Monomial order, which is the canonical term order.
    return p;
}

SymPoly SymPoly::parse(std::string_view text) {
    Parser pr{text};
    std::map<Monomial, Int> acc;
    if (pr.eof()) throw FormatError("empty polynomial text");
    bool neg = false;
    if (pr.peek() == '-') {
        neg = true;
        ++pr.pos;
    }
    pr.parse_term(acc, neg);
    while (!pr.eof()) {
        char op = pr.peek();
        if (op != '+' && op != '-') pr.fail("expected '+' or '-'");
        ++pr.pos;
        pr.parse_term(acc, op == '-');
    }
    return from_map(std::move(acc));
}

// ---------------------------------------------------------------------------

long long mod_norm(long long v, long long m) {
    if (m < 2) throw std::invalid_argument("modulus must be >= 2");
    long long r = v % m;
    return r < 0 ? r + m : r;
}

long long mod_norm(const Int& v, long long m) {
    if (m < 2) throw std::invalid_argument("modulus must be >= 2");
    Int r = v % m;
    if (r < 0) r += m;
    return r.convert_to<long long>();
}

}  // namespace hodge
