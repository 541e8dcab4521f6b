#include "hodge/diamond.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdio>

namespace hodge {

// ---------------------------------------------------------------------------
// PolyCell

CellPtr PolyCell::pure(SymPoly value) {
    auto c = std::shared_ptr<PolyCell>(new PolyCell());
    c->value_.emplace(std::move(value));
    return c;
}

CellPtr PolyCell::defer(std::function<SymPoly()> thunk) {
    if (!thunk) throw std::invalid_argument("deferred cell needs a thunk");
    auto c = std::shared_ptr<PolyCell>(new PolyCell());
    c->thunk_ = std::move(thunk);
    return c;
}

const SymPoly& PolyCell::get() const {
    std::call_once(once_, [this] {
        if (thunk_) {
            value_.emplace(thunk_());
            thunk_ = nullptr;  // release captured inputs
        }
    });
    return *value_;
}

// ---------------------------------------------------------------------------
// HodgeDiamond

HodgeDiamond::HodgeDiamond() : n_(0) {
    cells_ = std::make_shared<const std::vector<CellPtr>>(
        std::vector<CellPtr>{PolyCell::pure(SymPoly(1))});
}

const CellPtr& HodgeDiamond::cell(int p, int q) const {
    if (p < 0 || q < 0 || p > n_ || q > n_)
        throw std::out_of_range("diamond entry (" + std::to_string(p) + "," + std::to_string(q) +
                                ") out of range for dimension " + std::to_string(n_));
    return (*cells_)[static_cast<size_t>(p) * (n_ + 1) + q];
}

HodgeDiamond HodgeDiamond::from_cells(int n, std::vector<CellPtr> cells) {
    if (n < 0) throw std::invalid_argument("diamond dimension must be >= 0");
    size_t want = static_cast<size_t>(n + 1) * (n + 1);
    if (cells.size() != want) throw std::invalid_argument("diamond grid has wrong size");
    for (const auto& c : cells)
        if (!c) throw std::invalid_argument("diamond grid has an empty cell");
    HodgeDiamond d;
    d.n_ = n;
    d.cells_ = std::make_shared<const std::vector<CellPtr>>(std::move(cells));
    return d;
}

HodgeDiamond make_diamond(int n, const std::map<PQ, SymPoly>& generator) {
    if (n < 0) throw std::invalid_argument("diamond dimension must be >= 0");
    std::map<PQ, SymPoly> reps;
    for (const auto& [pq, poly] : generator) {
        if (pq.p < 0 || pq.q < 0 || pq.p > n || pq.q > n)
            throw FormatError("generator position (" + std::to_string(pq.p) + "," +
                              std::to_string(pq.q) + ") out of range for dimension " +
                              std::to_string(n));
        PQ rep = pair_rep(n, pq);
        auto [it, fresh] = reps.emplace(rep, poly);
        if (!fresh && !(it->second == poly))
            throw FormatError("conflicting values for the dual pair (" + std::to_string(pq.p) +
                              "," + std::to_string(pq.q) + ") ~ (" + std::to_string(n - pq.p) +
                              "," + std::to_string(n - pq.q) + ")");
    }
    {
        auto it = reps.find(PQ{0, 0});
        if (it != reps.end() && !(it->second == SymPoly(1)))
            throw FormatError("h^{0,0} must be 1");
    }

    std::vector<CellPtr> cells(static_cast<size_t>(n + 1) * (n + 1));
    auto slot = [&](PQ pq) -> CellPtr& {
        return cells[static_cast<size_t>(pq.p) * (n + 1) + pq.q];
    };
    for (int p = 0; p <= n; ++p)
        for (int q = 0; q <= n; ++q) {
            PQ pq{p, q};
            if (pair_rep(n, pq) != pq) continue;
            SymPoly value;
            if (auto it = reps.find(pq); it != reps.end())
                value = it->second;
            else if (pq == PQ{0, 0})
                value = SymPoly(1);
            CellPtr c = PolyCell::pure(std::move(value));
            slot(pq) = c;
            slot(dual_of(n, pq)) = c;
        }
    return HodgeDiamond::from_cells(n, std::move(cells));
}

bool diamond_equals_mod(const HodgeDiamond& a, const HodgeDiamond& b, long long m) {
    if (a.n() != b.n())
        throw std::invalid_argument("cannot compare diamonds of dimensions " +
                                    std::to_string(a.n()) + " and " + std::to_string(b.n()));
    int n = a.n();
    for (int p = 0; p <= n; ++p)
        for (int q = 0; q <= n; ++q) {
            if (pair_rep(n, PQ{p, q}) != PQ{p, q}) continue;
            if (a.cell(p, q) == b.cell(p, q)) continue;
            SymPoly diff = a.entry(p, q) - b.entry(p, q);
            auto r = diff.const_mod(m);
            if (!r || *r != 0) return false;
        }
    return true;
}

std::vector<std::vector<Int>> eval_diamond(const HodgeDiamond& d, const Assignment& sigma) {
    std::vector<std::vector<Int>> grid(d.n() + 1, std::vector<Int>(d.n() + 1));
    for (int p = 0; p <= d.n(); ++p)
        for (int q = 0; q <= d.n(); ++q) grid[p][q] = d.entry(p, q).eval(sigma);
    return grid;
}

std::string render_rotated(const HodgeDiamond& d) {
    int n = d.n();
    std::vector<std::vector<std::string>> cells(n + 1, std::vector<std::string>(n + 1));
    for (int p = 0; p <= n; ++p)
        for (int q = 0; q <= n; ++q) cells[p][q] = d.entry(p, q).to_string();
    return render_rotated(n, cells);
}

std::string render_rotated(int n, const std::vector<std::vector<std::string>>& cells) {
    size_t w = 1;
    std::vector<std::vector<std::string>> rows;
    for (int k = 0; k <= 2 * n; ++k) {
        std::vector<std::string> row;
        for (int p = std::min(k, n); p >= std::max(0, k - n); --p) {
            row.push_back(cells[p][k - p]);
            w = std::max(w, row.back().size());
        }
        rows.push_back(std::move(row));
    }
    auto pad_center = [&](const std::string& s, size_t width) {
        size_t left = (width - s.size()) / 2;
        return std::string(left, ' ') + s + std::string(width - s.size() - left, ' ');
    };
    size_t full = (n + 1) * w + n * 2;  // width of the middle row
    std::string out;
    for (const auto& row : rows) {
        std::string line;
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) line += "  ";
            line += pad_center(row[i], w);
        }
        size_t lead = (full - line.size()) / 2;
        line.insert(0, std::string(lead, ' '));
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line;
        out += '\n';
    }
    return out;
}

std::string render_grid(const HodgeDiamond& d) {
    std::string out;
    for (int p = 0; p <= d.n(); ++p) {
        for (int q = 0; q <= d.n(); ++q) {
            if (q) out += '\t';
            out += d.entry(p, q).to_string();
        }
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// ResidueTargets

ResidueTargets::ResidueTargets(long long m, int n) : m_(m), n_(n) {
    if (m < 2) throw FormatError("target modulus must be >= 2");
    if (n < 0) throw FormatError("target dimension must be >= 0");
}

void ResidueTargets::set(int p, int q, long long residue) {
    if (p < 0 || q < 0 || p > n_ || q > n_)
        throw FormatError("target position (" + std::to_string(p) + "," + std::to_string(q) +
                          ") out of range for dimension " + std::to_string(n_));
    if (residue < 0 || residue >= m_)
        throw FormatError("target residue " + std::to_string(residue) + " outside [0," +
                          std::to_string(m_) + ")");
    if (((p == 0 && q == 0) || (p == n_ && q == n_)) && residue != 1)
        throw FormatError("target for (" + std::to_string(p) + "," + std::to_string(q) +
                          ") must be 1: the corner entry is pinned");
    PQ pq{p, q};
    PQ d = dual_of(n_, pq);
    for (PQ at : {pq, d}) {
        auto it = entries_.find(at);
        if (it != entries_.end() && it->second != residue)
            throw FormatError("target for (" + std::to_string(p) + "," + std::to_string(q) +
                              ") conflicts with its dual (" + std::to_string(d.p) + "," +
                              std::to_string(d.q) + ")");
    }
    entries_[pq] = residue;
}

std::optional<long long> ResidueTargets::at(int p, int q) const {
    auto it = entries_.find(PQ{p, q});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::vector<PQ> ResidueTargets::j_set(int n) {
    std::vector<PQ> out;
    for (int p = 1; p <= n; ++p) out.push_back(PQ{p, 0});
    for (int q = 1; q <= n; ++q) out.push_back(PQ{0, q});
    return out;
}

std::vector<PQ> ResidueTargets::i_set(int n) {
    std::vector<PQ> out;
    for (int q = 1; q <= n - 1; ++q) out.push_back(PQ{1, q});
    for (int p = 2; p <= n - 1; ++p) out.push_back(PQ{p, 1});
    return out;
}

ResidueTargets ResidueTargets::from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("targets JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("m") || !j.contains("n"))
        throw FormatError("targets JSON must be an object with \"m\" and \"n\"");
    if (!j["m"].is_number_integer() || !j["n"].is_number_integer())
        throw FormatError("targets \"m\" and \"n\" must be integers");
    ResidueTargets t(j["m"].get<long long>(), j["n"].get<int>());
    if (j.contains("entries")) {
        if (!j["entries"].is_object()) throw FormatError("targets \"entries\" must be an object");
        for (const auto& [key, val] : j["entries"].items()) {
            int p = 0, q = 0;
            char extra = 0;
            if (std::sscanf(key.c_str(), "%d,%d%c", &p, &q, &extra) != 2)
                throw FormatError("targets entry \"" + key + "\": key must look like \"p,q\"");
            if (!val.is_number_integer())
                throw FormatError("targets entry \"" + key + "\": value must be an integer");
            try {
                t.set(p, q, val.get<long long>());
            } catch (const FormatError& e) {
                throw FormatError("targets entry \"" + key + "\": " + e.what());
            }
        }
    }
    return t;
}

std::string ResidueTargets::to_json() const {
    nlohmann::ordered_json j;
    j["m"] = m_;
    j["n"] = n_;
    auto& entries = j["entries"] = nlohmann::ordered_json::object();
    for (const auto& [pq, r] : entries_)
        entries[std::to_string(pq.p) + "," + std::to_string(pq.q)] = r;
    return j.dump();
}

// ---------------------------------------------------------------------------
// Reports and target checking

bool VerificationReport::pass() const {
    for (const auto& e : entries)
        if (!e.matches()) return false;
    for (const auto& a : audits)
        if (!a.pass) return false;
    return true;
}

std::string VerificationReport::to_json() const {
    nlohmann::ordered_json j;
    j["pass"] = pass();
    auto& es = j["entries"] = nlohmann::ordered_json::array();
    for (const auto& e : entries) {
        nlohmann::ordered_json je;
        je["p"] = e.p;
        je["q"] = e.q;
        je["expected"] = e.expected;
        je["got"] = e.got;
        je["certified"] = e.certified;
        es.push_back(std::move(je));
    }
    auto& as = j["audits"] = nlohmann::ordered_json::array();
    for (const auto& a : audits) {
        nlohmann::ordered_json ja;
        ja["name"] = a.name;
        ja["pass"] = a.pass;
        ja["detail"] = a.detail;
        as.push_back(std::move(ja));
    }
    return j.dump(2);
}

VerificationReport check_targets(const HodgeDiamond& d, const ResidueTargets& t,
                                 const Assignment& sigma) {
    if (d.n() != t.n())
        throw std::invalid_argument("targets are for dimension " + std::to_string(t.n()) +
                                    " but the diamond has dimension " + std::to_string(d.n()));
    VerificationReport report;
    for (const auto& [pq, expected] : t.entries()) {
        const SymPoly& entry = d.entry(pq.p, pq.q);
        EntryCheck c;
        c.p = pq.p;
        c.q = pq.q;
        c.expected = expected;
        c.got = mod_norm(entry.eval(sigma), t.m());
        c.certified = entry.const_mod(t.m()).has_value();
        report.entries.push_back(c);
    }
    return report;
}

}  // namespace hodge
