#pragma once

#include <string>
#include <vector>

namespace hodge {

// One targeted entry: expected vs computed residue, plus whether the entry's
// polynomial is constant mod m (so the match holds under every assignment).
struct EntryCheck {
    int p = 0;
    int q = 0;
    long long expected = 0;
    long long got = 0;
    bool certified = false;

    bool matches() const { return expected == got; }
};

struct AuditCheck {
    std::string name;
    bool pass = false;
    std::string detail;  // offending location on failure, a short tally otherwise
};

struct VerificationReport {
    std::vector<EntryCheck> entries;
    std::vector<AuditCheck> audits;

    bool pass() const;
    std::string to_json() const;
};

}  // namespace hodge
