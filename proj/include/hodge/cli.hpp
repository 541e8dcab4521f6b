#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hodge {

// Everything the command-line front end needs, filled in from flags before
// any computation runs. Flags that a command does not use stay at their
// defaults and are ignored.
struct CliConfig {
    std::string command;  // solve | eval | verify | fuzz | atoms
    int n = -1;
    long long m = -1;
    std::string targets_path;
    std::string plan_path;
    std::string out_path;
    std::string assignment_path;
    uint64_t seed = 0;
    long long trials = 25;
    std::string atom_name;
    std::string format = "text";
};

// Runs the tool on argv-style arguments (program name excluded), writing
// results to `out` and diagnostics to `err`. Returns the process exit code:
// 0 on success / verified, 1 on verification failure, 2 on invalid input.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hodge
