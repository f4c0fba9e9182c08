#pragma once

// Command-line front end: sample, walk, certify, compare, bench.
// Exit codes: 0 success, 1 runtime error, 2 usage error.

#include <iosfwd>
#include <string>
#include <vector>

namespace dikin {

int run_cli(int argc, const char* const* argv);
/// Same, with explicit streams (tests).
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

/// min(requested, DIKIN_THREADS, hardware threads), at least 1.
unsigned worker_count(unsigned requested);

/// Parses "a..b" or "a,b,c" into integers.
std::vector<int> parse_int_list(const std::string& s);

}  // namespace dikin
