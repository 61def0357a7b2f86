#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tenspec/verify.hpp"

namespace tenspec::cli {

// Runs one command line (without the program name). Writes a single JSON
// document to `out`; usage text goes to `err`.
// Exit codes: 0 success, 1 domain or input error ({"error": ...} on `out`),
// 2 usage error. `verify` also returns 1 when any criterion fails.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// CLI half of criterion 10: every command's output must equal the in-process
// API result, and `verify` must print identical reports for identical seeds.
std::vector<verify::Check> cli_checks(std::uint64_t seed, double fraction);

}  // namespace tenspec::cli
