#pragma once

// Command-line front end: verify, build, fisher, simulate, sweep.
//
// Exit codes: 0 pass/success, 1 check failed, 2 usage or parse error,
// 3 numerical failure. Machine-readable output goes to `out` (or --out);
// diagnostics go to `err`.

#include <ostream>
#include <string>
#include <vector>

namespace ufsym::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ufsym::cli
