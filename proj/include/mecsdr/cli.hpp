// Command-line front end: solve, oracle, bench, compare.
//
// Exit codes: 0 success, 1 usage or input error, 2 solver failure,
// 3 oracle request too large.

#ifndef MECSDR_CLI_HPP
#define MECSDR_CLI_HPP

#include <iosfwd>

namespace mecsdr {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitSolver = 2;
inline constexpr int kExitOracle = 3;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mecsdr

#endif  // MECSDR_CLI_HPP
