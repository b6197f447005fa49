#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dmlst {

// exit codes: 0 solved, 1 usage/other error, 2 infeasible, 3 parse error, 4 timeout
inline constexpr int kExitSolved = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitParse = 3;
inline constexpr int kExitTimeout = 4;

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dmlst
