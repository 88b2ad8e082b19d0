#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace subgoal::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kUsage = 2;

// Runs one command line (without the program name). All output goes to the
// given streams so the whole tool can be driven from tests.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace subgoal::cli
