#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rcxi::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // validation failure, unreadable input, failed required check
inline constexpr int kExitUsage = 2;

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace rcxi::cli
