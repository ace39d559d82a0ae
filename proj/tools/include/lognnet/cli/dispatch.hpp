#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lognnet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

// Runs one command. `args` excludes the program name. Tables go to `out`
// (or --out files), diagnostics and progress to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, const char* const* argv);

} // namespace lognnet::cli
