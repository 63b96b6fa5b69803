#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fermirdm::cli {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

/// Runs the command line; args excludes the program name. Tables go to `out`
/// unless --output names a file, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fermirdm::cli
