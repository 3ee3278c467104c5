#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace specdist::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumeric = 2;

// Runs one subcommand. `args` excludes the program name. Reports go to the
// --out file when given, otherwise to `out`; diagnostics go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace specdist::cli
