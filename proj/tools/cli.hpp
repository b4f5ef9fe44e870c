#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hydeep::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command. `args` excludes the program name. Reports go to `out`
/// (or the --out file); diagnostics, warnings and the effective seed go to
/// `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace hydeep::cli
