#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace radex::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFault = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line; output goes to `out` (or --output), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

/// 12 significant digits; infinities as inf/-inf (json) or INF/-INF (csv).
std::string format_number(double v, bool csv);

}  // namespace radex::cli
