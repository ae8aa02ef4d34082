#pragma once

#include <iosfwd>
#include <string_view>

namespace sparse_smooth::cli {

inline constexpr std::string_view kVersion = "1.0.0";

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;  // an asserted lemma check failed
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIncomplete = 3;   // some emitted certificate is incomplete

/// Parses argv and runs one subcommand. Results go to `out` (or --output),
/// diagnostics and usage to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sparse_smooth::cli
