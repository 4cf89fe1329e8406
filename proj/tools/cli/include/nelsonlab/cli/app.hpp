#pragma once

#include <iosfwd>

namespace nelsonlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitGuard = 3;

// Entry point of the nelsonlab tool:
//   nelsonlab [run|validate] [--config PATH] [--experiment NAME] [--seed N]
//             [--threads N] [--out DIR] [--list] [--validate]
// Flags override values from the config file. Without a subcommand the tool runs.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nelsonlab::cli
