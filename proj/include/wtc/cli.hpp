#pragma once

namespace wtc::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr unsigned long long kDefaultSeed = 20190101ULL;

/// Entry point of the `wtc` tool. Exit codes: 0 ok, 2 data/config error,
/// 3 convergence failure.
int run(int argc, char** argv);

}  // namespace wtc::cli
