#pragma once

namespace irsense::cli {

// Exit codes: 0 success, 2 config/usage error, 3 data/parse error, 4 internal.
inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 2;
inline constexpr int exit_data = 3;
inline constexpr int exit_internal = 4;

int run(int argc, const char* const* argv);

}  // namespace irsense::cli
