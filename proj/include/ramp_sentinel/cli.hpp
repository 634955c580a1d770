#pragma once
// Command-line front end. Exit codes: 0 success, 1 parse/validation error,
// 2 infeasible design (design command only), 3 runtime error.

#include <span>
#include <string>

namespace ramp {

[[nodiscard]] int run_cli(int argc, const char* const* argv);

// Convenience overload for in-process tests; args[0] is the program name.
[[nodiscard]] int run_cli(std::span<const std::string> args);

} // namespace ramp
