#pragma once

#include <iosfwd>

namespace minres::cli {

// Exit codes: 0 success, 1 usage, 2 no root or outside the validity range, 3 failed checks,
// 4 unexpected failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidity = 2;
inline constexpr int kExitCheckFailed = 3;
inline constexpr int kExitInternal = 4;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace minres::cli
