#pragma once

#include <iosfwd>

namespace retinexad::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 2;
inline constexpr int kExitInvalid = 3;

/// Entry point of the `retinexad` tool. Diagnostics go to `err`; reports
/// without a --report path go to `out`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace retinexad::cli
