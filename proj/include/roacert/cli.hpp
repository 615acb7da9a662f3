#pragma once

#include <iosfwd>

namespace roacert::cli {

/// Default output directory when --out is not given (falls back to ".").
inline constexpr const char* kOutputDirEnv = "ROACERT_OUTPUT_DIR";

/// Runs one command line (solve, sweep, plot, validate, dump-sdp) and
/// returns the process exit code: 0 iff the command completed with a
/// reliable result (plot and validate only require completion).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace roacert::cli
