#pragma once

#include <iosfwd>

namespace sparsebound::cli {

/// Runs the command line; returns the process exit code (0 ok, 1 usage or
/// input error, 2 when `verify` detects a violated bound).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sparsebound::cli
