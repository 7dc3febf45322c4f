#pragma once

#include <iosfwd>

namespace revtp {

/// Runs the command-line front end. Returns the process exit code: 0 on
/// success, 1 on usage errors, 2 on validation errors (error name on `err`).
int cli_run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace revtp
