#pragma once

namespace rcurc_cli {

/// Entry point of the `rcurc` command line tool, callable in-process.
/// Returns the process exit status: 0 on success, 1 when --strict is set and
/// the solver did not converge, 2 on usage, format, or I/O errors.
int run_cli(int argc, const char* const* argv);

}  // namespace rcurc_cli
