#pragma once

namespace vst {

// Entry point of the command line tool.  Returns the process exit code:
//   0  success
//   1  a checked hypothesis failed (or could not be certified)
//   2  input error: bad arguments, unreadable or malformed problem file
//   3  numerical failure: solver blow-up, divergent tails, no convergence
int run_cli(int argc, const char* const* argv);

}  // namespace vst
