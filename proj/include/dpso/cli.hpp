#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dpso {

/// Runs one command line (without the program name). Data goes to `out`,
/// diagnostics and usage text to `err`.
///
/// Exit codes: 0 success, 2 invalid flags or arguments, 1 runtime failure.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dpso
