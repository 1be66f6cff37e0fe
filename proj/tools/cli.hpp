#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scenetok::cli {

// Runs one CLI invocation. args excludes the program name. Returns the
// process exit code: 0 on success, 2 on usage errors, otherwise the
// ErrorCode of the failure. Data goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace scenetok::cli
