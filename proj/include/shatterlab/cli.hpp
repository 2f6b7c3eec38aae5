#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shatterlab::cli {

enum ExitCode : int {
    kOk = 0,
    kVerificationFailed = 1,
    kInvalidInput = 2,
    kResourceCap = 3,
};

// Runs one command; `args` excludes the program name. Payload goes to `out`,
// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shatterlab::cli
