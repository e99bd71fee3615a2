#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stm::cli {

/// Exit codes: 0 success, 1 usage, 2 validation, 3 I/O, 4 internal consistency.
int run(int argc, char** argv);
/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stm::cli
